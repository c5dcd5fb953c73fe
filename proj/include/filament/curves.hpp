// Closed curves on the periodic grid, the standard initial-data corpus, and
// the arclength reparameterization that enforces |X_s| = 1 discretely.
#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "filament/spectral.hpp"

namespace filament {

/// The relative speed |X_s|/length dropped to the fold threshold.
class FoldOverError : public std::runtime_error {
 public:
  FoldOverError(double min_speed, double threshold);
  double min_speed() const { return min_speed_; }

 private:
  double min_speed_;
};

/// A closed curve X: T -> R^3, band-limited to the grid bandlimit.
class PeriodicCurve {
 public:
  PeriodicCurve(std::shared_ptr<const Grid> grid, VectorField coeffs);
  static PeriodicCurve from_samples(std::shared_ptr<const Grid> grid, std::span<const Vec3> samples);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  int n() const { return grid_->n(); }
  const VectorField& coeffs() const { return coeffs_; }

  std::vector<Vec3> samples() const { return filament::samples(*grid_, coeffs_); }
  VectorField derivative(int order) const { return filament::derivative(coeffs_, order); }
  TangentFrame frame() const { return TangentFrame(*grid_, derivative(1)); }

 private:
  std::shared_ptr<const Grid> grid_;
  VectorField coeffs_;
};

std::shared_ptr<const Grid> make_grid(int n);

/// |X_s| on the padded (2n) grid.
std::vector<double> speed_samples(const PeriodicCurve& curve);
/// int |X_s| ds
double curve_length(const PeriodicCurve& curve);
/// max | |X_s| - 1 | over the padded grid.
double inextensibility_residual(const PeriodicCurve& curve);

struct ReparamOptions {
  double target = 1e-8;        ///< stop once the residual is below this
  int max_passes = 8;
  double fold_threshold = 0.5; ///< on min |X_s| / length
};

/// Resample at equal arclength increments via spectral interpolation, then
/// rescale about the mean to unit length. Repeats until the residual meets
/// the target or max_passes is reached. Throws FoldOverError.
PeriodicCurve reparameterize_arclength(const PeriodicCurve& curve, const ReparamOptions& options = {});

/// Unit-length circle of radius 1/2pi in the xy plane.
PeriodicCurve circle_curve(std::shared_ptr<const Grid> grid);
/// r = R (1 + amplitude cos(mode theta)), reparameterized to unit length.
PeriodicCurve perturbed_circle(std::shared_ptr<const Grid> grid, int mode, double amplitude);
/// (sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t), reparameterized to unit length.
PeriodicCurve trefoil_curve(std::shared_ptr<const Grid> grid);
/// Circle plus random three-dimensional modes 2..max_mode with coefficients
/// of size amplitude * R / k^2, reparameterized to unit length.
PeriodicCurve random_curve(std::shared_ptr<const Grid> grid, std::uint64_t seed, double amplitude, int max_mode = 6);

}  // namespace filament
