// Periodic spectral grid on the unit circle s in [0, 1).
//
// Fields are stored as half spectra f^(k), k = 0..n/2, normalized so that
// f(s) = sum_k f^(k) exp(2 pi i k s). Pointwise products are evaluated on a
// grid of 2n points and truncated back to |k| <= n/3 (2/3 rule), so every
// product of band-limited fields is the exact Galerkin projection and the
// induced operators are symmetric in the L2 inner product.
#pragma once

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace filament {

using cplx = std::complex<double>;
using Spectrum = std::vector<cplx>;
using Vec3 = std::array<double, 3>;

class Grid {
 public:
  /// n must be a power of two, n >= 16.
  explicit Grid(int n);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int n() const { return n_; }
  int modes() const { return n_ / 2 + 1; }
  int nyquist() const { return n_ / 2; }
  /// Largest retained wavenumber after a dealiased product.
  int bandlimit() const { return n_ / 3; }

  Spectrum forward(std::span<const double> samples) const;
  std::vector<double> inverse(const Spectrum& hat) const;

  /// Samples on the 2n grid (zero padding; Nyquist of the n grid dropped).
  std::vector<double> inverse_padded(const Spectrum& hat) const;
  /// Spectrum of 2n samples, truncated to |k| <= kmax (kmax <= n/2).
  Spectrum forward_padded(std::span<const double> samples, int kmax) const;
  /// Full spectrum (k = 0..n) of 2n samples.
  Spectrum forward_padded_full(std::span<const double> samples) const;

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

bool is_power_of_two(long n);

struct ScalarField {
  Spectrum hat;

  static ScalarField zero(const Grid& g) { return {Spectrum(static_cast<std::size_t>(g.modes()))}; }
  int n() const { return 2 * (static_cast<int>(hat.size()) - 1); }
  double mean() const { return hat.empty() ? 0.0 : hat[0].real(); }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);
};

struct VectorField {
  std::array<Spectrum, 3> hat;

  static VectorField zero(const Grid& g);
  int n() const { return 2 * (static_cast<int>(hat[0].size()) - 1); }
  Vec3 mean() const { return {hat[0][0].real(), hat[1][0].real(), hat[2][0].real()}; }
  ScalarField component(int c) const { return {hat[static_cast<std::size_t>(c)]}; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double a, ScalarField f);
VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double a, VectorField f);

ScalarField scalar_from_samples(const Grid& g, std::span<const double> samples);
VectorField vector_from_samples(const Grid& g, std::span<const Vec3> samples);
std::vector<double> samples(const Grid& g, const ScalarField& f);
std::vector<Vec3> samples(const Grid& g, const VectorField& f);

/// Zero every mode with |k| > kmax.
ScalarField band_limit(ScalarField f, int kmax);
VectorField band_limit(VectorField f, int kmax);

/// Spectral derivative d^order/ds^order. Mean and Nyquist modes are zeroed.
ScalarField derivative(const ScalarField& f, int order);
VectorField derivative(const VectorField& f, int order);

/// F^-1[m(|k|)^power F[f]]; m indexed by |k| and must cover k <= n/2.
/// Nonpositive entries raise std::domain_error. Nyquist mode zeroed.
ScalarField apply_multiplier(const ScalarField& f, std::span<const double> m, double power = 1.0);
VectorField apply_multiplier(const VectorField& f, std::span<const double> m, double power = 1.0);

/// Dealiased products, truncated to the grid bandlimit.
ScalarField multiply(const Grid& g, const ScalarField& a, const ScalarField& b);
VectorField multiply(const Grid& g, const ScalarField& a, const VectorField& v);
ScalarField dot(const Grid& g, const VectorField& u, const VectorField& v);

/// L2 inner product  int_T f g ds, evaluated by Parseval.
double inner(const ScalarField& f, const ScalarField& g);
double inner(const VectorField& f, const VectorField& g);

/// (sum_k w(k) |f^(k)|^2)^(1/2) with w = (1+k^2)^order, or |k|^(2 order)
/// with k = 0 dropped when homogeneous. k is the integer wavenumber.
struct SobolevIndex {
  double order = 0.0;
  bool homogeneous = false;
};
double sobolev_norm(const ScalarField& f, SobolevIndex index);
double sobolev_norm(const VectorField& f, SobolevIndex index);

/// Largest |imaginary part| of the mean and Nyquist modes; a Hermitian
/// half spectrum has both real.
double hermitian_defect(const ScalarField& f);

/// The tangent field X_s sampled on the padded grid, reused across the many
/// projections applied at one curve.
class TangentFrame {
 public:
  TangentFrame(const Grid& g, const VectorField& tangent);

  const Grid& grid() const { return *grid_; }
  const VectorField& tangent() const { return tangent_; }

  /// P h = (X_s . h) X_s
  VectorField project_tangent(const VectorField& h) const;
  /// (I - P) h
  VectorField project_normal(const VectorField& h) const;
  /// a X_s
  VectorField scale(const ScalarField& a) const;
  /// X_s . v
  ScalarField dot(const VectorField& v) const;

 private:
  const Grid* grid_;
  VectorField tangent_;
  std::array<std::vector<double>, 3> padded_;
};

}  // namespace filament
