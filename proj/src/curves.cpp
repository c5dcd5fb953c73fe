#include "filament/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace filament {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

// Arclength function sigma(s) = L s + sum_k s^(k) (e^{2 pi i k s} - 1)/(2 pi i k)
// and its derivative, from the half spectrum of the speed.
struct ArclengthMap {
  Spectrum speed;  // k = 0..m
  double length;

  void eval(double s, double& sigma, double& dsigma) const {
    const cplx w(std::cos(two_pi * s), std::sin(two_pi * s));
    cplx e = 1.0;
    sigma = length * s;
    dsigma = length;
    for (std::size_t k = 1; k < speed.size(); ++k) {
      e *= w;
      const cplx c = speed[k];
      sigma += 2.0 * (c * (e - 1.0) / cplx(0.0, two_pi * static_cast<double>(k))).real();
      dsigma += 2.0 * (c * e).real();
    }
  }
};

Vec3 evaluate(const VectorField& f, int kmax, double s) {
  const cplx w(std::cos(two_pi * s), std::sin(two_pi * s));
  Vec3 out{f.hat[0][0].real(), f.hat[1][0].real(), f.hat[2][0].real()};
  cplx e = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    e *= w;
    for (int c = 0; c < 3; ++c) out[sz(c)] += 2.0 * (f.hat[sz(c)][sz(k)] * e).real();
  }
  return out;
}

PeriodicCurve reparameterize_once(const PeriodicCurve& curve, double fold_threshold) {
  const Grid& g = curve.grid();
  const int n = g.n();
  const auto speed = speed_samples(curve);
  Spectrum spec = g.forward_padded_full(speed);
  spec.pop_back();  // drop the 2n-grid Nyquist
  const double L = spec[0].real();
  const double vmin = *std::min_element(speed.begin(), speed.end());
  if (!(vmin / L > fold_threshold)) throw FoldOverError(vmin / L, fold_threshold);

  ArclengthMap map{std::move(spec), L};
  std::vector<Vec3> pts(sz(n));
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double target = L * j / n;
    if (j > 0) s += 1.0 / n;
    double sigma = 0.0, ds = L;
    for (int it = 0; it < 50; ++it) {
      map.eval(s, sigma, ds);
      const double step = (sigma - target) / ds;
      s -= step;
      if (std::abs(step) < 1e-15) break;
    }
    pts[sz(j)] = evaluate(curve.coeffs(), g.bandlimit(), s);
  }
  VectorField f = band_limit(vector_from_samples(g, pts), g.bandlimit());
  const Vec3 mean = f.mean();
  f *= 1.0 / L;
  for (int c = 0; c < 3; ++c) f.hat[sz(c)][0] = mean[sz(c)];
  return PeriodicCurve(curve.grid_ptr(), std::move(f));
}

}  // namespace

FoldOverError::FoldOverError(double min_speed, double threshold)
    : std::runtime_error("fold-over: relative speed " + std::to_string(min_speed) + " <= " +
                         std::to_string(threshold)),
      min_speed_(min_speed) {}

PeriodicCurve::PeriodicCurve(std::shared_ptr<const Grid> grid, VectorField coeffs) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("PeriodicCurve: null grid");
  for (const auto& h : coeffs.hat)
    if (h.size() != sz(grid_->modes())) throw std::invalid_argument("PeriodicCurve: spectrum size mismatch");
  for (auto& h : coeffs.hat) h[0] = h[0].real();
  coeffs_ = band_limit(std::move(coeffs), grid_->bandlimit());
}

PeriodicCurve PeriodicCurve::from_samples(std::shared_ptr<const Grid> grid, std::span<const Vec3> samples) {
  if (samples.size() != sz(grid->n())) throw std::invalid_argument("PeriodicCurve: sample count must equal n");
  VectorField f = vector_from_samples(*grid, samples);
  return PeriodicCurve(std::move(grid), std::move(f));
}

std::shared_ptr<const Grid> make_grid(int n) { return std::make_shared<const Grid>(n); }

std::vector<double> speed_samples(const PeriodicCurve& curve) {
  const Grid& g = curve.grid();
  const VectorField xs = curve.derivative(1);
  std::vector<double> speed(sz(2 * g.n()), 0.0);
  for (int c = 0; c < 3; ++c) {
    const auto p = g.inverse_padded(xs.hat[sz(c)]);
    for (std::size_t i = 0; i < speed.size(); ++i) speed[i] += p[i] * p[i];
  }
  for (auto& v : speed) v = std::sqrt(v);
  return speed;
}

double curve_length(const PeriodicCurve& curve) {
  const auto speed = speed_samples(curve);
  double s = 0.0;
  for (double v : speed) s += v;
  return s / static_cast<double>(speed.size());
}

double inextensibility_residual(const PeriodicCurve& curve) {
  double r = 0.0;
  for (double v : speed_samples(curve)) r = std::max(r, std::abs(v - 1.0));
  return r;
}

PeriodicCurve reparameterize_arclength(const PeriodicCurve& curve, const ReparamOptions& options) {
  PeriodicCurve c = reparameterize_once(curve, options.fold_threshold);
  for (int pass = 1; pass < options.max_passes; ++pass) {
    if (inextensibility_residual(c) <= options.target) break;
    c = reparameterize_once(c, options.fold_threshold);
  }
  return c;
}

namespace {

template <class F>
PeriodicCurve sample_curve(std::shared_ptr<const Grid> grid, F&& x_of_s) {
  std::vector<Vec3> pts(sz(grid->n()));
  for (int j = 0; j < grid->n(); ++j) pts[sz(j)] = x_of_s(static_cast<double>(j) / grid->n());
  return PeriodicCurve::from_samples(std::move(grid), pts);
}

constexpr double circle_radius = 1.0 / two_pi;

}  // namespace

PeriodicCurve circle_curve(std::shared_ptr<const Grid> grid) {
  return sample_curve(std::move(grid), [](double s) {
    return Vec3{circle_radius * std::cos(two_pi * s), circle_radius * std::sin(two_pi * s), 0.0};
  });
}

PeriodicCurve perturbed_circle(std::shared_ptr<const Grid> grid, int mode, double amplitude) {
  if (mode < 0 || mode + 1 > grid->bandlimit()) throw std::invalid_argument("perturbed_circle: mode not resolved");
  auto c = sample_curve(std::move(grid), [&](double s) {
    const double t = two_pi * s;
    const double r = circle_radius * (1.0 + amplitude * std::cos(mode * t));
    return Vec3{r * std::cos(t), r * std::sin(t), 0.0};
  });
  return reparameterize_arclength(c);
}

PeriodicCurve trefoil_curve(std::shared_ptr<const Grid> grid) {
  auto c = sample_curve(std::move(grid), [](double s) {
    const double t = two_pi * s;
    return Vec3{std::sin(t) + 2.0 * std::sin(2.0 * t), std::cos(t) - 2.0 * std::cos(2.0 * t), -std::sin(3.0 * t)};
  });
  return reparameterize_arclength(c);
}

PeriodicCurve random_curve(std::shared_ptr<const Grid> grid, std::uint64_t seed, double amplitude, int max_mode) {
  if (max_mode > grid->bandlimit()) throw std::invalid_argument("random_curve: max_mode not resolved");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorField f = circle_curve(grid).coeffs();
  for (int k = 2; k <= max_mode; ++k) {
    const double scale = amplitude * circle_radius / (static_cast<double>(k) * k);
    for (int c = 0; c < 3; ++c) f.hat[sz(c)][sz(k)] += scale * cplx(u(rng), u(rng));
  }
  return reparameterize_arclength(PeriodicCurve(std::move(grid), std::move(f)));
}

}  // namespace filament
