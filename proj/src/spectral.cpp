#include "filament/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace filament {
namespace {

// The FFTW planner is not thread safe; execution with the new-array
// interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

}  // namespace

struct Grid::Plans {
  fftw_plan r2c_n = nullptr;
  fftw_plan c2r_n = nullptr;
  fftw_plan r2c_2n = nullptr;
  fftw_plan c2r_2n = nullptr;
};

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

Grid::Grid(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n < 16 || !is_power_of_two(n))
    throw std::invalid_argument("Grid: n must be a power of two >= 16, got " + std::to_string(n));
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  for (int m : {n, 2 * n}) {
    double* re = fftw_alloc_real(sz(m));
    fftw_complex* co = fftw_alloc_complex(sz(m / 2 + 1));
    fftw_plan r2c = fftw_plan_dft_r2c_1d(m, re, co, flags);
    fftw_plan c2r = fftw_plan_dft_c2r_1d(m, co, re, flags);
    if (m == n) {
      plans_->r2c_n = r2c;
      plans_->c2r_n = c2r;
    } else {
      plans_->r2c_2n = r2c;
      plans_->c2r_2n = c2r;
    }
    fftw_free(re);
    fftw_free(co);
  }
}

Grid::~Grid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->r2c_n);
  fftw_destroy_plan(plans_->c2r_n);
  fftw_destroy_plan(plans_->r2c_2n);
  fftw_destroy_plan(plans_->c2r_2n);
}

Spectrum Grid::forward(std::span<const double> samples) const {
  if (samples.size() != sz(n_)) throw std::invalid_argument("Grid::forward: wrong sample count");
  std::vector<double> in(samples.begin(), samples.end());
  Spectrum out(sz(modes()));
  fftw_execute_dft_r2c(plans_->r2c_n, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / n_;
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<double> Grid::inverse(const Spectrum& hat) const {
  if (hat.size() != sz(modes())) throw std::invalid_argument("Grid::inverse: wrong spectrum size");
  Spectrum in(hat);
  std::vector<double> out(sz(n_));
  fftw_execute_dft_c2r(plans_->c2r_n, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

std::vector<double> Grid::inverse_padded(const Spectrum& hat) const {
  if (hat.size() != sz(modes())) throw std::invalid_argument("Grid::inverse_padded: wrong spectrum size");
  Spectrum in(sz(n_ + 1));
  for (int k = 0; k < n_ / 2; ++k) in[sz(k)] = hat[sz(k)];
  std::vector<double> out(sz(2 * n_));
  fftw_execute_dft_c2r(plans_->c2r_2n, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

Spectrum Grid::forward_padded_full(std::span<const double> samples) const {
  if (samples.size() != sz(2 * n_)) throw std::invalid_argument("Grid::forward_padded: wrong sample count");
  std::vector<double> in(samples.begin(), samples.end());
  Spectrum out(sz(n_ + 1));
  fftw_execute_dft_r2c(plans_->r2c_2n, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / (2 * n_);
  for (auto& c : out) c *= scale;
  return out;
}

Spectrum Grid::forward_padded(std::span<const double> samples, int kmax) const {
  Spectrum full = forward_padded_full(samples);
  Spectrum out(sz(modes()));
  const int top = std::min(kmax, n_ / 2);
  for (int k = 0; k <= top; ++k) out[sz(k)] = full[sz(k)];
  return out;
}

// ---------------------------------------------------------------------------
// field arithmetic

namespace {
void add_into(Spectrum& a, const Spectrum& b, double s) {
  if (a.size() != b.size()) throw std::invalid_argument("field size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}
}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& o) { add_into(hat, o.hat, 1.0); return *this; }
ScalarField& ScalarField::operator-=(const ScalarField& o) { add_into(hat, o.hat, -1.0); return *this; }
ScalarField& ScalarField::operator*=(double a) {
  for (auto& c : hat) c *= a;
  return *this;
}

VectorField VectorField::zero(const Grid& g) {
  VectorField v;
  for (auto& h : v.hat) h.assign(sz(g.modes()), cplx{});
  return v;
}
VectorField& VectorField::operator+=(const VectorField& o) {
  for (int c = 0; c < 3; ++c) add_into(hat[sz(c)], o.hat[sz(c)], 1.0);
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
  for (int c = 0; c < 3; ++c) add_into(hat[sz(c)], o.hat[sz(c)], -1.0);
  return *this;
}
VectorField& VectorField::operator*=(double a) {
  for (auto& h : hat)
    for (auto& c : h) c *= a;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double a, ScalarField f) { return f *= a; }
VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double a, VectorField f) { return f *= a; }

ScalarField scalar_from_samples(const Grid& g, std::span<const double> s) { return {g.forward(s)}; }

VectorField vector_from_samples(const Grid& g, std::span<const Vec3> s) {
  VectorField v;
  std::vector<double> buf(s.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < s.size(); ++i) buf[i] = s[i][sz(c)];
    v.hat[sz(c)] = g.forward(buf);
  }
  return v;
}

std::vector<double> samples(const Grid& g, const ScalarField& f) { return g.inverse(f.hat); }

std::vector<Vec3> samples(const Grid& g, const VectorField& f) {
  std::vector<Vec3> out(sz(g.n()));
  for (int c = 0; c < 3; ++c) {
    const auto comp = g.inverse(f.hat[sz(c)]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i][sz(c)] = comp[i];
  }
  return out;
}

ScalarField band_limit(ScalarField f, int kmax) {
  for (std::size_t k = sz(kmax) + 1; k < f.hat.size(); ++k) f.hat[k] = 0.0;
  return f;
}

VectorField band_limit(VectorField f, int kmax) {
  for (auto& h : f.hat)
    for (std::size_t k = sz(kmax) + 1; k < h.size(); ++k) h[k] = 0.0;
  return f;
}

// ---------------------------------------------------------------------------
// linear spectral operators

namespace {

Spectrum derivative_spectrum(const Spectrum& hat, int order) {
  if (order < 0) throw std::invalid_argument("derivative: order must be nonnegative");
  Spectrum out(hat.size());
  if (order == 0) return hat;
  const std::size_t nyq = hat.size() - 1;
  for (std::size_t k = 1; k < nyq; ++k) {
    const cplx ik(0.0, two_pi * static_cast<double>(k));
    cplx factor = 1.0;
    for (int j = 0; j < order; ++j) factor *= ik;
    out[k] = factor * hat[k];
  }
  return out;
}

Spectrum multiplier_spectrum(const Spectrum& hat, std::span<const double> m, double power) {
  const std::size_t nyq = hat.size() - 1;
  if (m.size() < nyq + 1) throw std::invalid_argument("apply_multiplier: multiplier table shorter than n/2 + 1");
  Spectrum out(hat.size());
  for (std::size_t k = 0; k < nyq; ++k) {
    if (!(m[k] > 0.0))
      throw std::domain_error("apply_multiplier: nonpositive multiplier at k = " + std::to_string(k));
    const double w = power == 1.0 ? m[k] : std::pow(m[k], power);
    out[k] = w * hat[k];
  }
  return out;
}

}  // namespace

ScalarField derivative(const ScalarField& f, int order) { return {derivative_spectrum(f.hat, order)}; }

VectorField derivative(const VectorField& f, int order) {
  VectorField out;
  for (int c = 0; c < 3; ++c) out.hat[sz(c)] = derivative_spectrum(f.hat[sz(c)], order);
  return out;
}

ScalarField apply_multiplier(const ScalarField& f, std::span<const double> m, double power) {
  return {multiplier_spectrum(f.hat, m, power)};
}

VectorField apply_multiplier(const VectorField& f, std::span<const double> m, double power) {
  VectorField out;
  for (int c = 0; c < 3; ++c) out.hat[sz(c)] = multiplier_spectrum(f.hat[sz(c)], m, power);
  return out;
}

// ---------------------------------------------------------------------------
// dealiased products

ScalarField multiply(const Grid& g, const ScalarField& a, const ScalarField& b) {
  auto pa = g.inverse_padded(a.hat);
  const auto pb = g.inverse_padded(b.hat);
  for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
  return {g.forward_padded(pa, g.bandlimit())};
}

VectorField multiply(const Grid& g, const ScalarField& a, const VectorField& v) {
  const auto pa = g.inverse_padded(a.hat);
  VectorField out;
  for (int c = 0; c < 3; ++c) {
    auto pv = g.inverse_padded(v.hat[sz(c)]);
    for (std::size_t i = 0; i < pv.size(); ++i) pv[i] *= pa[i];
    out.hat[sz(c)] = g.forward_padded(pv, g.bandlimit());
  }
  return out;
}

ScalarField dot(const Grid& g, const VectorField& u, const VectorField& v) {
  std::vector<double> acc(sz(2 * g.n()), 0.0);
  for (int c = 0; c < 3; ++c) {
    const auto pu = g.inverse_padded(u.hat[sz(c)]);
    const auto pv = g.inverse_padded(v.hat[sz(c)]);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += pu[i] * pv[i];
  }
  return {g.forward_padded(acc, g.bandlimit())};
}

// ---------------------------------------------------------------------------
// norms

namespace {

double spectral_inner(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: size mismatch");
  const std::size_t nyq = a.size() - 1;
  double s = (a[0] * std::conj(b[0])).real() + (a[nyq] * std::conj(b[nyq])).real();
  for (std::size_t k = 1; k < nyq; ++k) s += 2.0 * (a[k] * std::conj(b[k])).real();
  return s;
}

double sobolev_weight(std::size_t k, SobolevIndex idx) {
  const double kk = static_cast<double>(k);
  if (idx.homogeneous) return k == 0 ? 0.0 : std::pow(kk, 2.0 * idx.order);
  return std::pow(1.0 + kk * kk, idx.order);
}

double sobolev_sq(const Spectrum& a, SobolevIndex idx) {
  const std::size_t nyq = a.size() - 1;
  double s = sobolev_weight(0, idx) * std::norm(a[0]) + sobolev_weight(nyq, idx) * std::norm(a[nyq]);
  for (std::size_t k = 1; k < nyq; ++k) s += 2.0 * sobolev_weight(k, idx) * std::norm(a[k]);
  return s;
}

}  // namespace

double inner(const ScalarField& f, const ScalarField& g) { return spectral_inner(f.hat, g.hat); }

double inner(const VectorField& f, const VectorField& g) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += spectral_inner(f.hat[sz(c)], g.hat[sz(c)]);
  return s;
}

double sobolev_norm(const ScalarField& f, SobolevIndex index) { return std::sqrt(sobolev_sq(f.hat, index)); }

double sobolev_norm(const VectorField& f, SobolevIndex index) {
  double s = 0.0;
  for (const auto& h : f.hat) s += sobolev_sq(h, index);
  return std::sqrt(s);
}

double hermitian_defect(const ScalarField& f) {
  return std::max(std::abs(f.hat.front().imag()), std::abs(f.hat.back().imag()));
}

// ---------------------------------------------------------------------------

TangentFrame::TangentFrame(const Grid& g, const VectorField& tangent) : grid_(&g), tangent_(tangent) {
  for (int c = 0; c < 3; ++c) padded_[sz(c)] = g.inverse_padded(tangent.hat[sz(c)]);
}

VectorField TangentFrame::project_tangent(const VectorField& h) const {
  const Grid& g = *grid_;
  std::array<std::vector<double>, 3> ph;
  for (int c = 0; c < 3; ++c) ph[sz(c)] = g.inverse_padded(h.hat[sz(c)]);
  const std::size_t m = ph[0].size();
  std::vector<double> d(m);
  for (std::size_t i = 0; i < m; ++i)
    d[i] = padded_[0][i] * ph[0][i] + padded_[1][i] * ph[1][i] + padded_[2][i] * ph[2][i];
  VectorField out;
  for (int c = 0; c < 3; ++c) {
    auto& buf = ph[sz(c)];
    for (std::size_t i = 0; i < m; ++i) buf[i] = d[i] * padded_[sz(c)][i];
    out.hat[sz(c)] = g.forward_padded(buf, g.bandlimit());
  }
  return out;
}

VectorField TangentFrame::project_normal(const VectorField& h) const {
  return band_limit(h, grid_->bandlimit()) - project_tangent(h);
}

VectorField TangentFrame::scale(const ScalarField& a) const {
  const Grid& g = *grid_;
  const auto pa = g.inverse_padded(a.hat);
  VectorField out;
  std::vector<double> buf(pa.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = pa[i] * padded_[sz(c)][i];
    out.hat[sz(c)] = g.forward_padded(buf, g.bandlimit());
  }
  return out;
}

ScalarField TangentFrame::dot(const VectorField& v) const {
  const Grid& g = *grid_;
  std::vector<double> acc(padded_[0].size(), 0.0);
  for (int c = 0; c < 3; ++c) {
    const auto pv = g.inverse_padded(v.hat[sz(c)]);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += padded_[sz(c)][i] * pv[i];
  }
  return {g.forward_padded(acc, g.bandlimit())};
}

}  // namespace filament
