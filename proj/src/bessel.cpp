#include "filament/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace filament {
namespace {

void check_argument(double x) {
  if (std::isnan(x)) throw std::domain_error("bessel_k: NaN argument");
  if (x <= 0.0) throw std::domain_error("bessel_k: argument must be positive, got " + std::to_string(x));
}

// Ascending series (A&S 9.6.13 / 9.6.11 with n = 0, 1):
//   K0 = -(log(x/2) + gamma) I0 + sum_{k>=1} H_k y^k / (k!)^2
//   K1 = 1/x + log(x/2) I1 - (x/4) sum_{k>=0} [psi(k+1) + psi(k+2)] y^k / (k!(k+1)!)
// with y = x^2/4. Converges quickly for x <= 2.
void series_k01(double x, double& k0, double& k1) {
  const double y = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);
  double t0 = 1.0;  // y^k / (k!)^2
  double t1 = 1.0;  // y^k / (k! (k+1)!)
  double harmonic = 0.0;
  double i0 = 0.0, i1_sum = 0.0, s0 = 0.0, s1 = 0.0;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      t0 *= y / (double(k) * k);
      t1 *= y / (double(k) * (k + 1));
      harmonic += 1.0 / k;
    }
    i0 += t0;
    i1_sum += t1;
    s0 += harmonic * t0;
    s1 += (2.0 * (harmonic - kEulerGamma) + 1.0 / (k + 1)) * t1;
    if (k > 2 && t0 < 1e-18 * i0) break;
  }
  k0 = -(log_half + kEulerGamma) * i0 + s0;
  k1 = 1.0 / x + log_half * (0.5 * x) * i1_sum - 0.25 * x * s1;
}

// Steed's method for the CF2 continued fraction (Temme 1975), nu = 0.
// Returns exp(x) K0(x) and exp(x) K1(x).
void continued_fraction_k01_scaled(double x, double& k0s, double& k1s) {
  constexpr double tol = 1e-16;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < tol) break;
  }
  h *= a1;
  k0s = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  k1s = k0s * (x + 0.5 - h) / x;
}

}  // namespace

BesselEval bessel_k012_scaled(double x) {
  check_argument(x);
  BesselEval r;
  r.x = x;
  r.scaled = true;
  if (x <= kBesselSeriesLimit) {
    series_k01(x, r.k0, r.k1);
    const double e = std::exp(x);
    r.k0 *= e;
    r.k1 *= e;
  } else {
    continued_fraction_k01_scaled(x, r.k0, r.k1);
  }
  r.k2 = r.k0 + 2.0 * r.k1 / x;
  return r;
}

BesselEval bessel_k012(double x) {
  check_argument(x);
  BesselEval r;
  r.x = x;
  if (x > kBesselUnderflowX) {
    r.underflow = true;
    return r;
  }
  if (x <= kBesselSeriesLimit) {
    series_k01(x, r.k0, r.k1);
  } else {
    continued_fraction_k01_scaled(x, r.k0, r.k1);
    const double e = std::exp(-x);
    r.k0 *= e;
    r.k1 *= e;
  }
  r.k2 = r.k0 + 2.0 * r.k1 / x;
  return r;
}

double bessel_k(int order, double x) {
  if (order < 0 || order > 2) throw std::domain_error("bessel_k: order must be 0, 1 or 2");
  const BesselEval r = bessel_k012(x);
  switch (order) {
    case 0: return r.k0;
    case 1: return r.k1;
    default: return r.k2;
  }
}

}  // namespace filament
