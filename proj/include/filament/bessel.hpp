// Modified Bessel functions of the second kind, orders 0, 1 and 2.
//
// Only what the slender-body multipliers need: real positive arguments,
// integer orders up to two. Small arguments use the ascending series with
// explicit logarithmic terms, larger ones Steed's continued fraction
// (Temme's CF2), which delivers exp(x) K_j(x) directly.
#pragma once

namespace filament {

/// K0, K1, K2 evaluated at one argument.
struct BesselEval {
  double x = 0.0;
  double k0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  bool scaled = false;     ///< values carry the factor exp(x)
  bool underflow = false;  ///< unscaled values flushed to zero (x > kBesselUnderflowX)
};

/// Beyond this argument exp(-x) K_j(x) is below the double range.
inline constexpr double kBesselUnderflowX = 700.0;

/// Switch point between the series and the continued fraction.
inline constexpr double kBesselSeriesLimit = 2.0;

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// K_order(x) for order in {0,1,2}. Throws std::domain_error for x <= 0,
/// NaN, or an unsupported order. Returns 0 for x > kBesselUnderflowX; use
/// bessel_k012 to observe the underflow flag.
double bessel_k(int order, double x);

/// All three orders at once (unscaled).
BesselEval bessel_k012(double x);

/// exp(x) * K_j(x); never underflows.
BesselEval bessel_k012_scaled(double x);

}  // namespace filament
