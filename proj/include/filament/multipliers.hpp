// Tangential and normal Fourier multipliers of the straight-cylinder
// slender-body Neumann-to-Dirichlet map, and their resistive-force limits.
//
// For k != 0 both multipliers depend on k only through x = 2*pi*eps*|k|:
//
//   m_t = [2 K0 K1 + x (K0^2 - K1^2)] / (4 pi x K1^2)
//   m_n = [2 K0 K1 K2 + x (K1^2 (K0 + K2) - 2 K0^2 K2)]
//         / (2 pi x [4 K1^2 K2 + x K1 (K1^2 - K0 K2)])
//
// The zero mode is regularized to the resistive-force values
// m_t(0) = |log eps| / 2pi, m_n(0) = |log eps| / 4pi.
#pragma once

#include <span>
#include <vector>

namespace filament {

enum class Direction { tangential, normal };

/// Resistive-force-theory drag coefficients.
struct RftConstants {
  double epsilon = 0.0;
  double tangential = 0.0;  ///< |log eps| / 2pi
  double normal = 0.0;      ///< |log eps| / 4pi

  static RftConstants from_epsilon(double epsilon);
  double operator[](Direction d) const { return d == Direction::tangential ? tangential : normal; }
};

/// Above this x the multipliers are evaluated from their large-x series.
inline constexpr double kMultiplierAsymptoticX = 600.0;

/// m_t and m_n as functions of x = 2 pi eps |k| > 0.
double tangential_multiplier_of_x(double x);
double normal_multiplier_of_x(double x);

/// Throw std::domain_error unless 0 < eps < 1.
void check_epsilon(double epsilon);

double eval_mt(double epsilon, long k);
double eval_mn(double epsilon, long k);
double eval_multiplier(Direction d, double epsilon, long k);

/// m_j(k) minus the resistive-force constant for direction j. Defined for
/// |k| < 1/(2 pi eps); zero at k = 0.
double lowk_rft_difference(double epsilon, long k, Direction d);

/// Largest wavenumber counted as "low": |k| < 1/(2 pi eps).
long low_wavenumber_limit(double epsilon);

/// m_t, m_n tabulated for |k| = 0..kmax at fixed eps. Immutable.
class MultiplierTable {
 public:
  MultiplierTable() = default;

  /// Populate via eval_mt / eval_mn. Requires kmax >= 1.
  static MultiplierTable build(double epsilon, int kmax);

  /// Wrap precomputed values without positivity checks (used for the
  /// resistive-force degenerate table and for mutation tests).
  static MultiplierTable from_values(double epsilon, std::vector<double> mt, std::vector<double> mn);

  /// m_t = |log eps|/2pi and m_n = |log eps|/4pi at every k.
  static MultiplierTable rft_constant(double epsilon, int kmax);

  double epsilon() const { return epsilon_; }
  int kmax() const { return static_cast<int>(mt_.size()) - 1; }
  double mt(long k) const { return mt_[static_cast<std::size_t>(k < 0 ? -k : k)]; }
  double mn(long k) const { return mn_[static_cast<std::size_t>(k < 0 ? -k : k)]; }
  double operator()(Direction d, long k) const { return d == Direction::tangential ? mt(k) : mn(k); }
  std::span<const double> tangential() const { return mt_; }
  std::span<const double> normal() const { return mn_; }
  std::span<const double> values(Direction d) const { return d == Direction::tangential ? tangential() : normal(); }

 private:
  double epsilon_ = 0.0;
  std::vector<double> mt_;
  std::vector<double> mn_;
};

inline MultiplierTable build_table(double epsilon, int kmax) { return MultiplierTable::build(epsilon, kmax); }

}  // namespace filament
