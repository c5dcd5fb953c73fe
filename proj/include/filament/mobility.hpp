// Force-to-velocity maps acting on band-limited vector fields along a curve.
//
//   slender body:  L f = P T_{m_t}(P f) + P^perp T_{m_n}(P^perp f)
//   resistive:     L f = (|log eps|/4pi) (I + X_s (x) X_s) f
//
// P is the pointwise tangential projection (X_s . f) X_s. All products are
// dealiased, so both maps are exactly symmetric on band-limited fields.
#pragma once

#include <memory>
#include <span>
#include <string>

#include "filament/multipliers.hpp"
#include "filament/spectral.hpp"

namespace filament {

enum class Model { leps, rft };

const char* model_name(Model m);
/// "leps" or "rft"; throws std::invalid_argument otherwise.
Model parse_model(const std::string& name);

VectorField apply_L_eps(const TangentFrame& frame, const MultiplierTable& table, const VectorField& f);
VectorField apply_L_rft(const TangentFrame& frame, const RftConstants& c, const VectorField& f);

/// sum_k m(|k|) |f^(k)|^2 over the full spectrum (both signs of k).
double weighted_square_sum(const ScalarField& f, std::span<const double> m);
double weighted_square_sum(const VectorField& f, std::span<const double> m);

/// int f . L f ds computed as sum_k m_t |F[P f]|^2 + m_n |F[P^perp f]|^2.
/// No positivity check on the table, so a corrupted table shows up as a
/// nonpositive form rather than an exception.
double slender_body_form(const TangentFrame& frame, const MultiplierTable& table, const VectorField& f);

/// Either map behind one interface. Cheap to copy; the table is shared.
class Mobility {
 public:
  static Mobility slender_body(MultiplierTable table);
  static Mobility slender_body(std::shared_ptr<const MultiplierTable> table);
  /// kmax sizes the constant table used by preconditioners.
  static Mobility resistive(double epsilon, int kmax);

  Model model() const { return model_; }
  double epsilon() const { return table_->epsilon(); }
  const MultiplierTable& table() const { return *table_; }
  const RftConstants& rft() const { return rft_; }
  double mt(long k) const { return table_->mt(k); }
  double mn(long k) const { return table_->mn(k); }

  VectorField apply(const TangentFrame& frame, const VectorField& f) const;
  /// int f . L f ds
  double quadratic_form(const TangentFrame& frame, const VectorField& f) const;

 private:
  Model model_ = Model::leps;
  std::shared_ptr<const MultiplierTable> table_;
  RftConstants rft_;
};

}  // namespace filament
