#include "filament/mobility.hpp"

#include <stdexcept>
#include <string>

namespace filament {

const char* model_name(Model m) { return m == Model::leps ? "leps" : "rft"; }

Model parse_model(const std::string& name) {
  if (name == "leps") return Model::leps;
  if (name == "rft") return Model::rft;
  throw std::invalid_argument("unknown model '" + name + "' (expected leps or rft)");
}

VectorField apply_L_eps(const TangentFrame& frame, const MultiplierTable& table, const VectorField& f) {
  const int K = frame.grid().bandlimit();
  const VectorField g = frame.project_tangent(f);
  const VectorField h = band_limit(f, K) - g;
  VectorField out = frame.project_tangent(apply_multiplier(g, table.tangential()));
  const VectorField th = apply_multiplier(h, table.normal());
  out += th;
  out -= frame.project_tangent(th);
  return out;
}

VectorField apply_L_rft(const TangentFrame& frame, const RftConstants& c, const VectorField& f) {
  VectorField out = band_limit(f, frame.grid().bandlimit());
  out += frame.project_tangent(f);
  out *= c.normal;
  return out;
}

double weighted_square_sum(const ScalarField& f, std::span<const double> m) {
  const std::size_t nyq = f.hat.size() - 1;
  if (m.size() < nyq) throw std::invalid_argument("weighted_square_sum: table too short");
  double s = m[0] * std::norm(f.hat[0]);
  for (std::size_t k = 1; k < nyq; ++k) s += 2.0 * m[k] * std::norm(f.hat[k]);
  return s;
}

double weighted_square_sum(const VectorField& f, std::span<const double> m) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += weighted_square_sum(f.component(c), m);
  return s;
}

double slender_body_form(const TangentFrame& frame, const MultiplierTable& table, const VectorField& f) {
  const VectorField g = frame.project_tangent(f);
  const VectorField h = band_limit(f, frame.grid().bandlimit()) - g;
  return weighted_square_sum(g, table.tangential()) + weighted_square_sum(h, table.normal());
}

Mobility Mobility::slender_body(MultiplierTable table) {
  return slender_body(std::make_shared<const MultiplierTable>(std::move(table)));
}

Mobility Mobility::slender_body(std::shared_ptr<const MultiplierTable> table) {
  if (!table) throw std::invalid_argument("Mobility: null table");
  Mobility m;
  m.model_ = Model::leps;
  m.rft_ = RftConstants::from_epsilon(table->epsilon());
  m.table_ = std::move(table);
  return m;
}

Mobility Mobility::resistive(double epsilon, int kmax) {
  Mobility m;
  m.model_ = Model::rft;
  m.rft_ = RftConstants::from_epsilon(epsilon);
  m.table_ = std::make_shared<const MultiplierTable>(MultiplierTable::rft_constant(epsilon, kmax));
  return m;
}

VectorField Mobility::apply(const TangentFrame& frame, const VectorField& f) const {
  return model_ == Model::leps ? apply_L_eps(frame, *table_, f) : apply_L_rft(frame, rft_, f);
}

double Mobility::quadratic_form(const TangentFrame& frame, const VectorField& f) const {
  if (model_ == Model::leps) return slender_body_form(frame, *table_, f);
  const VectorField g = frame.project_tangent(f);
  const VectorField b = band_limit(f, frame.grid().bandlimit());
  return rft_.normal * (inner(b, b) + inner(b, g));
}

}  // namespace filament
