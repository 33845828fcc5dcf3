#include "swapbell/lhv.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace swapbell {

std::string_view to_string(FunctionTag tag) noexcept {
  switch (tag) {
    case FunctionTag::A:
      return "A";
    case FunctionTag::D:
      return "D";
    case FunctionTag::F:
      return "F";
    case FunctionTag::G:
      return "G";
  }
  return "?";
}

FunctionTag function_tag_from_string(std::string_view text) {
  if (text == "A") return FunctionTag::A;
  if (text == "D") return FunctionTag::D;
  if (text == "F") return FunctionTag::F;
  if (text == "G") return FunctionTag::G;
  throw std::invalid_argument("unknown function tag '" + std::string(text) + "'");
}

std::size_t arity(FunctionTag tag) noexcept {
  return (tag == FunctionTag::A || tag == FunctionTag::D) ? 1 : 2;
}

AngleKey AngleKey::from_radians(double angle, double quantum) {
  if (!std::isfinite(angle)) throw std::invalid_argument("angle must be finite");
  return AngleKey{std::llround(angle / quantum)};
}

std::string SignVariable::describe(double quantum) const {
  std::string out(to_string(tag));
  out += '(';
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", keys[i].radians(quantum));
    out += buf;
  }
  out += ')';
  return out;
}

ConstraintSet::ConstraintSet(HiddenContext context, double angle_quantum)
    : context_(std::move(context)), quantum_(angle_quantum) {
  if (context_.kappa != 1 && context_.kappa != -1) {
    throw std::invalid_argument("context kappa must be +1 or -1");
  }
  if (!(quantum_ > 0.0)) throw std::invalid_argument("angle quantum must be positive");
}

VariableId ConstraintSet::intern(const SignVariable& variable) {
  if (variable.keys.size() != arity(variable.tag)) {
    throw std::invalid_argument("variable " + std::string(to_string(variable.tag)) + " takes " +
                                std::to_string(arity(variable.tag)) + " angle(s)");
  }
  const auto [it, inserted] = index_.try_emplace(variable, variables_.size());
  if (inserted) variables_.push_back(variable);
  return it->second;
}

VariableId ConstraintSet::intern(FunctionTag tag, std::span<const double> angles) {
  SignVariable v{tag, {}};
  v.keys.reserve(angles.size());
  for (double angle : angles) v.keys.push_back(AngleKey::from_radians(angle, quantum_));
  return intern(v);
}

ConstraintId ConstraintSet::add_constraint(ParityConstraint constraint) {
  if (constraint.variables.empty()) throw std::invalid_argument("constraint has no variables");
  if (constraint.required_sign != 1 && constraint.required_sign != -1) {
    throw std::invalid_argument("required sign must be +1 or -1");
  }
  for (VariableId id : constraint.variables) {
    if (id >= variables_.size()) {
      throw std::invalid_argument("constraint references unregistered variable " +
                                  std::to_string(id));
    }
  }
  constraints_.push_back(std::move(constraint));
  return constraints_.size() - 1;
}

namespace {

// Emits one constraint per non-generic setting. make_variables interns the
// variables of the product for that setting.
template <typename MakeVariables>
ConstraintSet compile_with(std::span<const AngleSettings> settings, const HiddenContext& context,
                           double tol, std::string_view equation, MakeVariables make_variables) {
  ConstraintSet cs(context);
  for (const auto& angles : settings) {
    const double z = zeta(angles, context.kappa);
    const auto sign = predicted_product(classify_angle(z, tol));
    if (!sign) continue;
    ParityConstraint c;
    c.variables = make_variables(cs, angles);
    c.required_sign = *sign;
    c.provenance = Provenance{angles, z, std::string(equation)};
    cs.add_constraint(std::move(c));
  }
  return cs;
}

}  // namespace

ConstraintSet compile_fig1(std::span<const AngleSettings> settings, const HiddenContext& context,
                           double tol) {
  return compile_with(settings, context, tol, kTagFig1,
                      [](ConstraintSet& cs, const AngleSettings& s) {
                        return std::vector<VariableId>{
                            cs.intern(FunctionTag::A, {s.phi1}),
                            cs.intern(FunctionTag::F, {s.phi2, s.phi3}),
                            cs.intern(FunctionTag::D, {s.phi4})};
                      });
}

ConstraintSet compile_fig2(std::span<const AngleSettings> settings, const HiddenContext& context,
                           double tol) {
  return compile_with(settings, context, tol, kTagFig2,
                      [](ConstraintSet& cs, const AngleSettings& s) {
                        return std::vector<VariableId>{
                            cs.intern(FunctionTag::F, {s.phi2, s.phi3}),
                            cs.intern(FunctionTag::G, {s.phi1, s.phi4})};
                      });
}

ConstraintSet compile_reduced(std::span<const AngleSettings> settings,
                              const HiddenContext& context, double tol) {
  return compile_with(settings, context, tol, kTagReduced,
                      [](ConstraintSet& cs, const AngleSettings& s) {
                        return std::vector<VariableId>{
                            cs.intern(FunctionTag::A, {s.phi1}),
                            cs.intern(FunctionTag::A, {s.phi2}),
                            cs.intern(FunctionTag::D, {s.phi3}),
                            cs.intern(FunctionTag::D, {s.phi4})};
                      });
}

ConstraintSet apply_factorization(const ConstraintSet& cs) {
  ConstraintSet out = cs;
  const double q = cs.angle_quantum();
  // Snapshot: interning below appends A/D variables only, never new F ones.
  const std::size_t n = cs.variable_count();
  for (VariableId id = 0; id < n; ++id) {
    const SignVariable f = cs.variable(id);
    if (f.tag != FunctionTag::F) continue;
    const VariableId a = out.intern(SignVariable{FunctionTag::A, {f.keys[0]}});
    const VariableId d = out.intern(SignVariable{FunctionTag::D, {f.keys[1]}});
    const double x = f.keys[0].radians(q);
    const double y = f.keys[1].radians(q);
    ParityConstraint c;
    c.variables = {id, a, d};
    c.required_sign = +1;
    c.provenance = Provenance{AngleSettings{x, x, y, y}, zeta({x, x, y, y}, cs.context().kappa),
                              std::string(kTagFactorization)};
    out.add_constraint(std::move(c));
  }
  return out;
}

ConstraintSet eliminate_factorized(const ConstraintSet& cs) {
  ConstraintSet out(cs.context(), cs.angle_quantum());
  for (const auto& constraint : cs.constraints()) {
    std::vector<VariableId> expanded;
    for (VariableId id : constraint.variables) {
      const SignVariable& v = cs.variable(id);
      if (v.tag == FunctionTag::G) {
        throw std::invalid_argument("cannot eliminate F from a set containing G variables");
      }
      if (v.tag == FunctionTag::F) {
        expanded.push_back(out.intern(SignVariable{FunctionTag::A, {v.keys[0]}}));
        expanded.push_back(out.intern(SignVariable{FunctionTag::D, {v.keys[1]}}));
      } else {
        expanded.push_back(out.intern(v));
      }
    }
    // Drop the constraint if every variable cancels and the sign is +1.
    std::map<VariableId, int> counts;
    for (VariableId id : expanded) counts[id] ^= 1;
    bool all_even = true;
    for (const auto& [id, odd] : counts) all_even = all_even && odd == 0;
    if (all_even && constraint.required_sign == 1) continue;

    ParityConstraint c = constraint;
    c.variables = std::move(expanded);
    out.add_constraint(std::move(c));
  }
  return out;
}

std::array<AngleSettings, 2> proof_settings(double alpha, double beta, int kappa) {
  if (kappa != 1 && kappa != -1) throw std::invalid_argument("kappa must be +1 or -1");
  constexpr double q = std::numbers::pi / 4;
  const AngleSettings plus_first{alpha, alpha + q, beta + q, beta};
  const AngleSettings plus_second{alpha, alpha + q, beta, beta + q};
  // For kappa = -1 the phi3/phi4 roles swap so that zeta is still 0, then -pi/2.
  if (kappa == 1) return {plus_first, plus_second};
  return {plus_second, plus_first};
}

ConstraintSet paper_proof_instance(double alpha, double beta, int kappa) {
  const auto settings = proof_settings(alpha, beta, kappa);
  auto cs = compile_reduced(settings, HiddenContext{kappa, kappa == 1 ? "kappa+" : "kappa-"});
  if (cs.constraint_count() != 2) {
    throw std::domain_error("proof settings did not classify as perfect correlations");
  }
  return cs;
}

}  // namespace swapbell
