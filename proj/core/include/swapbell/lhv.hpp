#pragma once

// Deterministic local-realistic model as a system of +-1 unknowns.
//
// For one fixed hidden-variable context (lambda_1, lambda_4) every
// element-of-reality function becomes a sign-valued unknown keyed by the
// angles it may depend on:
//   A(phi1)        polarization of photon a
//   D(phi4)        polarization of photon d
//   F(phi2, phi3)  polarization product of the bc Bell outcome
//   G(phi1, phi4)  polarization product of the ad Bell outcome
// kappa is a constant of the context, so it has no variable of its own.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swapbell/correlation.hpp"
#include "swapbell/quantum.hpp"

namespace swapbell {

inline constexpr double kDefaultAngleQuantum = 1e-9;

enum class FunctionTag { A, D, F, G };

std::string_view to_string(FunctionTag tag) noexcept;
/// Throws std::invalid_argument for anything but "A", "D", "F", "G".
FunctionTag function_tag_from_string(std::string_view text);
/// Number of angle keys the function takes: 1 for A and D, 2 for F and G.
std::size_t arity(FunctionTag tag) noexcept;

struct HiddenContext {
  int kappa = +1;
  std::string label = "lambda";

  friend bool operator==(const HiddenContext&, const HiddenContext&) = default;
};

/// An angle rounded to an integer multiple of the canonicalization quantum.
struct AngleKey {
  std::int64_t ticks = 0;

  static AngleKey from_radians(double angle, double quantum = kDefaultAngleQuantum);
  double radians(double quantum = kDefaultAngleQuantum) const noexcept {
    return static_cast<double>(ticks) * quantum;
  }

  friend auto operator<=>(const AngleKey&, const AngleKey&) = default;
};

struct SignVariable {
  FunctionTag tag = FunctionTag::A;
  std::vector<AngleKey> keys;

  std::string describe(double quantum = kDefaultAngleQuantum) const;

  friend auto operator<=>(const SignVariable&, const SignVariable&) = default;
  friend bool operator==(const SignVariable&, const SignVariable&) = default;
};

using VariableId = std::size_t;
using ConstraintId = std::size_t;

// Provenance equation tags.
inline constexpr std::string_view kTagFig1 = "fig1:a*f*d";
inline constexpr std::string_view kTagFig2 = "fig2:f*g";
inline constexpr std::string_view kTagFactorization = "factorization:f*a*d";
inline constexpr std::string_view kTagReduced = "reduced:a*a*d*d";

struct Provenance {
  AngleSettings angles;
  double zeta = 0.0;
  std::string equation;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// The product of the variables' +-1 values must equal required_sign.
/// A variable listed twice contributes its square (+1).
struct ParityConstraint {
  std::vector<VariableId> variables;
  int required_sign = +1;
  Provenance provenance;

  friend bool operator==(const ParityConstraint&, const ParityConstraint&) = default;
};

class ConstraintSet {
 public:
  explicit ConstraintSet(HiddenContext context = {},
                         double angle_quantum = kDefaultAngleQuantum);

  const HiddenContext& context() const noexcept { return context_; }
  double angle_quantum() const noexcept { return quantum_; }

  /// Returns the existing id when an identical variable is registered.
  /// Throws std::invalid_argument if the key count does not match the tag.
  VariableId intern(const SignVariable& variable);
  VariableId intern(FunctionTag tag, std::span<const double> angles);
  VariableId intern(FunctionTag tag, std::initializer_list<double> angles) {
    return intern(tag, std::span<const double>(angles.begin(), angles.size()));
  }

  /// Throws std::invalid_argument for an empty variable list, an unregistered
  /// id, or a sign other than +-1.
  ConstraintId add_constraint(ParityConstraint constraint);

  std::size_t variable_count() const noexcept { return variables_.size(); }
  std::size_t constraint_count() const noexcept { return constraints_.size(); }
  const SignVariable& variable(VariableId id) const { return variables_.at(id); }
  const std::vector<SignVariable>& variables() const noexcept { return variables_; }
  const ParityConstraint& constraint(ConstraintId id) const { return constraints_.at(id); }
  const std::vector<ParityConstraint>& constraints() const noexcept { return constraints_; }

  friend bool operator==(const ConstraintSet& lhs, const ConstraintSet& rhs) {
    return lhs.context_ == rhs.context_ && lhs.quantum_ == rhs.quantum_ &&
           lhs.variables_ == rhs.variables_ && lhs.constraints_ == rhs.constraints_;
  }

 private:
  HiddenContext context_;
  double quantum_;
  std::vector<SignVariable> variables_;
  std::map<SignVariable, VariableId> index_;
  std::vector<ParityConstraint> constraints_;
};

/// Polarization arrangement: A(phi1) F(phi2,phi3) D(phi4) = +1 where zeta is
/// 0 or pi, = -1 where zeta is +-pi/2, nothing for generic settings.
ConstraintSet compile_fig1(std::span<const AngleSettings> settings, const HiddenContext& context,
                           double tol = kDefaultAngleTolerance);

/// Bell/Bell arrangement: F(phi2,phi3) G(phi1,phi4) = +-1 under the same rule.
ConstraintSet compile_fig2(std::span<const AngleSettings> settings, const HiddenContext& context,
                           double tol = kDefaultAngleTolerance);

/// Direct reduced form over A and D only: A(phi1) A(phi2) D(phi3) D(phi4) = +-1.
ConstraintSet compile_reduced(std::span<const AngleSettings> settings,
                              const HiddenContext& context,
                              double tol = kDefaultAngleTolerance);

/// For every F(x, y) in the set, adds F(x,y) A(x) D(y) = +1: the polarization
/// condition at phi1 = phi2 = x, phi3 = phi4 = y, where zeta vanishes for both
/// kappa values.
ConstraintSet apply_factorization(const ConstraintSet& cs);

/// Substitutes F(x, y) -> A(x) D(y) everywhere and drops constraints that
/// become trivially +1 = +1. The result mentions only A and D variables.
ConstraintSet eliminate_factorized(const ConstraintSet& cs);

/// The two-setting contradiction for one kappa sector. Both constraints are
/// over A(alpha), A(alpha + pi/4), D(beta), D(beta + pi/4); the first requires
/// +1 (zeta = 0) and the second -1 (zeta = -pi/2). Throws for kappa not +-1.
ConstraintSet paper_proof_instance(double alpha, double beta, int kappa);

/// The two settings paper_proof_instance uses, in emission order.
std::array<AngleSettings, 2> proof_settings(double alpha, double beta, int kappa);

}  // namespace swapbell
