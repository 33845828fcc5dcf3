#pragma once

// Satisfiability of +-1 product constraints.
//
// A variable v maps to a bit x with v = (-1)^x, and a constraint
// prod v_i = s becomes the parity equation sum x_i = [s == -1] (mod 2).
// Two independent deciders are provided: exhaustive enumeration (small
// instances, trusted) and Gaussian elimination over GF(2) (scales).

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "swapbell/lhv.hpp"

namespace swapbell {

enum class SolveStatus { Sat, Unsat };

std::string_view to_string(SolveStatus status) noexcept;

struct SolveResult {
  SolveStatus status = SolveStatus::Sat;
  /// Sat: value (+1 / -1) of every variable, indexed by VariableId.
  std::optional<std::vector<int>> model;
  /// Unsat: ids of constraints whose product reads "+1 = -1".
  std::optional<std::vector<ConstraintId>> certificate;

  friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

class SolverLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kEnumerationVariableLimit = 24;
inline constexpr std::size_t kCertificateSubsetLimit = 4;

/// Tries assignments in increasing binary order (bit i set = variable i is -1)
/// and returns the first that satisfies everything. On Unsat the certificate
/// is the smallest contradictory subset of size <= kCertificateSubsetLimit,
/// or else an irreducible one found by deletion.
/// Throws SolverLimitError above kEnumerationVariableLimit variables.
SolveResult enumerate_solve(const ConstraintSet& cs);

/// Gauss-Jordan elimination with pivots taken in variable-id order. Free
/// variables are set to +1. On Unsat the certificate is the row combination
/// that produced the first 0 = 1 row.
SolveResult gf2_solve(const ConstraintSet& cs);

/// Re-checks a result against the constraints without trusting either solver.
/// Sat: the model assigns +-1 to every variable and satisfies every
/// constraint. Unsat: the certificate is nonempty, has no repeated id, every
/// variable occurs an even number of times across it, and the required signs
/// multiply to -1.
/// Throws std::invalid_argument when the model size differs from the variable
/// count or a certificate id names no constraint.
bool verify_certificate(const ConstraintSet& cs, const SolveResult& result);

/// True if the assignment satisfies every constraint.
bool satisfies(const ConstraintSet& cs, const std::vector<int>& model);

}  // namespace swapbell
