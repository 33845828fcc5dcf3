#include "swapbell/parity_solver.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

namespace swapbell {

std::string_view to_string(SolveStatus status) noexcept {
  return status == SolveStatus::Sat ? "sat" : "unsat";
}

bool satisfies(const ConstraintSet& cs, const std::vector<int>& model) {
  for (const auto& c : cs.constraints()) {
    int product = 1;
    for (VariableId id : c.variables) product *= model.at(id);
    if (product != c.required_sign) return false;
  }
  return true;
}

namespace {

// ---------------------------------------------------------------- enumeration

struct PackedRow {
  std::uint32_t mask = 0;
  bool rhs = false;
};

std::vector<PackedRow> pack(const ConstraintSet& cs) {
  std::vector<PackedRow> rows;
  rows.reserve(cs.constraint_count());
  for (const auto& c : cs.constraints()) {
    PackedRow row;
    for (VariableId id : c.variables) row.mask ^= std::uint32_t{1} << id;
    row.rhs = c.required_sign == -1;
    rows.push_back(row);
  }
  return rows;
}

std::optional<std::uint32_t> first_solution(const std::vector<PackedRow>& rows, std::size_t n) {
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t assignment = 0; assignment < total; ++assignment) {
    const auto bits = static_cast<std::uint32_t>(assignment);
    const bool ok = std::all_of(rows.begin(), rows.end(), [bits](const PackedRow& r) {
      return (std::popcount(r.mask & bits) & 1) == static_cast<int>(r.rhs);
    });
    if (ok) return bits;
  }
  return std::nullopt;
}

// Smallest subset (size <= limit) whose masks cancel and whose rhs bits sum
// to 1. Subsets are visited in lexicographic order within each size.
std::optional<std::vector<ConstraintId>> smallest_contradiction(const std::vector<PackedRow>& rows,
                                                                std::size_t limit) {
  const std::size_t m = rows.size();
  std::vector<ConstraintId> pick;
  // Depth-first over increasing index tuples of a fixed size.
  auto search = [&](auto&& self, std::size_t start, std::size_t remaining, std::uint32_t mask,
                    bool rhs) -> bool {
    if (remaining == 0) return mask == 0 && rhs;
    for (std::size_t i = start; i + remaining <= m; ++i) {
      pick.push_back(i);
      if (self(self, i + 1, remaining - 1, mask ^ rows[i].mask, rhs != rows[i].rhs)) return true;
      pick.pop_back();
    }
    return false;
  };
  for (std::size_t size = 1; size <= std::min(limit, m); ++size) {
    pick.clear();
    if (search(search, 0, size, 0, false)) return pick;
  }
  return std::nullopt;
}

// Deletion-based irreducible unsatisfiable subset. For parity systems an
// irreducible unsatisfiable subset always multiplies out to +1 = -1.
std::vector<ConstraintId> irreducible_core(const std::vector<PackedRow>& rows, std::size_t n) {
  std::vector<ConstraintId> core(rows.size());
  std::iota(core.begin(), core.end(), ConstraintId{0});
  for (std::size_t pos = 0; pos < core.size();) {
    std::vector<PackedRow> trial;
    for (std::size_t j = 0; j < core.size(); ++j)
      if (j != pos) trial.push_back(rows[core[j]]);
    if (!first_solution(trial, n)) {
      core.erase(core.begin() + static_cast<std::ptrdiff_t>(pos));
    } else {
      ++pos;
    }
  }
  return core;
}

// ---------------------------------------------------------------- GF(2)

class BitRow {
 public:
  explicit BitRow(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  BitRow& operator^=(const BitRow& other) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
    return *this;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Equation {
  BitRow coefficients;
  bool rhs;
  BitRow pedigree;  // which original constraints were summed into this row
};

}  // namespace

SolveResult enumerate_solve(const ConstraintSet& cs) {
  const std::size_t n = cs.variable_count();
  if (n > kEnumerationVariableLimit) {
    throw SolverLimitError("enumeration limited to " + std::to_string(kEnumerationVariableLimit) +
                           " variables, instance has " + std::to_string(n));
  }
  const auto rows = pack(cs);

  SolveResult result;
  if (const auto bits = first_solution(rows, n)) {
    result.status = SolveStatus::Sat;
    std::vector<int> model(n);
    for (std::size_t i = 0; i < n; ++i) model[i] = ((*bits >> i) & 1U) ? -1 : +1;
    result.model = std::move(model);
    return result;
  }

  result.status = SolveStatus::Unsat;
  if (auto small = smallest_contradiction(rows, kCertificateSubsetLimit)) {
    result.certificate = std::move(*small);
  } else {
    result.certificate = irreducible_core(rows, n);
  }
  return result;
}

SolveResult gf2_solve(const ConstraintSet& cs) {
  const std::size_t n = cs.variable_count();
  const std::size_t m = cs.constraint_count();

  std::vector<Equation> rows;
  rows.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = cs.constraint(i);
    Equation eq{BitRow(n), c.required_sign == -1, BitRow(m)};
    for (VariableId id : c.variables) eq.coefficients.flip(id);
    eq.pedigree.flip(i);
    rows.push_back(std::move(eq));
  }

  std::vector<std::optional<std::size_t>> pivot_row_of(n);
  std::size_t next = 0;
  for (std::size_t col = 0; col < n && next < m; ++col) {
    std::size_t found = next;
    while (found < m && !rows[found].coefficients.test(col)) ++found;
    if (found == m) continue;
    std::swap(rows[next], rows[found]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == next || !rows[r].coefficients.test(col)) continue;
      rows[r].coefficients ^= rows[next].coefficients;
      rows[r].rhs = rows[r].rhs != rows[next].rhs;
      rows[r].pedigree ^= rows[next].pedigree;
    }
    pivot_row_of[col] = next;
    ++next;
  }

  SolveResult result;
  for (std::size_t r = next; r < m; ++r) {
    if (!rows[r].rhs) continue;
    result.status = SolveStatus::Unsat;
    std::vector<ConstraintId> certificate;
    for (std::size_t i = 0; i < m; ++i)
      if (rows[r].pedigree.test(i)) certificate.push_back(i);
    result.certificate = std::move(certificate);
    return result;
  }

  // Reduced row echelon form: each pivot row holds its pivot plus free
  // columns only, so with free variables at bit 0 the pivot bit is the rhs.
  result.status = SolveStatus::Sat;
  std::vector<int> model(n, +1);
  for (std::size_t col = 0; col < n; ++col) {
    if (pivot_row_of[col] && rows[*pivot_row_of[col]].rhs) model[col] = -1;
  }
  result.model = std::move(model);
  return result;
}

bool verify_certificate(const ConstraintSet& cs, const SolveResult& result) {
  if (result.status == SolveStatus::Sat) {
    if (!result.model) return false;
    const auto& model = *result.model;
    if (model.size() != cs.variable_count()) {
      throw std::invalid_argument("model assigns " + std::to_string(model.size()) +
                                  " variables, constraint set has " +
                                  std::to_string(cs.variable_count()));
    }
    if (!std::all_of(model.begin(), model.end(), [](int v) { return v == 1 || v == -1; })) {
      return false;
    }
    return satisfies(cs, model);
  }

  if (!result.certificate || result.certificate->empty()) return false;
  const auto& ids = *result.certificate;
  for (ConstraintId id : ids) {
    if (id >= cs.constraint_count()) {
      throw std::invalid_argument("certificate names constraint " + std::to_string(id) +
                                  " but the set has " + std::to_string(cs.constraint_count()));
    }
  }
  std::vector<ConstraintId> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;

  std::vector<unsigned> occurrences(cs.variable_count(), 0);
  int sign = 1;
  for (ConstraintId id : ids) {
    const auto& c = cs.constraint(id);
    for (VariableId v : c.variables) ++occurrences.at(v);
    sign *= c.required_sign;
  }
  const bool cancels =
      std::all_of(occurrences.begin(), occurrences.end(), [](unsigned k) { return k % 2 == 0; });
  return cancels && sign == -1;
}

}  // namespace swapbell
