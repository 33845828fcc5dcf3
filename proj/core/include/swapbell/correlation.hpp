#pragma once

// Experiment-level predictions built on the statevector: joint outcome
// probabilities for the Bell/Bell and Bell/polarization arrangements, the
// zeta classification of a setting, perfect-correlation checks and a seeded
// event sampler.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "swapbell/quantum.hpp"

namespace swapbell {

inline constexpr double kDefaultAngleTolerance = 1e-9;

/// +1 for {phi+, psi-}, -1 for {phi-, psi+}.
int kappa_of(BellOutcome outcome) noexcept;

/// Polarization product of the Bell state: +1 for phi+/phi- (HH, VV content),
/// -1 for psi+/psi- (HV, VH content).
int f_value_of(BellOutcome outcome) noexcept;

/// The Bell state with the given kappa and polarization product.
BellOutcome bell_outcome_from(int kappa, int f_value);

/// 4x4 joint probabilities, [bc][ad] in BellOutcome order.
using BellProbabilityMatrix = std::array<std::array<double, 4>, 4>;

BellProbabilityMatrix joint_bell_probabilities(const AngleSettings& angles);

/// Total probability of a bc outcome and an ad outcome with different kappa.
double kappa_mismatch_probability(const BellProbabilityMatrix& probabilities) noexcept;

/// One joint outcome of the Bell/polarization arrangement.
struct Fig1Outcome {
  BellOutcome bc = BellOutcome::PhiPlus;
  Polarization pol_a = Polarization::H;
  Polarization pol_d = Polarization::H;

  /// Position in Fig1Distribution: 4*bc + 2*pol_a + pol_d.
  std::size_t index() const noexcept {
    return 4 * static_cast<std::size_t>(bc) + 2 * static_cast<std::size_t>(pol_a) +
           static_cast<std::size_t>(pol_d);
  }
  static Fig1Outcome from_index(std::size_t index) noexcept;

  /// a * F * d with H = +1, V = -1.
  int product() const noexcept {
    return polarization_sign(pol_a) * f_value_of(bc) * polarization_sign(pol_d);
  }
};

using Fig1Distribution = std::array<double, 16>;

/// Probabilities of projecting onto |X_bc> (x) |pol_a> (x) |pol_d>.
Fig1Distribution fig1_joint_distribution(const AngleSettings& angles);

enum class PhaseClass { ZeroOrPi, HalfPi, Generic };

std::string_view to_string(PhaseClass c) noexcept;

/// zeta_kappa = phi1 - phi2 + kappa (phi3 - phi4). Equals xi for kappa = +1
/// and eta for kappa = -1.
double zeta(const AngleSettings& angles, int kappa);

/// Classifies zeta modulo 2 pi. Throws std::invalid_argument unless tol > 0
/// and kappa is +1 or -1.
PhaseClass classify_zeta(const AngleSettings& angles, int kappa,
                         double tol = kDefaultAngleTolerance);
PhaseClass classify_angle(double zeta_value, double tol = kDefaultAngleTolerance);

/// +1 for ZeroOrPi, -1 for HalfPi, nothing for Generic.
std::optional<int> predicted_product(PhaseClass c) noexcept;

/// For a non-generic class, the ad Bell state that a bc outcome is paired with
/// exactly in the Bell/Bell arrangement.
std::optional<BellOutcome> paired_ad_outcome(BellOutcome bc, PhaseClass c) noexcept;

struct SectorReport {
  int kappa = +1;
  double zeta = 0.0;
  PhaseClass phase_class = PhaseClass::Generic;
  std::optional<int> predicted_product;
  double sector_probability = 0.0;
  /// P(a*F*d != predicted | kappa); only meaningful when predicted_product set.
  double product_violation = 0.0;
  /// Largest P(ad != paired partner | bc) over the sector's bc outcomes.
  double pairing_violation = 0.0;
  bool holds = true;
};

struct CorrelationReport {
  AngleSettings angles;
  CorrelationPhase phases;
  double kappa_mismatch = 0.0;
  std::array<SectorReport, 2> sectors;  // kappa = +1, kappa = -1
  bool all_hold = true;

  /// True if at least one sector carries a certainty claim.
  bool has_perfect_correlation() const noexcept;
};

/// residual_tol bounds every probability that must vanish.
CorrelationReport perfect_correlation_report(const AngleSettings& angles,
                                             double angle_tol = kDefaultAngleTolerance,
                                             double residual_tol = 1e-12);

struct EventRecord {
  AngleSettings angles;
  BellOutcome bc_outcome = BellOutcome::PhiPlus;
  Polarization pol_a = Polarization::H;
  Polarization pol_d = Polarization::H;
  int kappa = +1;
  int f_value = +1;
  int a_value = +1;
  int d_value = +1;
  int product = +1;

  static EventRecord from_outcome(const AngleSettings& angles, const Fig1Outcome& outcome);

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Uniform double in [0, 1) from the top 53 bits of one 64-bit draw.
double uniform_from_bits(std::uint64_t bits) noexcept;

/// Inverse-CDF lookup over the fixed 16-outcome order. Returns the first index
/// whose cumulative probability exceeds u; falls back to the last outcome with
/// nonzero probability when rounding leaves u above the total.
std::size_t inverse_cdf_index(const Fig1Distribution& distribution, double u) noexcept;

/// n i.i.d. Bell/polarization events drawn with std::mt19937_64(seed).
std::vector<EventRecord> sample_events(const AngleSettings& angles, std::size_t n,
                                       std::uint64_t seed);

}  // namespace swapbell
