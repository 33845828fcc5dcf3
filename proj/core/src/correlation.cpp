#include "swapbell/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace swapbell {

namespace {

void require_kappa(int kappa) {
  if (kappa != 1 && kappa != -1) {
    throw std::invalid_argument("kappa must be +1 or -1, got " + std::to_string(kappa));
  }
}

std::size_t sector_slot(int kappa) noexcept { return kappa == 1 ? 0 : 1; }

}  // namespace

int kappa_of(BellOutcome outcome) noexcept {
  return (outcome == BellOutcome::PhiPlus || outcome == BellOutcome::PsiMinus) ? +1 : -1;
}

int f_value_of(BellOutcome outcome) noexcept {
  return (outcome == BellOutcome::PhiPlus || outcome == BellOutcome::PhiMinus) ? +1 : -1;
}

BellOutcome bell_outcome_from(int kappa, int f_value) {
  require_kappa(kappa);
  if (f_value != 1 && f_value != -1) {
    throw std::invalid_argument("f value must be +1 or -1");
  }
  if (kappa == 1) return f_value == 1 ? BellOutcome::PhiPlus : BellOutcome::PsiMinus;
  return f_value == 1 ? BellOutcome::PhiMinus : BellOutcome::PsiPlus;
}

BellProbabilityMatrix joint_bell_probabilities(const AngleSettings& angles) {
  const auto state = apply_all_rotations(make_vw_state(), angles);
  const auto amps = bell_bell_amplitudes_numeric(state);
  BellProbabilityMatrix out{};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) out[r][c] = std::norm(amps.coeffs[r][c]);
  return out;
}

double kappa_mismatch_probability(const BellProbabilityMatrix& probabilities) noexcept {
  double total = 0.0;
  for (BellOutcome bc : kBellOutcomes)
    for (BellOutcome ad : kBellOutcomes)
      if (kappa_of(bc) != kappa_of(ad))
        total += probabilities[static_cast<std::size_t>(bc)][static_cast<std::size_t>(ad)];
  return total;
}

Fig1Outcome Fig1Outcome::from_index(std::size_t index) noexcept {
  return {static_cast<BellOutcome>((index >> 2) & 3U), static_cast<Polarization>((index >> 1) & 1U),
          static_cast<Polarization>(index & 1U)};
}

Fig1Distribution fig1_joint_distribution(const AngleSettings& angles) {
  const auto state = apply_all_rotations(make_vw_state(), angles);
  Fig1Distribution out{};
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto outcome = Fig1Outcome::from_index(k);
    const auto bc_vec = bell_vector(outcome.bc);
    const auto a = static_cast<std::size_t>(outcome.pol_a);
    const auto d = static_cast<std::size_t>(outcome.pol_d);
    Complex amp{};
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c)
        amp += bc_vec[2 * b + c] * state[8 * a + 4 * b + 2 * c + d];
    out[k] = std::norm(amp);
  }
  return out;
}

std::string_view to_string(PhaseClass c) noexcept {
  switch (c) {
    case PhaseClass::ZeroOrPi:
      return "zero_or_pi";
    case PhaseClass::HalfPi:
      return "half_pi";
    case PhaseClass::Generic:
      return "generic";
  }
  return "?";
}

double zeta(const AngleSettings& angles, int kappa) {
  require_kappa(kappa);
  return angles.phi1 - angles.phi2 + kappa * (angles.phi3 - angles.phi4);
}

PhaseClass classify_angle(double zeta_value, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("angle tolerance must be positive");
  // Offset from the nearest multiple of pi, in [-pi/2, pi/2].
  const double offset = std::remainder(zeta_value, std::numbers::pi);
  if (std::abs(offset) <= tol) return PhaseClass::ZeroOrPi;
  if (std::numbers::pi / 2 - std::abs(offset) <= tol) return PhaseClass::HalfPi;
  return PhaseClass::Generic;
}

PhaseClass classify_zeta(const AngleSettings& angles, int kappa, double tol) {
  return classify_angle(zeta(angles, kappa), tol);
}

std::optional<int> predicted_product(PhaseClass c) noexcept {
  switch (c) {
    case PhaseClass::ZeroOrPi:
      return +1;
    case PhaseClass::HalfPi:
      return -1;
    case PhaseClass::Generic:
      break;
  }
  return std::nullopt;
}

std::optional<BellOutcome> paired_ad_outcome(BellOutcome bc, PhaseClass c) noexcept {
  switch (c) {
    case PhaseClass::ZeroOrPi:
      return bc;
    case PhaseClass::HalfPi:
      // Same kappa, opposite polarization product.
      return bell_outcome_from(kappa_of(bc), -f_value_of(bc));
    case PhaseClass::Generic:
      break;
  }
  return std::nullopt;
}

bool CorrelationReport::has_perfect_correlation() const noexcept {
  return std::any_of(sectors.begin(), sectors.end(),
                     [](const SectorReport& s) { return s.predicted_product.has_value(); });
}

CorrelationReport perfect_correlation_report(const AngleSettings& angles, double angle_tol,
                                             double residual_tol) {
  CorrelationReport report;
  report.angles = angles;
  report.phases = compute_phases(angles);

  const auto fig1 = fig1_joint_distribution(angles);
  const auto bell = joint_bell_probabilities(angles);
  report.kappa_mismatch = kappa_mismatch_probability(bell);

  for (int kappa : {+1, -1}) {
    SectorReport& sector = report.sectors[sector_slot(kappa)];
    sector.kappa = kappa;
    sector.zeta = zeta(angles, kappa);
    sector.phase_class = classify_angle(sector.zeta, angle_tol);
    sector.predicted_product = predicted_product(sector.phase_class);

    double violating = 0.0;
    for (std::size_t k = 0; k < fig1.size(); ++k) {
      const auto outcome = Fig1Outcome::from_index(k);
      if (kappa_of(outcome.bc) != kappa) continue;
      sector.sector_probability += fig1[k];
      if (sector.predicted_product && outcome.product() != *sector.predicted_product) {
        violating += fig1[k];
      }
    }
    if (!sector.predicted_product) continue;

    sector.product_violation =
        sector.sector_probability > 0.0 ? violating / sector.sector_probability : violating;

    for (BellOutcome bc : kBellOutcomes) {
      if (kappa_of(bc) != kappa) continue;
      const auto partner = *paired_ad_outcome(bc, sector.phase_class);
      const auto& row = bell[static_cast<std::size_t>(bc)];
      double row_total = 0.0;
      for (double p : row) row_total += p;
      const double off = row_total - row[static_cast<std::size_t>(partner)];
      const double conditional = row_total > 0.0 ? off / row_total : off;
      sector.pairing_violation = std::max(sector.pairing_violation, conditional);
    }
    sector.holds =
        sector.product_violation < residual_tol && sector.pairing_violation < residual_tol;
  }

  report.all_hold = report.kappa_mismatch < residual_tol &&
                    std::all_of(report.sectors.begin(), report.sectors.end(),
                                [](const SectorReport& s) { return s.holds; });
  return report;
}

EventRecord EventRecord::from_outcome(const AngleSettings& angles, const Fig1Outcome& outcome) {
  EventRecord e;
  e.angles = angles;
  e.bc_outcome = outcome.bc;
  e.pol_a = outcome.pol_a;
  e.pol_d = outcome.pol_d;
  e.kappa = kappa_of(outcome.bc);
  e.f_value = f_value_of(outcome.bc);
  e.a_value = polarization_sign(outcome.pol_a);
  e.d_value = polarization_sign(outcome.pol_d);
  e.product = e.a_value * e.f_value * e.d_value;
  return e;
}

double uniform_from_bits(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::size_t inverse_cdf_index(const Fig1Distribution& distribution, double u) noexcept {
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < distribution.size(); ++k) {
    if (distribution[k] <= 0.0) continue;
    last_nonzero = k;
    cumulative += distribution[k];
    if (u < cumulative) return k;
  }
  return last_nonzero;
}

std::vector<EventRecord> sample_events(const AngleSettings& angles, std::size_t n,
                                       std::uint64_t seed) {
  std::vector<EventRecord> events;
  if (n == 0) return events;
  events.reserve(n);

  const auto distribution = fig1_joint_distribution(angles);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = inverse_cdf_index(distribution, uniform_from_bits(rng()));
    events.push_back(EventRecord::from_outcome(angles, Fig1Outcome::from_index(k)));
  }
  return events;
}

}  // namespace swapbell
