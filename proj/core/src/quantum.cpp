#include "swapbell/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace swapbell {

std::string_view to_string(Polarization p) noexcept {
  return p == Polarization::H ? "H" : "V";
}

std::string_view to_string(BellOutcome outcome) noexcept {
  switch (outcome) {
    case BellOutcome::PhiPlus:
      return "phi+";
    case BellOutcome::PhiMinus:
      return "phi-";
    case BellOutcome::PsiPlus:
      return "psi+";
    case BellOutcome::PsiMinus:
      return "psi-";
  }
  return "?";
}

std::array<double, 4> bell_vector(BellOutcome outcome) noexcept {
  constexpr double s = std::numbers::sqrt2 / 2.0;
  // index = 2*first + second: HH, HV, VH, VV
  switch (outcome) {
    case BellOutcome::PhiPlus:
      return {s, 0.0, 0.0, s};
    case BellOutcome::PhiMinus:
      return {s, 0.0, 0.0, -s};
    case BellOutcome::PsiPlus:
      return {0.0, s, s, 0.0};
    case BellOutcome::PsiMinus:
      return {0.0, s, -s, 0.0};
  }
  return {};
}

double AngleSettings::operator[](std::size_t photon) const {
  switch (photon) {
    case 0:
      return phi1;
    case 1:
      return phi2;
    case 2:
      return phi3;
    case 3:
      return phi4;
    default:
      throw std::out_of_range("photon index " + std::to_string(photon) +
                              " out of range 0..3");
  }
}

double FourPhotonState::norm_squared() const noexcept {
  double total = 0.0;
  for (const auto& amp : amplitudes_) total += std::norm(amp);
  return total;
}

double FourPhotonState::max_abs_diff(const FourPhotonState& other) const noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    worst = std::max(worst, std::abs(amplitudes_[i] - other.amplitudes_[i]));
  }
  return worst;
}

FourPhotonState make_vw_state() {
  using P = Polarization;
  FourPhotonState::Amplitudes amps{};
  // (H_a V_b - V_a H_b)(H_c V_d - V_c H_d) / 2
  amps[FourPhotonState::index(P::H, P::V, P::H, P::V)] = +0.5;
  amps[FourPhotonState::index(P::H, P::V, P::V, P::H)] = -0.5;
  amps[FourPhotonState::index(P::V, P::H, P::H, P::V)] = -0.5;
  amps[FourPhotonState::index(P::V, P::H, P::V, P::H)] = +0.5;
  return FourPhotonState(amps);
}

FourPhotonState rotate_photon(const FourPhotonState& state, std::size_t photon,
                              double phi) {
  if (photon > 3) {
    throw std::out_of_range("photon index " + std::to_string(photon) +
                            " out of range 0..3");
  }
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  // Bit of the basis index that carries this photon's polarization.
  const std::size_t bit = std::size_t{8} >> photon;

  const auto& in = state.amplitudes();
  FourPhotonState::Amplitudes out{};
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i & bit) continue;
    const Complex h = in[i];
    const Complex v = in[i | bit];
    out[i] = c * h - s * v;
    out[i | bit] = s * h + c * v;
  }
  return FourPhotonState(out);
}

FourPhotonState rotate_photon(const FourPhotonState& state, Photon photon,
                              double phi) {
  return rotate_photon(state, static_cast<std::size_t>(photon), phi);
}

FourPhotonState apply_all_rotations(const FourPhotonState& state,
                                    const AngleSettings& angles) {
  FourPhotonState out = state;
  for (std::size_t photon = 0; photon < 4; ++photon) {
    out = rotate_photon(out, photon, angles[photon]);
  }
  return out;
}

CorrelationPhase compute_phases(const AngleSettings& angles) noexcept {
  const double first = angles.phi1 - angles.phi2;
  const double second = angles.phi3 - angles.phi4;
  return {first + second, first - second};
}

double BellBellAmplitudes::total_weight() const noexcept {
  double total = 0.0;
  for (const auto& row : coeffs)
    for (const auto& c : row) total += std::norm(c);
  return total;
}

double BellBellAmplitudes::max_abs_diff(const BellBellAmplitudes& other) const noexcept {
  double worst = 0.0;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      worst = std::max(worst, std::abs(coeffs[r][c] - other.coeffs[r][c]));
  return worst;
}

BellBellAmplitudes bell_bell_amplitudes_numeric(const FourPhotonState& state) {
  BellBellAmplitudes out;
  for (BellOutcome bc : kBellOutcomes) {
    const auto bc_vec = bell_vector(bc);
    for (BellOutcome ad : kBellOutcomes) {
      const auto ad_vec = bell_vector(ad);
      Complex sum{};
      for (std::size_t i = 0; i < 16; ++i) {
        const std::size_t a = (i >> 3) & 1U;
        const std::size_t b = (i >> 2) & 1U;
        const std::size_t c = (i >> 1) & 1U;
        const std::size_t d = i & 1U;
        // Bell vectors are real, so conjugation is a no-op.
        sum += bc_vec[2 * b + c] * ad_vec[2 * a + d] * state[i];
      }
      out(bc, ad) = sum;
    }
  }
  return out;
}

BellBellAmplitudes bell_bell_amplitudes_closed_form(const AngleSettings& angles) {
  using B = BellOutcome;
  const auto [xi, eta] = compute_phases(angles);
  const double cx = 0.5 * std::cos(xi);
  const double sx = 0.5 * std::sin(xi);
  const double ce = 0.5 * std::cos(eta);
  const double se = 0.5 * std::sin(eta);

  BellBellAmplitudes out;
  out(B::PhiPlus, B::PhiPlus) = -cx;
  out(B::PhiPlus, B::PsiMinus) = +sx;
  out(B::PsiMinus, B::PsiMinus) = -cx;
  out(B::PsiMinus, B::PhiPlus) = -sx;
  out(B::PhiMinus, B::PhiMinus) = +ce;
  out(B::PhiMinus, B::PsiPlus) = +se;
  out(B::PsiPlus, B::PsiPlus) = +ce;
  out(B::PsiPlus, B::PhiMinus) = -se;
  return out;
}

}  // namespace swapbell
