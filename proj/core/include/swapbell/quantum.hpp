#pragma once

// Four-photon polarization statevector for the entanglement-swapping
// arrangement: two singlet pairs (a,b) and (c,d), independent rotations on
// each photon, and the change of basis onto Bell states of (b,c) x (a,d).

#include <array>
#include <complex>
#include <cstddef>
#include <string_view>

namespace swapbell {

using Complex = std::complex<double>;

enum class Polarization { H = 0, V = 1 };

/// H -> +1, V -> -1.
constexpr int polarization_sign(Polarization p) noexcept {
  return p == Polarization::H ? +1 : -1;
}

std::string_view to_string(Polarization p) noexcept;

/// Ordering is fixed and shared by every table in the library: it is the
/// row/column order of BellBellAmplitudes and the outer order of the Fig. 1
/// outcome table used by the sampler.
enum class BellOutcome { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

inline constexpr std::array<BellOutcome, 4> kBellOutcomes = {
    BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus,
    BellOutcome::PsiMinus};

/// "phi+", "phi-", "psi+", "psi-".
std::string_view to_string(BellOutcome outcome) noexcept;

/// Two-photon Bell vector with real amplitudes, indexed 2*first + second
/// (H = 0, V = 1).
///   phi+ = (HH + VV)/sqrt2    phi- = (HH - VV)/sqrt2
///   psi+ = (HV + VH)/sqrt2    psi- = (HV - VH)/sqrt2
std::array<double, 4> bell_vector(BellOutcome outcome) noexcept;

enum class Photon : std::size_t { A = 0, B = 1, C = 2, D = 3 };

struct AngleSettings {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
  double phi4 = 0.0;

  /// Angle applied to photon a, b, c, d for index 0, 1, 2, 3.
  double operator[](std::size_t photon) const;

  friend bool operator==(const AngleSettings&, const AngleSettings&) = default;
};

/// Amplitudes over the 16 product states |pol_a pol_b pol_c pol_d>, stored at
/// index 8a + 4b + 2c + d with H = 0, V = 1.
class FourPhotonState {
 public:
  using Amplitudes = std::array<Complex, 16>;

  FourPhotonState() = default;
  explicit FourPhotonState(const Amplitudes& amplitudes)
      : amplitudes_(amplitudes) {}

  static constexpr std::size_t index(Polarization a, Polarization b,
                                     Polarization c, Polarization d) noexcept {
    return 8 * static_cast<std::size_t>(a) + 4 * static_cast<std::size_t>(b) +
           2 * static_cast<std::size_t>(c) + static_cast<std::size_t>(d);
  }

  Complex amplitude(Polarization a, Polarization b, Polarization c,
                    Polarization d) const noexcept {
    return amplitudes_[index(a, b, c, d)];
  }
  Complex operator[](std::size_t i) const { return amplitudes_.at(i); }

  const Amplitudes& amplitudes() const noexcept { return amplitudes_; }
  double norm_squared() const noexcept;

  /// Largest |difference| over the 16 amplitudes.
  double max_abs_diff(const FourPhotonState& other) const noexcept;

 private:
  Amplitudes amplitudes_{};
};

/// 1/2 (H_a V_b - V_a H_b)(H_c V_d - V_c H_d).
FourPhotonState make_vw_state();

/// R(phi)|H> = cos(phi)|H> + sin(phi)|V>, R(phi)|V> = cos(phi)|V> - sin(phi)|H>
/// applied to one tensor factor. Throws std::out_of_range for photon > 3.
FourPhotonState rotate_photon(const FourPhotonState& state, std::size_t photon,
                              double phi);
FourPhotonState rotate_photon(const FourPhotonState& state, Photon photon,
                              double phi);

/// a by phi1, b by phi2, c by phi3, d by phi4.
FourPhotonState apply_all_rotations(const FourPhotonState& state,
                                    const AngleSettings& angles);

struct CorrelationPhase {
  double xi = 0.0;   // (phi1 - phi2) + (phi3 - phi4)
  double eta = 0.0;  // (phi1 - phi2) - (phi3 - phi4)
};

CorrelationPhase compute_phases(const AngleSettings& angles) noexcept;

/// coeffs[bc][ad]: amplitude of |bc Bell state> (x) |ad Bell state>.
/// Pair (b,c) has b as its first particle; pair (a,d) has a first.
struct BellBellAmplitudes {
  std::array<std::array<Complex, 4>, 4> coeffs{};

  Complex& operator()(BellOutcome bc, BellOutcome ad) {
    return coeffs[static_cast<std::size_t>(bc)][static_cast<std::size_t>(ad)];
  }
  Complex operator()(BellOutcome bc, BellOutcome ad) const {
    return coeffs[static_cast<std::size_t>(bc)][static_cast<std::size_t>(ad)];
  }

  double total_weight() const noexcept;
  double max_abs_diff(const BellBellAmplitudes& other) const noexcept;
};

/// Brute-force inner products of the state with every double-Bell vector.
BellBellAmplitudes bell_bell_amplitudes_numeric(const FourPhotonState& state);

/// Closed-form expansion of the rotated VW state in the double Bell basis;
/// depends on the angles only through xi and eta.
BellBellAmplitudes bell_bell_amplitudes_closed_form(const AngleSettings& angles);

}  // namespace swapbell
