#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "swapbell/quantum.hpp"

using namespace swapbell;
using P = Polarization;
using B = BellOutcome;

namespace {
constexpr double kPi = std::numbers::pi;

FourPhotonState random_state(oracle::AngleSource& src) {
  FourPhotonState::Amplitudes amps;
  double norm = 0.0;
  for (auto& a : amps) {
    a = {src(-1, 1), src(-1, 1)};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return FourPhotonState(amps);
}

AngleSettings random_angles(oracle::AngleSource& src) { return {src(), src(), src(), src()}; }
}  // namespace

TEST_SUITE("quantum") {
  TEST_CASE("index layout is 8a + 4b + 2c + d with H = 0") {
    CHECK(FourPhotonState::index(P::H, P::H, P::H, P::H) == 0);
    CHECK(FourPhotonState::index(P::V, P::H, P::H, P::H) == 8);
    CHECK(FourPhotonState::index(P::H, P::V, P::H, P::V) == 5);
    CHECK(FourPhotonState::index(P::V, P::V, P::V, P::V) == 15);
    CHECK(polarization_sign(P::H) == 1);
    CHECK(polarization_sign(P::V) == -1);
  }

  TEST_CASE("vw state amplitudes") {
    const auto vw = make_vw_state();
    CHECK(vw.amplitude(P::H, P::V, P::H, P::V) == Complex(0.5));
    CHECK(vw.amplitude(P::H, P::V, P::V, P::H) == Complex(-0.5));
    CHECK(vw.amplitude(P::V, P::H, P::H, P::V) == Complex(-0.5));
    CHECK(vw.amplitude(P::V, P::H, P::V, P::H) == Complex(0.5));
    CHECK(vw.amplitude(P::H, P::H, P::H, P::H) == Complex(0.0));
    CHECK(std::abs(vw.norm_squared() - 1.0) < 1e-12);
  }

  TEST_CASE("bell vectors follow the sign table and are orthonormal") {
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(bell_vector(B::PhiMinus)[3] == doctest::Approx(-s));
    CHECK(bell_vector(B::PsiMinus)[1] == doctest::Approx(s));
    CHECK(bell_vector(B::PsiMinus)[2] == doctest::Approx(-s));
    for (B x : kBellOutcomes) {
      for (B y : kBellOutcomes) {
        double dot = 0.0;
        for (std::size_t i = 0; i < 4; ++i) dot += bell_vector(x)[i] * bell_vector(y)[i];
        CHECK(dot == doctest::Approx(x == y ? 1.0 : 0.0).epsilon(1e-15));
      }
    }
  }

  TEST_CASE("rotate_photon") {
    FourPhotonState::Amplitudes amps{};
    amps[FourPhotonState::index(P::H, P::H, P::H, P::H)] = 1.0;
    const FourPhotonState all_h(amps);

    SUBCASE("zero angle is the identity") {
      for (std::size_t k = 0; k < 4; ++k) CHECK(rotate_photon(all_h, k, 0.0).max_abs_diff(all_h) == 0.0);
    }
    SUBCASE("pi/2 takes H to V and V to -H") {
      const auto r = rotate_photon(all_h, Photon::C, kPi / 2);
      CHECK(std::abs(r.amplitude(P::H, P::H, P::V, P::H) - Complex(1.0)) < 1e-15);
      CHECK(std::abs(r.amplitude(P::H, P::H, P::H, P::H)) < 1e-15);

      const auto rr = rotate_photon(r, Photon::C, kPi / 2);
      CHECK(std::abs(rr.amplitude(P::H, P::H, P::H, P::H) - Complex(-1.0)) < 1e-15);
    }
    SUBCASE("out-of-range photon") {
      CHECK_THROWS_AS(rotate_photon(all_h, std::size_t{4}, 0.1), std::out_of_range);
      CHECK_THROWS_AS(AngleSettings{}[7], std::out_of_range);
    }
    SUBCASE("norm preserved for 100 random (state, photon, angle)") {
      oracle::AngleSource src(7);
      for (int i = 0; i < 100; ++i) {
        const auto s = random_state(src);
        const auto k = static_cast<std::size_t>(src.engine()() % 4);
        const auto r = rotate_photon(s, k, src());
        CHECK(std::abs(r.norm_squared() - s.norm_squared()) < 1e-12);
      }
    }
  }

  TEST_CASE("apply_all_rotations matches the Kronecker-product oracle") {
    oracle::AngleSource src(11);
    for (int trial = 0; trial < 200; ++trial) {
      const auto angles = random_angles(src);
      const auto state = apply_all_rotations(make_vw_state(), angles);
      const auto expected = oracle::rotated_vw(angles.phi1, angles.phi2, angles.phi3, angles.phi4);
      double worst = 0.0;
      for (std::size_t i = 0; i < 16; ++i) worst = std::max(worst, std::abs(state[i] - expected[i]));
      CHECK(worst < 1e-14);
      CHECK(std::abs(state.norm_squared() - 1.0) < 1e-12);
    }
  }

  TEST_CASE("apply_all_rotations with zero angles leaves the vw state unchanged") {
    CHECK(apply_all_rotations(make_vw_state(), {}).max_abs_diff(make_vw_state()) == 0.0);
  }

  TEST_CASE("rotation order does not matter") {
    oracle::AngleSource src(13);
    std::array<std::size_t, 4> order{0, 1, 2, 3};
    for (int trial = 0; trial < 20; ++trial) {
      const auto angles = random_angles(src);
      const auto reference = apply_all_rotations(make_vw_state(), angles);
      std::sort(order.begin(), order.end());
      do {
        auto s = make_vw_state();
        for (auto k : order) s = rotate_photon(s, k, angles[k]);
        CHECK(s.max_abs_diff(reference) < 1e-14);
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }

  TEST_CASE("compute_phases") {
    auto p = compute_phases({0, kPi / 4, 0, kPi / 4});
    CHECK(p.xi == -kPi / 2);
    CHECK(p.eta == 0.0);
    p = compute_phases({});
    CHECK(p.xi == 0.0);
    CHECK(p.eta == 0.0);
    oracle::AngleSource src(3);
    for (int i = 0; i < 50; ++i) {
      const double a = src(-50, 50);
      const double b = src(-50, 50);
      p = compute_phases({a, a, b, b});
      CHECK(p.xi == 0.0);
      CHECK(p.eta == 0.0);
    }
    // raw radians, no wrapping
    p = compute_phases({10.0, 0.0, 10.0, 0.0});
    CHECK(p.xi == 20.0);
  }

  TEST_CASE("numeric decomposition at zero angles") {
    const auto amps = bell_bell_amplitudes_numeric(apply_all_rotations(make_vw_state(), {}));
    for (B bc : kBellOutcomes) {
      for (B ad : kBellOutcomes) {
        double expected = 0.0;
        if (bc == ad) expected = (bc == B::PhiPlus || bc == B::PsiMinus) ? -0.5 : 0.5;
        CHECK(std::abs(amps(bc, ad) - Complex(expected)) < 1e-15);
      }
    }
  }

  TEST_CASE("closed form spot values") {
    auto cf = bell_bell_amplitudes_closed_form({0, kPi / 4, 0, kPi / 4});
    CHECK(std::abs(cf(B::PhiPlus, B::PhiPlus)) < 1e-15);
    CHECK(cf(B::PhiPlus, B::PsiMinus).real() == doctest::Approx(-0.5));
    CHECK(cf(B::PsiMinus, B::PhiPlus).real() == doctest::Approx(0.5));

    cf = bell_bell_amplitudes_closed_form({});
    const auto numeric = bell_bell_amplitudes_numeric(apply_all_rotations(make_vw_state(), {}));
    CHECK(cf.max_abs_diff(numeric) < 1e-10);

    std::size_t nonzero = 0;
    cf = bell_bell_amplitudes_closed_form({0.3, -1.1, 2.0, 0.4});
    for (const auto& row : cf.coeffs)
      for (const auto& c : row) nonzero += std::abs(c) > 0.0;
    CHECK(nonzero == 8);
  }

  TEST_CASE("closed form equals numeric decomposition for 1000 random settings") {
    oracle::AngleSource src(2024);
    double worst = 0.0;
    double worst_weight = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto angles = random_angles(src);
      const auto numeric = bell_bell_amplitudes_numeric(apply_all_rotations(make_vw_state(), angles));
      worst = std::max(worst, numeric.max_abs_diff(bell_bell_amplitudes_closed_form(angles)));
      worst_weight = std::max(worst_weight, std::abs(1.0 - numeric.total_weight()));
    }
    CHECK(worst < 1e-10);
    CHECK(worst_weight < 1e-12);
  }

  TEST_CASE("double-Bell amplitudes depend only on angle differences") {
    oracle::AngleSource src(99);
    const auto vw = make_vw_state();
    for (int i = 0; i < 200; ++i) {
      const auto a = random_angles(src);
      const double d1 = src();
      const double d2 = src();
      const AngleSettings shifted{a.phi1 + d1, a.phi2 + d1, a.phi3 + d2, a.phi4 + d2};
      const auto x = bell_bell_amplitudes_numeric(apply_all_rotations(vw, a));
      const auto y = bell_bell_amplitudes_numeric(apply_all_rotations(vw, shifted));
      CHECK(x.max_abs_diff(y) < 1e-12);
    }
    // the zero-setting special case named in the examples
    const auto base = bell_bell_amplitudes_numeric(apply_all_rotations(vw, {}));
    const auto moved = bell_bell_amplitudes_numeric(apply_all_rotations(vw, {0.4, 0.4, -1.3, -1.3}));
    CHECK(base.max_abs_diff(moved) < 1e-12);
  }
}
