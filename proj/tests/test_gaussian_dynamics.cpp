#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "tdho/ermakov.hpp"
#include "tdho/frequency_profile.hpp"
#include "tdho/gaussian_dynamics.hpp"

using tdho::EvolvedState;
using tdho::ExtremumKind;
using tdho::FrequencyProfile;
using tdho::SymplecticMatrix;

namespace {
constexpr double kPi = 3.14159265358979323846;

tdho::ErmakovSolution unit_reference() {
  return tdho::integrate_ermakov_direct(FrequencyProfile::constant(1.0), 1.0, 0.0,
                                        0.0, 10.0, 1e-4);
}

EvolvedState shape_state(double rho, double rho_dot) {
  EvolvedState s;
  s.alpha0 = {1.0, 0.0};
  s.rho = rho;
  s.rho_dot = rho_dot;
  return s;
}
}  // namespace

TEST_CASE("label rotates at the drive frequency for a constant profile") {
  const auto sol = unit_reference();
  const auto state = tdho::evolve({1.0, 0.0}, sol, kPi / 2.0);
  CHECK_FALSE(state.nonstandard_initial);
  CHECK(state.rho == doctest::Approx(1.0).epsilon(1e-9));
  const auto [q, p] = tdho::expectations(state);
  // alpha = e^{-i pi/2}: the packet sits at the bottom of the well moving
  // in the negative direction.
  CHECK(std::abs(q - 0.0) < 1e-6);
  CHECK(std::abs(p + std::sqrt(2.0)) < 1e-6);
  CHECK_THROWS_AS(tdho::evolve({1.0, 0.0}, sol, 10.5), std::domain_error);
}

TEST_CASE("shape extrema of the stepped oscillator alternate and land on the half-periods") {
  const auto sol = tdho::integrate_ermakov_direct(
      FrequencyProfile::ideal_step(1.0, 2.0, 2.0), 1.0, 0.0, 0.0, 10.0, 1e-4);
  const auto extrema = tdho::find_extrema(sol);
  REQUIRE(extrema.size() >= 4);
  CHECK(extrema[0].t == doctest::Approx(2.0 + kPi / 4.0).epsilon(1e-6));
  CHECK(extrema[0].rho == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(extrema[0].kind == ExtremumKind::Minimum);
  CHECK(extrema[1].t == doctest::Approx(2.0 + kPi / 2.0).epsilon(1e-6));
  CHECK(extrema[1].rho == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(extrema[1].kind == ExtremumKind::Maximum);
  for (std::size_t i = 1; i < extrema.size(); ++i) {
    CHECK(extrema[i].kind != extrema[i - 1].kind);
    CHECK(extrema[i].t - extrema[i - 1].t == doctest::Approx(kPi / 4.0).epsilon(1e-4));
  }
}

TEST_CASE("a flat amplitude has no extrema") {
  CHECK(tdho::find_extrema(unit_reference()).empty());
}

TEST_CASE("squeezing parameter is defined only at shape extrema") {
  CHECK(tdho::squeezing_parameter(shape_state(1.0, 0.0)).value() == doctest::Approx(0.0));
  CHECK(tdho::squeezing_parameter(shape_state(0.5, 0.0)).value() ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK_FALSE(tdho::squeezing_parameter(shape_state(0.5, 0.1)).has_value());
}

TEST_CASE("classical conserved quantity: value, conservation, and guards") {
  CHECK(tdho::lewis_invariant_classical(1.0, 0.0, 1.0, 0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(tdho::lewis_invariant_classical(1.0, 0.0, 0.0, 0.0),
                  std::domain_error);

  const auto profile = FrequencyProfile::smoothed_step(1.0, 2.0, 20.0, 2.0);
  const auto sol = tdho::integrate_ermakov_direct(profile, 1.0, 0.0, 0.0, 8.0, 1e-3);
  const auto traj = tdho::integrate_classical(profile, 1.2, -0.4, 0.0, 8.0, 1e-3);
  const double i0 = tdho::lewis_invariant_classical(1.2, -0.4, 1.0, 0.0);
  for (std::size_t i = 0; i < traj.q.size(); i += 400) {
    const double val = tdho::lewis_invariant_classical(
        traj.q[i], traj.p[i], sol.rho_samples()[i], sol.rho_dot_samples()[i]);
    CHECK(std::abs(val - i0) / i0 < 1e-6);
  }
}

TEST_CASE("factored phase-space matrix of the scaling unitary") {
  const auto pure = tdho::symplectic_of_T_factored(2.0, 0.0);
  CHECK(pure.m[0][0] == doctest::Approx(0.5));
  CHECK(pure.m[0][1] == doctest::Approx(0.0));
  CHECK(pure.m[1][0] == doctest::Approx(0.0));
  CHECK(pure.m[1][1] == doctest::Approx(2.0));

  CHECK(tdho::symplectic_of_T_factored(1.0, 0.0).max_abs_diff(
            SymplecticMatrix::identity()) == 0.0);

  const auto shear = tdho::symplectic_of_T_factored(1.0, 0.5);
  CHECK(shear.m[0][0] == doctest::Approx(1.0));
  CHECK(shear.m[1][0] == doctest::Approx(-0.5));
  CHECK(shear.m[1][1] == doctest::Approx(1.0));
}

TEST_CASE("exponential route stays finite through the rho = 1 crossing") {
  for (const double rho : {1.0 - 1e-9, 1.0, 1.0 + 1e-9, 1.0 + 1e-12}) {
    const auto a = tdho::symplectic_of_T_factored(rho, 0.7);
    const auto b = tdho::symplectic_of_T_generator(rho, 0.7);
    CHECK(a.max_abs_diff(b) < 1e-10);
  }
}

TEST_CASE("factored and exponential routes agree over a broad random corpus") {
  std::mt19937 rng(412);
  std::uniform_real_distribution<double> log_rho(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> slope(-5.0, 5.0);
  double worst = 0.0;
  double worst_det = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double rho = std::exp(log_rho(rng));
    const double rd = slope(rng);
    const auto a = tdho::symplectic_of_T_factored(rho, rd);
    const auto b = tdho::symplectic_of_T_generator(rho, rd);
    worst = std::max(worst, a.max_abs_diff(b));
    worst_det = std::max(worst_det, std::abs(a.determinant() - 1.0));
  }
  CHECK(worst < 1e-10);
  CHECK(worst_det < 1e-10);
}

TEST_CASE("generator pieces close under the commutator") {
  std::mt19937 rng(975);
  std::uniform_real_distribution<double> log_rho(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> slope(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    CHECK(tdho::commutator_check(std::exp(log_rho(rng)), slope(rng)) < 1e-12);
  }
  CHECK(tdho::commutator_check(3.0, 0.0) == 0.0);
  CHECK(tdho::commutator_check(1.0 + 1e-9, 3.0) == 0.0);
}

TEST_CASE("invariant-mode quadratures are always a minimum-uncertainty pair") {
  const auto sol = tdho::integrate_ermakov_direct(
      FrequencyProfile::ideal_step(1.0, 2.0, 2.0), 1.0, 0.0, 0.0, 10.0, 1e-4);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < 1000; ++k) {
    const double t = 10.0 * k / 1000.0;
    const auto state = tdho::evolve({1.0, 0.5}, sol, t);
    const auto inv = tdho::transformed_uncertainties(state);
    CHECK(std::abs(inv.dq() - inv_sqrt2) < 1e-12);
    CHECK(std::abs(inv.dp() - inv_sqrt2) < 1e-12);
    CHECK(std::abs(inv.uncertainty_product() - 0.5) < 1e-12);
  }
}

TEST_CASE("bare quadratures saturate the uncertainty bound only at extrema") {
  const auto sol = tdho::integrate_ermakov_direct(
      FrequencyProfile::ideal_step(1.0, 2.0, 2.0), 1.0, 0.0, 0.0, 10.0, 1e-4);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < 1000; ++k) {
    const double t = 10.0 * k / 1000.0;
    const auto state = tdho::evolve({1.0, 0.5}, sol, t);
    const auto s = tdho::uncertainties(state);
    CHECK(s.uncertainty_product() >= 0.5 - 1e-9);
    CHECK(s.dq() == doctest::Approx(state.rho * inv_sqrt2).epsilon(1e-12));
    if (std::abs(state.rho_dot) < 1e-12) {
      CHECK(s.uncertainty_product() == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  // Width assignment at the first post-step shape minimum: narrow in
  // position, wide in momentum.
  const auto pinched = tdho::evolve({1.0, 0.0}, sol, 2.0 + kPi / 4.0);
  const auto s = tdho::uncertainties(pinched);
  CHECK(s.dq() == doctest::Approx(0.5 * inv_sqrt2).epsilon(1e-3));
  CHECK(s.dp() == doctest::Approx(2.0 * inv_sqrt2).epsilon(1e-3));
}

TEST_CASE("a non-equilibrium start is flagged on the evolved state") {
  const auto sol = tdho::integrate_ermakov_direct(FrequencyProfile::constant(1.0), 2.0,
                                                  0.0, 0.0, 1.0, 1e-3);
  CHECK(tdho::evolve({1.0, 0.0}, sol, 0.5).nonstandard_initial);
}

TEST_CASE("packet centre follows the classical trajectory through the step") {
  const auto profile = FrequencyProfile::smoothed_step(1.0, 2.0, 20.0, 2.0);
  const auto sol = tdho::integrate_ermakov_direct(profile, 1.0, 0.0, 0.0, 8.0, 1e-3);
  const double q0 = std::sqrt(2.0) * 1.0;
  const double p0 = std::sqrt(2.0) * 0.5;
  const auto traj = tdho::integrate_classical(profile, q0, p0, 0.0, 8.0, 1e-3);
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.q.size(); i += 200) {
    const auto state = tdho::evolve({1.0, 0.5}, sol, traj.time_at(i));
    const auto [q, p] = tdho::expectations(state);
    worst = std::max(worst, std::abs(q - traj.q[i]));
    worst = std::max(worst, std::abs(p - traj.p[i]));
  }
  CHECK(worst < 1e-5);
}
