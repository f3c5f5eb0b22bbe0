#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tdho/ermakov.hpp"
#include "tdho/frequency_profile.hpp"
#include "test_helpers.hpp"

using tdho::ErmakovRoute;
using tdho::ErmakovSolution;
using tdho::FrequencyProfile;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("equilibrium start under a constant drive stays flat") {
  SUBCASE("unit frequency") {
    const auto sol = tdho::integrate_ermakov_direct(FrequencyProfile::constant(1.0),
                                                    1.0, 0.0, 0.0, 10.0, 1e-3);
    CHECK(sol.route() == ErmakovRoute::Direct);
    CHECK(sol.size() == 10001);
    CHECK(sol.t0() == 0.0);
    CHECK(sol.t1() == doctest::Approx(10.0).epsilon(1e-15));
    for (std::size_t i = 0; i < sol.size(); i += 500) {
      CHECK(std::abs(sol.rho_samples()[i] - 1.0) < 1e-10);
      CHECK(std::abs(sol.rho_dot_samples()[i]) < 1e-10);
      CHECK(std::abs(sol.omega_eff_samples()[i] - 1.0) < 1e-10);
    }
    // The accumulated phase of the unit oscillator is just elapsed time.
    CHECK(sol.theta_at(10.0) == doctest::Approx(10.0).epsilon(1e-9));
  }
  SUBCASE("frequency 4 with the matching amplitude") {
    const auto sol = tdho::integrate_ermakov_direct(FrequencyProfile::constant(4.0),
                                                    0.5, 0.0, 0.0, 5.0, 1e-3);
    for (std::size_t i = 0; i < sol.size(); i += 250) {
      CHECK(std::abs(sol.rho_samples()[i] - 0.5) < 1e-10);
      CHECK(std::abs(sol.omega_eff_samples()[i] - 4.0) < 1e-9);
    }
  }
}

TEST_CASE("direct integration reproduces the closed-form step amplitude") {
  const auto ideal = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
  const auto sol = tdho::integrate_ermakov_direct(ideal, 1.0, 0.0, 0.0, 10.0, 1e-4);
  double err = 0.0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    err = std::max(err,
                   std::abs(sol.rho_samples()[i] - tdho::rho_analytic(ideal, sol.time_at(i))));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("nonlinear and linear-pair routes agree") {
  SUBCASE("ideal step") {
    const auto profile = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
    const auto direct = tdho::integrate_ermakov_direct(profile, 1.0, 0.0, 0.0, 10.0, 1e-4);
    const auto pinney = tdho::integrate_linear_pinney(profile, 1.0, 0.0, 0.0, 10.0, 1e-4);
    CHECK(pinney.route() == ErmakovRoute::Pinney);
    CHECK(pinney.wronskian_defect() <= 1e-8);
    double diff = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) {
      diff = std::max(diff, std::abs(direct.rho_samples()[i] - pinney.rho_samples()[i]));
    }
    CHECK(diff < 1e-8);
  }
  SUBCASE("smoothed step, off-equilibrium start") {
    const auto profile = FrequencyProfile::smoothed_step(1.0, 2.0, 20.0, 2.0);
    const auto direct =
        tdho::integrate_ermakov_direct(profile, 1.3, -0.2, 0.0, 10.0, 1e-4);
    const auto pinney =
        tdho::integrate_linear_pinney(profile, 1.3, -0.2, 0.0, 10.0, 1e-4);
    CHECK(pinney.wronskian_defect() <= 1e-8);
    double diff = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i) {
      diff = std::max(diff, std::abs(direct.rho_samples()[i] - pinney.rho_samples()[i]));
    }
    CHECK(diff < 1e-7);
  }
}

TEST_CASE("accumulated phase advances by pi over one post-step oscillation") {
  const auto ideal = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
  const auto sol = tdho::integrate_ermakov_direct(ideal, 1.0, 0.0, 0.0, 10.0, 1e-4);
  const double advance = sol.theta_at(2.0 + kPi / 2.0) - sol.theta_at(2.0);
  CHECK(advance == doctest::Approx(kPi).epsilon(1e-6));
  CHECK(tdho::phase(sol, 10.0) == doctest::Approx(sol.theta_at(10.0)));
}

TEST_CASE("halving the step shrinks the error like a fourth-order method") {
  const auto ideal = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
  auto worst = [&](double dt) {
    const auto sol = tdho::integrate_ermakov_direct(ideal, 1.0, 0.0, 0.0, 10.0, dt);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
      err = std::max(err, std::abs(sol.rho_samples()[i] -
                                   tdho::rho_analytic(ideal, sol.time_at(i))));
    }
    return err;
  };
  const double coarse = worst(0.02);
  const double fine = worst(0.01);
  CHECK(coarse / fine >= 12.0);
}

TEST_CASE("step-size guard rejects unresolvable configurations") {
  const auto smooth = FrequencyProfile::smoothed_step(1.0, 2.0, 20.0, 2.0);
  CHECK_THROWS_AS(tdho::integrate_ermakov_direct(smooth, 1.0, 0.0, 0.0, 10.0, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(tdho::integrate_ermakov_direct(smooth, 1.0, 0.0, 0.0, 10.0, -1e-4),
                  std::invalid_argument);
  CHECK_THROWS_AS(tdho::integrate_ermakov_direct(smooth, 1.0, 0.0, 10.0, 0.0, 1e-4),
                  std::invalid_argument);
}

TEST_CASE("amplitude collapse aborts instead of returning garbage") {
  CHECK_THROWS_AS(tdho::integrate_ermakov_direct(FrequencyProfile::constant(1.0), 5e-7,
                                                 0.0, 0.0, 1.0, 1e-4),
                  std::runtime_error);
}

TEST_CASE("defect of the integrated samples is small in the interior") {
  const auto sol = tdho::integrate_ermakov_direct(FrequencyProfile::constant(2.0), 1.0,
                                                  0.0, 0.0, 10.0, 1e-3);
  CHECK(std::abs(tdho::residual(sol, 5.0)) < 1e-6);
  CHECK_THROWS_AS(tdho::residual(sol, 0.0), std::domain_error);
  CHECK_THROWS_AS(tdho::residual(sol, 10.0), std::domain_error);
}

TEST_CASE("interpolators reject queries outside the solved window") {
  const auto sol = tdho::integrate_ermakov_direct(FrequencyProfile::constant(1.0), 1.0,
                                                  0.0, 0.0, 1.0, 1e-3);
  CHECK_THROWS_AS(sol.rho_at(1.5), std::domain_error);
  CHECK_THROWS_AS(sol.theta_at(-0.5), std::domain_error);
  CHECK_THROWS_AS(sol.nearest_index(2.0), std::domain_error);
  CHECK(sol.nearest_index(0.5004) == 500);
}

TEST_CASE("classical trajectory matches the exact constant-drive motion") {
  const auto traj = tdho::integrate_classical(FrequencyProfile::constant(1.0),
                                              std::sqrt(2.0), 0.0, 0.0, 10.0, 1e-3);
  double err = 0.0;
  for (std::size_t i = 0; i < traj.q.size(); i += 100) {
    const double t = traj.time_at(i);
    err = std::max(err, std::abs(traj.q[i] - std::sqrt(2.0) * std::cos(t)));
    err = std::max(err, std::abs(traj.p[i] + std::sqrt(2.0) * std::sin(t)));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("classical trajectory matches an independent integration of the drive") {
  const auto profile = FrequencyProfile::smoothed_step(1.0, 2.0, 20.0, 2.0);
  const auto traj = tdho::integrate_classical(profile, 1.0, -0.5, 0.0, 6.0, 1e-3);
  auto rhs = [&profile](double t, const std::vector<double>& y) {
    return std::vector<double>{y[1], -profile.omega_squared(t) * y[0]};
  };
  const auto y = testutil::rk4(rhs, {1.0, -0.5}, 0.0, 6.0, 24000);
  CHECK(traj.q.back() == doctest::Approx(y[0]).epsilon(1e-8));
  CHECK(traj.p.back() == doctest::Approx(y[1]).epsilon(1e-8));
}
