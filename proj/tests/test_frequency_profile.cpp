#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tdho/frequency_profile.hpp"
#include "test_helpers.hpp"

using tdho::FrequencyProfile;
using tdho::Side;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("smoothed step interpolates between the two plateaus") {
  const auto profile = FrequencyProfile::smoothed_step(1.0, 2.0, 20.0, 2.0);

  CHECK(profile.omega(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(profile.omega(2.0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(profile.omega(10.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(profile.max_omega() == doctest::Approx(2.0));
  CHECK(profile.stiffness_rate() == doctest::Approx(20.0));
  CHECK(profile.breakpoints().empty());

  // Beyond |t - t_s| = 30/epsilon the tanh has saturated to double precision.
  CHECK(std::abs(profile.omega(2.0 - 1.5) - 1.0) < 1e-9);
  CHECK(std::abs(profile.omega(2.0 + 1.5) - 2.0) < 1e-9);
}

TEST_CASE("sharp smoothed step converges to the ideal step") {
  const auto smooth = FrequencyProfile::smoothed_step(1.0, 2.0, 1e3, 2.0);
  const auto ideal = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
  for (double t : {0.0, 1.0, 1.89, 2.11, 3.0, 7.5}) {
    CHECK(std::abs(smooth.omega(t) - ideal.omega(t)) < 1e-6);
  }
}

TEST_CASE("alternate smoothed parametrization has shifted plateaus") {
  const auto profile =
      FrequencyProfile::smoothed_step(1.0, 2.0, 20.0, 2.0, /*alt_omega_form=*/true);
  CHECK(profile.omega(-5.0) == doctest::Approx(1.25).epsilon(1e-9));
  CHECK(profile.omega(10.0) == doctest::Approx(1.75).epsilon(1e-9));
  CHECK(profile.max_omega() == doctest::Approx(1.75).epsilon(1e-9));
}

TEST_CASE("ideal step is right-continuous with a one-sided override") {
  const auto profile = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
  CHECK(profile.omega(1.999) == 1.0);
  CHECK(profile.omega(2.0) == 2.0);
  CHECK(profile.omega(2.0, Side::Left) == 1.0);
  CHECK(profile.omega(2.0, Side::Right) == 2.0);
  CHECK(profile.omega(2.001) == 2.0);
  const auto bps = profile.breakpoints();
  REQUIRE(bps.size() == 1);
  CHECK(bps[0] == 2.0);
}

TEST_CASE("constant profile") {
  const auto profile = FrequencyProfile::constant(1.5);
  CHECK(profile.omega(-100.0) == 1.5);
  CHECK(profile.omega(100.0) == 1.5);
  CHECK(profile.omega_squared(0.0) == doctest::Approx(2.25));
  CHECK(profile.max_omega() == 1.5);
  CHECK(profile.breakpoints().empty());
  CHECK(!profile.is_step());
}

TEST_CASE("tabulated profile interpolates and refuses to extrapolate") {
  const auto profile = FrequencyProfile::tabulated({0.0, 1.0, 3.0}, {1.0, 2.0, 1.0});
  CHECK(profile.omega(0.0) == doctest::Approx(1.0));
  CHECK(profile.omega(0.5) == doctest::Approx(1.5));
  CHECK(profile.omega(2.0) == doctest::Approx(1.5));
  CHECK(profile.omega(3.0) == doctest::Approx(1.0));
  CHECK(profile.max_omega() == doctest::Approx(2.0));
  CHECK_THROWS_AS(profile.omega(-0.1), std::domain_error);
  CHECK_THROWS_AS(profile.omega(3.1), std::domain_error);
}

TEST_CASE("profile constructors validate their arguments") {
  CHECK_THROWS_AS(FrequencyProfile::smoothed_step(0.0, 2.0, 20.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(FrequencyProfile::smoothed_step(1.0, -2.0, 20.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(FrequencyProfile::smoothed_step(1.0, 2.0, 0.0, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(FrequencyProfile::ideal_step(1.0, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyProfile::constant(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyProfile::tabulated({0.0, 1.0}, {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FrequencyProfile::tabulated({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyProfile::tabulated({0.0, 0.0}, {1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(FrequencyProfile::tabulated({0.0, 1.0}, {1.0, -2.0}),
                  std::invalid_argument);
}

TEST_CASE("closed-form amplitude hits the known landmarks of an upward step") {
  SUBCASE("final frequency 2") {
    const auto ideal = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
    CHECK(tdho::rho_analytic(ideal, 0.7) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tdho::rho_analytic(ideal, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    // A quarter of the post-step oscillation later the amplitude bottoms out
    // at omega1/omega2.
    CHECK(tdho::rho_analytic(ideal, 2.0 + kPi / 4.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tdho::rho_analytic(ideal, 2.0 + kPi / 2.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("final frequency 3") {
    const auto ideal = FrequencyProfile::ideal_step(1.0, 3.0, 2.0);
    CHECK(tdho::rho_analytic(ideal, 2.0 + kPi / 6.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("closed-form amplitude matches an independent integration") {
  const auto ideal = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
  // Post-step the drive is constant at 2, so integrating the amplitude
  // equation from the step time with the flat pre-step state is exact.
  auto rhs = [](double /*t*/, const std::vector<double>& y) {
    return std::vector<double>{y[1], 1.0 / (y[0] * y[0] * y[0]) - 4.0 * y[0]};
  };
  for (double t : {2.3, 2.9, 3.7, 4.4}) {
    const auto y = testutil::rk4(rhs, {1.0, 0.0}, 2.0, t, 4000);
    CHECK(tdho::rho_analytic(ideal, t) == doctest::Approx(y[0]).epsilon(1e-9));
  }
}

TEST_CASE("closed-form amplitude satisfies the amplitude equation") {
  const auto ideal = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
  const double h = 1e-4;
  for (double t : {0.5, 1.2, 2.4, 3.1, 4.8, 7.7}) {
    const double rm = tdho::rho_analytic(ideal, t - h);
    const double r0 = tdho::rho_analytic(ideal, t);
    const double rp = tdho::rho_analytic(ideal, t + h);
    const double second = (rp - 2.0 * r0 + rm) / (h * h);
    const double defect = second + ideal.omega_squared(t) * r0 - 1.0 / (r0 * r0 * r0);
    CHECK(std::abs(defect) < 1e-6);
  }
}

TEST_CASE("closed-form amplitude is periodic after the step") {
  const auto ideal = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
  const double period = kPi / 2.0;
  for (double x : {0.13, 0.4, 0.71}) {
    CHECK(tdho::rho_analytic(ideal, 2.0 + x) ==
          doctest::Approx(tdho::rho_analytic(ideal, 2.0 + x + period)).epsilon(1e-10));
  }
}

TEST_CASE("closed-form amplitude tracks a sharply smoothed step") {
  const auto smooth = FrequencyProfile::smoothed_step(1.0, 2.0, 200.0, 2.0);
  const auto ideal = FrequencyProfile::ideal_step(1.0, 2.0, 2.0);
  for (double t : {2.5, 3.0, 4.2}) {
    CHECK(tdho::rho_analytic(smooth, t) ==
          doctest::Approx(tdho::rho_analytic(ideal, t)).epsilon(0.02));
  }
}

TEST_CASE("closed-form amplitude requires a step profile") {
  CHECK_THROWS_AS(tdho::rho_analytic(FrequencyProfile::constant(1.0), 1.0),
                  std::invalid_argument);
}

TEST_CASE("effective frequency") {
  CHECK(tdho::effective_frequency(1.0) == doctest::Approx(1.0));
  CHECK(tdho::effective_frequency(0.5) == doctest::Approx(4.0));
  CHECK_THROWS_AS(tdho::effective_frequency(0.0), std::domain_error);
  CHECK_THROWS_AS(tdho::effective_frequency(-1.0), std::domain_error);
}
