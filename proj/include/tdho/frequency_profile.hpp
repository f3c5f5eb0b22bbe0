#pragma once

#include <vector>

namespace tdho {

// Which one-sided limit to use when a profile is evaluated exactly at a jump.
// Everywhere else the value is unambiguous and the side is ignored.
enum class Side { Left, Right };

// Driving frequency Omega(t) of the oscillator H(t) = (p^2 + Omega^2 q^2)/2,
// in hbar = m = 1 units.
//
// Variants:
//   SmoothedStep  Omega(t) = omega1 + (D/2)(1 + tanh[eps (t - t_s)]),
//                 D = omega2 - omega1.  Plateaus at omega1 / omega2, C-inf.
//   IdealStep     omega1 for t < t_s, omega2 for t >= t_s (right-continuous).
//   Constant      omega0 for all t.
//   Tabulated     linear interpolation between strictly increasing samples;
//                 no extrapolation: queries outside the range are an error.
//
// SmoothedStep also carries an opt-in alternate parametrization (the
// multiplicative form, selected by the alt_omega_form flag / the CLI's
// --alt_omega_form):  Omega(t) = omega1 [1 + (D/2)(1 + tanh(...)/2)],
// whose plateaus sit at omega1(1 + D/4) and omega1(1 + 3D/4) instead of
// omega1/omega2.  It exists for side-by-side comparison only.
class FrequencyProfile {
 public:
  enum class Kind { SmoothedStep, IdealStep, Constant, Tabulated };

  static FrequencyProfile smoothed_step(double omega1, double omega2,
                                        double epsilon, double t_step,
                                        bool alt_omega_form = false);
  static FrequencyProfile ideal_step(double omega1, double omega2,
                                     double t_step);
  static FrequencyProfile constant(double omega0);
  static FrequencyProfile tabulated(std::vector<double> times,
                                    std::vector<double> values);

  Kind kind() const { return kind_; }
  bool is_step() const {
    return kind_ == Kind::SmoothedStep || kind_ == Kind::IdealStep;
  }

  // Omega(t); strictly positive. Throws std::domain_error outside a
  // tabulated profile's range.
  double omega(double t, Side side = Side::Right) const;
  double omega_squared(double t, Side side = Side::Right) const {
    const double w = omega(t, side);
    return w * w;
  }

  // Largest value Omega attains (sup over all t).
  double max_omega() const;
  // Fastest rate in the problem, used by integrator step-size guards:
  // max Omega, and additionally the tanh steepness for smoothed steps.
  double stiffness_rate() const;
  // Times where Omega itself jumps (ideal step only); sorted.
  std::vector<double> breakpoints() const;

  double omega1() const { return omega1_; }
  double omega2() const { return omega2_; }
  double epsilon() const { return epsilon_; }
  double step_time() const { return t_step_; }
  double omega0() const { return omega0_; }
  bool alt_omega_form() const { return alt_omega_form_; }
  const std::vector<double>& sample_times() const { return tab_t_; }
  const std::vector<double>& sample_values() const { return tab_w_; }

 private:
  FrequencyProfile() = default;

  Kind kind_ = Kind::Constant;
  double omega1_ = 0.0;
  double omega2_ = 0.0;
  double epsilon_ = 0.0;
  double t_step_ = 0.0;
  double omega0_ = 0.0;
  bool alt_omega_form_ = false;
  std::vector<double> tab_t_;
  std::vector<double> tab_w_;
};

// Closed-form Ermakov amplitude for step profiles (exact for IdealStep with
// omega1 = 1; an approximation for SmoothedStep, where the numerical solver
// is authoritative):
//
//   rho(t) = sqrt( [1 + w1^2/W^2 + (1 - w1^2/W^2) cos(2 Phi)] / 2 ),
//   W = Omega(t),  Phi = integral of Omega from t_s to t.
//
// The phase integral is evaluated in closed form for IdealStep and by
// adaptive Gauss-Kronrod quadrature (absolute tolerance ~1e-10) for
// SmoothedStep.  Requires a step profile; throws std::invalid_argument
// otherwise.
double rho_analytic(const FrequencyProfile& profile, double t);

// Effective frequency omega(t) = 1 / rho^2 of the invariant-mode oscillator.
// Throws std::domain_error for rho <= 0.
double effective_frequency(double rho);

}  // namespace tdho
