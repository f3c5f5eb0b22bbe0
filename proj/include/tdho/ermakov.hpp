#pragma once

#include "tdho/frequency_profile.hpp"

#include <cstddef>
#include <vector>

namespace tdho {

// Two solutions of the linear oscillator x'' + Omega^2(t) x = 0 evaluated at
// a common time.  With a unit Wronskian W = u v' - v u', the combination
// rho = sqrt(u^2 + v^2) solves the amplitude equation
// rho'' + Omega^2 rho = 1/rho^3.
struct LinearPair {
  double u = 0.0;
  double u_dot = 0.0;
  double v = 0.0;
  double v_dot = 0.0;
  double wronskian() const { return u * v_dot - v * u_dot; }
};

enum class ErmakovRoute { Direct, Pinney };

// Solution of rho'' + Omega^2(t) rho = 1/rho^3 sampled on a uniform time
// grid t_i = t0 + i dt, together with the accumulated phase
// theta(t) = integral of 1/rho^2 from t0 to t (trapezoid on the grid,
// theta(t0) = 0, non-decreasing).  omega_eff is 1/rho^2 by construction.
//
// Queries at arbitrary t use linear interpolation between samples and throw
// std::domain_error outside [t0, t1].
class ErmakovSolution {
 public:
  ErmakovSolution(double t0, double dt, ErmakovRoute route,
                  std::vector<double> rho, std::vector<double> rho_dot,
                  std::vector<double> omega_drive, double wronskian_defect);

  std::size_t size() const { return rho_.size(); }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  double t1() const { return time_at(size() - 1); }
  double time_at(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }

  ErmakovRoute route() const { return route_; }
  // Largest |W - 1| observed along a Pinney integration (0 for direct).
  double wronskian_defect() const { return wronskian_defect_; }

  const std::vector<double>& rho_samples() const { return rho_; }
  const std::vector<double>& rho_dot_samples() const { return rho_dot_; }
  const std::vector<double>& omega_drive_samples() const { return omega_drive_; }
  const std::vector<double>& omega_eff_samples() const { return omega_eff_; }
  const std::vector<double>& theta_samples() const { return theta_; }

  double rho_at(double t) const { return lerp(rho_, t); }
  double rho_dot_at(double t) const { return lerp(rho_dot_, t); }
  double omega_eff_at(double t) const { return lerp(omega_eff_, t); }
  double theta_at(double t) const { return lerp(theta_, t); }

  // Grid index nearest to t (throws std::domain_error outside the grid).
  std::size_t nearest_index(double t) const;

 private:
  double lerp(const std::vector<double>& f, double t) const;
  void check_domain(double t) const;

  double t0_;
  double dt_;
  ErmakovRoute route_;
  double wronskian_defect_;
  std::vector<double> rho_, rho_dot_, omega_drive_, omega_eff_, theta_;
};

// Fixed-step RK4 integration of the amplitude equation itself.
//
// Guards: dt * max(Omega, tanh steepness) must not exceed 0.05
// (std::invalid_argument), and the amplitude must stay above 1e-6
// (std::runtime_error naming the time of collapse).  Steps that contain a
// profile breakpoint are split there so each RK4 stage only ever sees a
// smooth Omega.
ErmakovSolution integrate_ermakov_direct(const FrequencyProfile& profile,
                                         double rho0, double rho_dot0,
                                         double t0, double t1, double dt);

// Same solution via the linear-pair construction: integrate u and v with
// u(t0) = rho0, u'(t0) = rho_dot0, v(t0) = 0, v'(t0) = 1/rho0 (unit
// Wronskian) and form rho = sqrt(u^2 + v^2).  Conservation of W is checked
// along the way to 1e-8 (std::runtime_error on violation).
ErmakovSolution integrate_linear_pinney(const FrequencyProfile& profile,
                                        double rho0, double rho_dot0,
                                        double t0, double t1, double dt);

// Defect rho'' + Omega^2 rho - 1/rho^3 at the grid sample nearest t, with
// rho'' reconstructed by the 5-point central finite difference.  Needs two
// samples of margin on each side; otherwise std::domain_error.
double residual(const ErmakovSolution& sol, double t);

// Accumulated phase theta(t) (linear interpolation between grid samples).
double phase(const ErmakovSolution& sol, double t);

// Classical trajectory q'' = -Omega^2(t) q, integrated with the same RK4
// scheme and grid conventions as the amplitude solvers.
struct ClassicalTrajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> q;
  std::vector<double> p;
  double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
};

ClassicalTrajectory integrate_classical(const FrequencyProfile& profile,
                                        double q0, double p0, double t0,
                                        double t1, double dt);

}  // namespace tdho
