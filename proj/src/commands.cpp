#include "tdho/commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdho/ermakov.hpp"
#include "tdho/gaussian_dynamics.hpp"
#include "tdho/tdse.hpp"

namespace tdho {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRouteAgreementTol = 1e-7;

// Writes either to stdout ("-") or to a file, with explicit error reporting.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) : path_(path) {
    if (path == "-") {
      os_ = &std::cout;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw std::runtime_error("cannot open output file: " + path);
    os_ = &file_;
  }

  std::ostream& os() { return *os_; }

  void finish() {
    os_->flush();
    if (!*os_) throw std::runtime_error("error writing output file: " + path_);
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

ErmakovSolution solve_scenario(const FrequencyProfile& profile,
                               const SolverConfig& solver, const StateConfig& state) {
  switch (solver.route) {
    case RouteChoice::Direct:
      return integrate_ermakov_direct(profile, state.rho0, state.rho_dot0, solver.t0,
                                      solver.t1, solver.dt);
    case RouteChoice::Pinney:
      return integrate_linear_pinney(profile, state.rho0, state.rho_dot0, solver.t0,
                                     solver.t1, solver.dt);
    case RouteChoice::Both: {
      auto direct = integrate_ermakov_direct(profile, state.rho0, state.rho_dot0,
                                             solver.t0, solver.t1, solver.dt);
      auto pinney = integrate_linear_pinney(profile, state.rho0, state.rho_dot0,
                                            solver.t0, solver.t1, solver.dt);
      double diff = 0.0;
      for (std::size_t i = 0; i < direct.size(); ++i) {
        diff = std::max(diff, std::abs(direct.rho_samples()[i] - pinney.rho_samples()[i]));
      }
      if (diff > kRouteAgreementTol) {
        std::string msg = "integration routes disagree: max |rho_direct - rho_pinney| = " +
                          format_number(diff) + " exceeds " +
                          format_number(kRouteAgreementTol);
        throw std::runtime_error(msg);
      }
      return direct;
    }
  }
  throw std::invalid_argument("unknown integration route");
}

Complex config_alpha(const StateConfig& state) {
  return Complex(state.alpha_re, state.alpha_im);
}

void append_row(std::string& line, double v, bool first = false) {
  if (!first) line += ",";
  line += format_number(v);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

bool VerifyCheck::passed() const {
  switch (cmp) {
    case CheckCmp::LessEq:
      return value <= threshold;
    case CheckCmp::GreaterEq:
      return value >= threshold;
    case CheckCmp::Near:
      return std::abs(value - target) <= threshold;
  }
  return false;
}

int cmd_profile(const ScenarioConfig& config) {
  const FrequencyProfile profile = make_profile(config.profile);
  const ErmakovSolution sol = solve_scenario(profile, config.solver, config.state);

  OutputTarget out(config.output.out);
  out.os() << "t,Omega,rho,rho_dot,omega,theta\n";
  std::string line;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    line.clear();
    append_row(line, sol.time_at(i), true);
    append_row(line, sol.omega_drive_samples()[i]);
    append_row(line, sol.rho_samples()[i]);
    append_row(line, sol.rho_dot_samples()[i]);
    append_row(line, sol.omega_eff_samples()[i]);
    append_row(line, sol.theta_samples()[i]);
    out.os() << line << '\n';
  }
  out.finish();
  return 0;
}

int cmd_evolve(const ScenarioConfig& config) {
  const FrequencyProfile profile = make_profile(config.profile);
  const ErmakovSolution sol = solve_scenario(profile, config.solver, config.state);
  const Complex alpha = config_alpha(config.state);

  // The squeezing column is filled on the row nearest each refined extremum.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> r_by_row(sol.size(), nan);
  for (const RhoExtremum& e : find_extrema(sol)) {
    r_by_row[sol.nearest_index(e.t)] = std::log(e.rho);
  }

  std::optional<SplitStepEvolver> oracle;
  if (config.oracle.enabled) {
    const GridSpec spec{config.oracle.x_min, config.oracle.x_max, config.oracle.grid_n};
    oracle.emplace(init_coherent(spec, alpha), profile, config.oracle.dt_grid,
                   config.solver.t0);
  }

  OutputTarget out(config.output.out);
  out.os() << "t,mean_q,mean_p,dq,dp,dqdp,dQ,dP,r_or_nan,fidelity_or_nan\n";
  std::string line;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    const double t = sol.time_at(i);
    const EvolvedState state = evolve(alpha, sol, t);
    const auto [mean_q, mean_p] = expectations(state);
    const QuadratureStats stats = uncertainties(state);
    const QuadratureStats transformed = transformed_uncertainties(state);

    double fid = nan;
    if (oracle) {
      oracle->advance_to(t);
      fid = fidelity(oracle->state(), state);
    }

    line.clear();
    append_row(line, t, true);
    append_row(line, mean_q);
    append_row(line, mean_p);
    append_row(line, stats.dq());
    append_row(line, stats.dp());
    append_row(line, stats.dq() * stats.dp());
    append_row(line, transformed.dq());
    append_row(line, transformed.dp());
    append_row(line, r_by_row[i]);
    append_row(line, fid);
    out.os() << line << '\n';
  }
  out.finish();
  return 0;
}

int cmd_sweep(const ScenarioConfig& config) {
  if (config.profile.variant != ProfileVariant::SmoothedStep &&
      config.profile.variant != ProfileVariant::IdealStep) {
    throw std::invalid_argument("sweep requires a step profile variant");
  }
  if (config.sweep.omega2_values.empty()) {
    throw std::invalid_argument("sweep requires at least one omega2 value");
  }

  OutputTarget out(config.output.out);
  out.os() << "omega2,rho_min,r,dq_min,dp_max\n";
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::string line;
  for (double w2 : config.sweep.omega2_values) {
    ProfileConfig pc = config.profile;
    pc.omega2 = w2;
    const FrequencyProfile profile = make_profile(pc);
    const ErmakovSolution sol = solve_scenario(profile, config.solver, config.state);

    // First post-step minimum; when the amplitude never dips (no frequency
    // change), fall back to the smallest post-step sample.
    double rho_min = std::numeric_limits<double>::quiet_NaN();
    for (const RhoExtremum& e : find_extrema(sol)) {
      if (e.t > pc.t_step && e.kind == ExtremumKind::Minimum) {
        rho_min = e.rho;
        break;
      }
    }
    if (std::isnan(rho_min)) {
      rho_min = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < sol.size(); ++i) {
        if (sol.time_at(i) >= pc.t_step) {
          rho_min = std::min(rho_min, sol.rho_samples()[i]);
        }
      }
    }

    line.clear();
    append_row(line, w2, true);
    append_row(line, rho_min);
    append_row(line, std::log(rho_min));
    append_row(line, rho_min * inv_sqrt2);
    append_row(line, 1.0 / (rho_min * std::sqrt(2.0)));
    out.os() << line << '\n';
  }
  out.finish();
  return 0;
}

std::vector<VerifyCheck> run_verify_checks(const ScenarioConfig& config) {
  const ProfileConfig& pc = config.profile;
  if (pc.variant != ProfileVariant::SmoothedStep &&
      pc.variant != ProfileVariant::IdealStep) {
    throw std::invalid_argument(
        "verification requires a step profile (smoothed_step or ideal_step)");
  }
  if (pc.omega1 != 1.0) {
    throw std::invalid_argument(
        "verification requires omega1 = 1: the closed-form amplitude used as the "
        "reference assumes a unit pre-step frequency");
  }
  if (pc.omega2 == pc.omega1) {
    throw std::invalid_argument(
        "verification requires a genuine step (omega2 != omega1)");
  }
  if (config.state.rho0 != 1.0 || config.state.rho_dot0 != 0.0) {
    throw std::invalid_argument(
        "verification requires the equilibrium start rho0 = 1, rho_dot0 = 0");
  }
  const double w1 = pc.omega1;
  const double w2 = pc.omega2;
  const double ts = pc.t_step;
  const double t0 = config.solver.t0;
  const double t1 = config.solver.t1;
  const double dt = config.solver.dt;
  const double period = kPi / w2;
  if (!(ts > t0 && ts + period <= t1)) {
    throw std::invalid_argument(
        "verification window must contain the step time plus at least one "
        "post-step period");
  }

  const FrequencyProfile ideal = FrequencyProfile::ideal_step(w1, w2, ts);
  const FrequencyProfile smooth =
      FrequencyProfile::smoothed_step(w1, w2, pc.epsilon, ts);

  const ErmakovSolution sol_ideal = integrate_ermakov_direct(ideal, 1.0, 0.0, t0, t1, dt);
  const ErmakovSolution pin_ideal = integrate_linear_pinney(ideal, 1.0, 0.0, t0, t1, dt);
  const ErmakovSolution sol_smooth = integrate_ermakov_direct(smooth, 1.0, 0.0, t0, t1, dt);
  const ErmakovSolution pin_smooth = integrate_linear_pinney(smooth, 1.0, 0.0, t0, t1, dt);

  std::vector<VerifyCheck> checks;
  auto add_less = [&checks](const char* name, double value, double threshold) {
    checks.push_back({name, value, threshold, CheckCmp::LessEq, 0.0});
  };
  auto add_greater = [&checks](const char* name, double value, double threshold) {
    checks.push_back({name, value, threshold, CheckCmp::GreaterEq, 0.0});
  };
  auto add_near = [&checks](const char* name, double value, double target, double tol) {
    checks.push_back({name, value, tol, CheckCmp::Near, target});
  };

  // Solver against the closed-form amplitude (exact for the ideal step).
  {
    double err = 0.0;
    for (std::size_t i = 0; i < sol_ideal.size(); ++i) {
      err = std::max(err, std::abs(sol_ideal.rho_samples()[i] -
                                   rho_analytic(ideal, sol_ideal.time_at(i))));
    }
    add_less("ermakov_vs_analytic", err, 1e-6);
  }

  // Samples plugged back into the differential equation.  The finite-
  // difference stencil cannot straddle the jump, so a neighborhood of the
  // step time is excluded.
  {
    double worst = 0.0;
    const double exclude = std::max(1e-3, 3.0 * dt);
    for (std::size_t i = 2; i + 2 < sol_ideal.size(); ++i) {
      const double t = sol_ideal.time_at(i);
      if (std::abs(t - ts) <= exclude) continue;
      worst = std::max(worst, std::abs(residual(sol_ideal, t)));
    }
    add_less("ermakov_residual_max", worst, 1e-6);
  }

  // The nonlinear equation and the linear-pair construction must agree.
  {
    double diff_ideal = 0.0;
    double diff_smooth = 0.0;
    for (std::size_t i = 0; i < sol_ideal.size(); ++i) {
      diff_ideal = std::max(diff_ideal, std::abs(sol_ideal.rho_samples()[i] -
                                                 pin_ideal.rho_samples()[i]));
      diff_smooth = std::max(diff_smooth, std::abs(sol_smooth.rho_samples()[i] -
                                                   pin_smooth.rho_samples()[i]));
    }
    add_less("route_equivalence_ideal", diff_ideal, 1e-7);
    add_less("route_equivalence_smoothed", diff_smooth, 1e-7);
    add_less("wronskian_defect",
             std::max(pin_ideal.wronskian_defect(), pin_smooth.wronskian_defect()),
             1e-8);
  }

  // Fourth-order convergence: halving the step shrinks the worst-case error
  // by about 2^4 (12 allows for error-constant wobble).
  {
    const double coarse = std::min(0.02, 0.04 / ideal.stiffness_rate());
    auto worst_err = [&](double step) {
      const ErmakovSolution s = integrate_ermakov_direct(ideal, 1.0, 0.0, t0, t1, step);
      double err = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        err = std::max(err, std::abs(s.rho_samples()[i] -
                                     rho_analytic(ideal, s.time_at(i))));
      }
      return err;
    };
    const double err_coarse = worst_err(coarse);
    const double err_fine = std::max(worst_err(0.5 * coarse), 1e-300);
    add_greater("convergence_order_ratio", err_coarse / err_fine, 12.0);
  }

  // Conservation of the quadratic invariant along classical trajectories.
  {
    std::mt19937 rng(20140917u);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    double drift = 0.0;
    for (int k = 0; k < 10; ++k) {
      double q0 = 0.0;
      double p0 = 0.0;
      do {
        q0 = coord(rng);
        p0 = coord(rng);
      } while (q0 * q0 + p0 * p0 < 0.25);
      const ClassicalTrajectory traj =
          integrate_classical(smooth, q0, p0, t0, t1, dt);
      const double i0 = lewis_invariant_classical(traj.q[0], traj.p[0],
                                                  sol_smooth.rho_samples()[0],
                                                  sol_smooth.rho_dot_samples()[0]);
      for (std::size_t i = 0; i < traj.q.size(); ++i) {
        const double ii = lewis_invariant_classical(traj.q[i], traj.p[i],
                                                    sol_smooth.rho_samples()[i],
                                                    sol_smooth.rho_dot_samples()[i]);
        drift = std::max(drift, std::abs(ii - i0) / i0);
      }
    }
    add_less("lewis_invariant_drift", drift, 1e-6);
  }

  // The state's mean follows the classical trajectory of its label.
  const Complex alpha = config_alpha(config.state);
  {
    const double q0 = std::sqrt(2.0) * alpha.real();
    const double p0 = std::sqrt(2.0) * alpha.imag();
    const ClassicalTrajectory traj = integrate_classical(smooth, q0, p0, t0, t1, dt);
    double defect = 0.0;
    for (std::size_t i = 0; i < traj.q.size(); ++i) {
      const EvolvedState state = evolve(alpha, sol_smooth, traj.time_at(i));
      const auto [mq, mp] = expectations(state);
      defect = std::max(defect, std::max(std::abs(mq - traj.q[i]),
                                         std::abs(mp - traj.p[i])));
    }
    add_less("classical_mean_defect", defect, 1e-5);
  }

  // In the invariant's own quadratures the state is always minimum-uncertainty.
  {
    double defect = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double t = t0 + (t1 - t0) * static_cast<double>(k) / 999.0;
      const QuadratureStats s = transformed_uncertainties(evolve(alpha, sol_smooth, t));
      defect = std::max(defect, std::abs(s.dq() * s.dp() - 0.5));
    }
    add_less("transformed_uncertainty_defect", defect, 1e-12);
  }

  // Extremum-anchored claims, on the ideal-step solution.
  {
    std::vector<RhoExtremum> ext;
    for (const RhoExtremum& e : find_extrema(sol_ideal)) {
      if (e.t > ts) ext.push_back(e);
    }
    if (ext.size() < 2) {
      throw std::invalid_argument(
          "verification window too short: need at least two post-step extrema");
    }

    double mus = 0.0;
    for (const RhoExtremum& e : ext) {
      const QuadratureStats s = uncertainties(evolve(alpha, sol_ideal, e.t));
      mus = std::max(mus, std::abs(s.dq() * s.dp() - 0.5));
    }
    add_less("mus_at_extrema", mus, 1e-6);

    double excess = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < ext.size(); ++i) {
      const double tm = 0.5 * (ext[i].t + ext[i + 1].t);
      const QuadratureStats s = uncertainties(evolve(alpha, sol_ideal, tm));
      excess = std::min(excess, s.dq() * s.dp() - 0.5);
    }
    add_greater("dqdp_between_extrema_excess", excess, 0.0);

    // The packet returns to the unstretched coherent form at the extrema on
    // the far side of each oscillation (maxima after an upward step, minima
    // after a downward one).
    const ExtremumKind squeeze_kind =
        (w2 > w1) ? ExtremumKind::Minimum : ExtremumKind::Maximum;
    double coherent_defect = 0.0;
    double rho_star = std::numeric_limits<double>::infinity();
    double first_squeeze_rho = std::numeric_limits<double>::quiet_NaN();
    for (const RhoExtremum& e : ext) {
      rho_star = std::min(rho_star, e.rho);
      if (e.kind == squeeze_kind) {
        if (std::isnan(first_squeeze_rho)) first_squeeze_rho = e.rho;
      } else {
        coherent_defect = std::max(
            coherent_defect,
            std::max(std::abs(e.rho - 1.0), std::abs(sol_ideal.rho_dot_at(e.t))));
      }
    }
    add_less("coherent_return_extrema", coherent_defect, 1e-6);
    add_near("squeezing_r", std::log(first_squeeze_rho), std::log(w1 / w2), 1e-4);
    add_near("omega_avg_first_period",
             (sol_ideal.theta_at(ts + period) - sol_ideal.theta_at(ts)) / period, w2,
             1e-6);
    add_near("omega_max", 1.0 / (rho_star * rho_star),
             std::max(w1 * w1, w2 * w2), 1e-3);
  }

  // Operator-factorization identities at the symplectic level.
  {
    std::mt19937 rng(7150226u);
    std::uniform_real_distribution<double> log_rho(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> rate(-5.0, 5.0);
    double factor_defect = 0.0;
    double comm_defect = 0.0;
    auto probe = [&](double rho, double rho_dot) {
      const SymplecticMatrix a = symplectic_of_T_factored(rho, rho_dot);
      const SymplecticMatrix b = symplectic_of_T_generator(rho, rho_dot);
      factor_defect = std::max(factor_defect, a.max_abs_diff(b));
      comm_defect = std::max(comm_defect, commutator_check(rho, rho_dot));
    };
    for (int k = 0; k < 1000; ++k) probe(std::exp(log_rho(rng)), rate(rng));
    for (double shift : {1e-5, 1e-9, 1e-12}) {
      for (double rho_dot : {-2.0, 0.7, 5.0}) {
        probe(1.0 + shift, rho_dot);
        probe(1.0 - shift, rho_dot);
        probe(1.0, rho_dot);
      }
    }
    add_less("factorization_defect_max", factor_defect, 1e-10);
    add_less("commutator_defect_max", comm_defect, 1e-12);
  }

  return checks;
}

int cmd_verify(const ScenarioConfig& config, bool color) {
  const std::vector<VerifyCheck> checks = run_verify_checks(config);

  const char* green = color ? "\033[32m" : "";
  const char* red = color ? "\033[31m" : "";
  const char* reset = color ? "\033[0m" : "";
  int fails = 0;
  for (const VerifyCheck& c : checks) {
    std::string bound;
    switch (c.cmp) {
      case CheckCmp::LessEq:
        bound = "threshold<=" + format_number(c.threshold);
        break;
      case CheckCmp::GreaterEq:
        bound = "threshold>=" + format_number(c.threshold);
        break;
      case CheckCmp::Near:
        bound = "target=" + format_number(c.target) + " tol=" + format_number(c.threshold);
        break;
    }
    const bool ok = c.passed();
    if (!ok) ++fails;
    char line[192];
    std::snprintf(line, sizeof(line), "%-34s value=%-22s %-40s", c.name.c_str(),
                  format_number(c.value).c_str(), bound.c_str());
    std::cout << line << (ok ? green : red) << (ok ? "PASS" : "FAIL") << reset << '\n';
  }
  std::cout << checks.size() << " checks, " << fails << " failed\n";

  if (!config.output.report_out.empty()) {
    OutputTarget report(config.output.report_out);
    for (const VerifyCheck& c : checks) {
      report.os() << "{\"check\":\"" << c.name << "\",\"value\":" << format_number(c.value)
                  << ",\"threshold\":" << format_number(c.threshold) << ",\"status\":\""
                  << (c.passed() ? "PASS" : "FAIL") << "\"}\n";
    }
    report.finish();
  }
  return std::min(fails, 125);
}

}  // namespace tdho
