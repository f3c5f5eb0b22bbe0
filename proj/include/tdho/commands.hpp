#pragma once

#include <string>
#include <vector>

#include "tdho/config.hpp"

namespace tdho {

/// Fixed numeric formatting used by every emitted table: 12 significant
/// digits, '.' decimal separator, NaN spelled "nan".
std::string format_number(double v);

enum class CheckCmp {
  LessEq,     // pass iff value <= threshold
  GreaterEq,  // pass iff value >= threshold
  Near,       // pass iff |value - target| <= threshold
};

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  CheckCmp cmp = CheckCmp::LessEq;
  double target = 0.0;  // reference point for Near checks

  bool passed() const;
};

/// Runs the full verification suite described by the config and returns the
/// measured checks (it writes nothing).  Requires a step profile with
/// omega1 = 1, omega2 != omega1, the equilibrium start (rho0 = 1,
/// rho_dot0 = 0), and a window containing the step plus at least one
/// post-step period; anything else is a configuration error
/// (std::invalid_argument), not a failed check.
std::vector<VerifyCheck> run_verify_checks(const ScenarioConfig& config);

/// Emits `t,Omega,rho,rho_dot,omega,theta` rows over the solver window.
int cmd_profile(const ScenarioConfig& config);

/// Emits `t,mean_q,mean_p,dq,dp,dqdp,dQ,dP,r_or_nan,fidelity_or_nan` rows.
/// The r column is filled only on rows nearest a detected rho-extremum; the
/// fidelity column only when the grid oracle is enabled.
int cmd_evolve(const ScenarioConfig& config);

/// Prints one human-readable line per verification check (PASS/FAIL), plus a
/// machine-readable line-delimited copy to output.report_out when set.
/// Returns the number of failed checks, capped at 125.
int cmd_verify(const ScenarioConfig& config, bool color);

/// Emits `omega2,rho_min,r,dq_min,dp_max` for each sweep value, rows in sweep
/// order.
int cmd_sweep(const ScenarioConfig& config);

}  // namespace tdho
