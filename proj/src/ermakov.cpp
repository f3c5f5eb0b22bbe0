#include "tdho/ermakov.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tdho {

namespace {

constexpr double kResolutionGuard = 0.05;  // max allowed dt * stiffness rate
constexpr double kRhoFloor = 1e-6;         // singularity abort threshold
constexpr double kWronskianTol = 1e-8;

// One classical RK4 step over [a, b].  Endpoint evaluations are biased into
// the interval so that a right-hand side that jumps exactly at a or b is
// sampled on the correct side.
template <std::size_t N, class F>
void rk4_one(F&& f, double a, double b, std::array<double, N>& y) {
  const double h = b - a;
  std::array<double, N> k1, k2, k3, k4, tmp;
  f(a, Side::Right, y, k1);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  f(a + 0.5 * h, Side::Right, tmp, k2);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  f(a + 0.5 * h, Side::Right, tmp, k3);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
  f(b, Side::Left, tmp, k4);
  for (std::size_t i = 0; i < N; ++i) {
    y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

// Advance over [a, b], splitting at any profile breakpoints inside so each
// RK4 step integrates a smooth piece.
template <std::size_t N, class F>
void rk4_advance(F&& f, const std::vector<double>& breaks, double a, double b,
                 std::array<double, N>& y) {
  double lo = a;
  for (double c : breaks) {
    if (c > lo && c < b) {
      rk4_one(f, lo, c, y);
      lo = c;
    }
  }
  rk4_one(f, lo, b, y);
}

struct GridPlan {
  double t0 = 0.0;
  double dt = 0.0;
  std::size_t nsteps = 0;
  std::vector<double> breaks;
};

GridPlan make_plan(const FrequencyProfile& profile, double t0, double t1,
                   double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integration: dt must be positive");
  if (!(t1 > t0)) throw std::invalid_argument("integration: need t1 > t0");
  const double rate = profile.stiffness_rate();
  if (dt * rate > kResolutionGuard * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "integration: dt too large for profile, dt * max(Omega, epsilon) = "
       << dt * rate << " exceeds " << kResolutionGuard;
    throw std::invalid_argument(os.str());
  }
  GridPlan plan;
  plan.t0 = t0;
  plan.dt = dt;
  plan.nsteps = static_cast<std::size_t>(std::llround((t1 - t0) / dt));
  if (plan.nsteps < 1) {
    throw std::invalid_argument("integration: span shorter than one step");
  }
  plan.breaks = profile.breakpoints();
  return plan;
}

[[noreturn]] void singularity_error(double t) {
  std::ostringstream os;
  os << "ermakov solver: rho collapsed below " << kRhoFloor << " at t = " << t;
  throw std::runtime_error(os.str());
}

std::vector<double> accumulate_theta(const std::vector<double>& omega_eff,
                                     double dt) {
  std::vector<double> theta(omega_eff.size(), 0.0);
  for (std::size_t i = 0; i + 1 < omega_eff.size(); ++i) {
    theta[i + 1] = theta[i] + 0.5 * dt * (omega_eff[i] + omega_eff[i + 1]);
  }
  return theta;
}

}  // namespace

ErmakovSolution::ErmakovSolution(double t0, double dt, ErmakovRoute route,
                                 std::vector<double> rho,
                                 std::vector<double> rho_dot,
                                 std::vector<double> omega_drive,
                                 double wronskian_defect)
    : t0_(t0),
      dt_(dt),
      route_(route),
      wronskian_defect_(wronskian_defect),
      rho_(std::move(rho)),
      rho_dot_(std::move(rho_dot)),
      omega_drive_(std::move(omega_drive)) {
  omega_eff_.resize(rho_.size());
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    omega_eff_[i] = 1.0 / (rho_[i] * rho_[i]);
  }
  theta_ = accumulate_theta(omega_eff_, dt_);
}

void ErmakovSolution::check_domain(double t) const {
  const double slack = 1e-6 * dt_;
  if (t < t0_ - slack || t > t1() + slack) {
    std::ostringstream os;
    os << "solution query: t = " << t << " outside grid [" << t0_ << ", "
       << t1() << "]";
    throw std::domain_error(os.str());
  }
}

double ErmakovSolution::lerp(const std::vector<double>& f, double t) const {
  check_domain(t);
  double s = (t - t0_) / dt_;
  if (s < 0.0) s = 0.0;
  const double smax = static_cast<double>(size() - 1);
  if (s > smax) s = smax;
  std::size_t i = static_cast<std::size_t>(s);
  if (i > size() - 2) i = size() - 2;
  const double w = s - static_cast<double>(i);
  return f[i] * (1.0 - w) + f[i + 1] * w;
}

std::size_t ErmakovSolution::nearest_index(double t) const {
  check_domain(t);
  long long i = std::llround((t - t0_) / dt_);
  if (i < 0) i = 0;
  if (i > static_cast<long long>(size() - 1)) i = static_cast<long long>(size() - 1);
  return static_cast<std::size_t>(i);
}

ErmakovSolution integrate_ermakov_direct(const FrequencyProfile& profile,
                                         double rho0, double rho_dot0,
                                         double t0, double t1, double dt) {
  if (!(rho0 > 0.0)) {
    throw std::invalid_argument("ermakov solver: rho0 must be positive");
  }
  const GridPlan plan = make_plan(profile, t0, t1, dt);

  const auto rhs = [&profile](double t, Side side,
                              const std::array<double, 2>& y,
                              std::array<double, 2>& dy) {
    const double w = profile.omega(t, side);
    dy[0] = y[1];
    dy[1] = 1.0 / (y[0] * y[0] * y[0]) - w * w * y[0];
  };

  std::vector<double> rho, rho_dot, omega_drive;
  rho.reserve(plan.nsteps + 1);
  rho_dot.reserve(plan.nsteps + 1);
  omega_drive.reserve(plan.nsteps + 1);

  std::array<double, 2> y{rho0, rho_dot0};
  for (std::size_t i = 0; i <= plan.nsteps; ++i) {
    const double t = plan.t0 + static_cast<double>(i) * plan.dt;
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || y[0] < kRhoFloor) {
      singularity_error(t);
    }
    rho.push_back(y[0]);
    rho_dot.push_back(y[1]);
    omega_drive.push_back(profile.omega(t));
    if (i < plan.nsteps) {
      const double tn = plan.t0 + static_cast<double>(i + 1) * plan.dt;
      rk4_advance(rhs, plan.breaks, t, tn, y);
    }
  }
  return ErmakovSolution(plan.t0, plan.dt, ErmakovRoute::Direct,
                         std::move(rho), std::move(rho_dot),
                         std::move(omega_drive), 0.0);
}

ErmakovSolution integrate_linear_pinney(const FrequencyProfile& profile,
                                        double rho0, double rho_dot0,
                                        double t0, double t1, double dt) {
  if (!(rho0 > 0.0)) {
    throw std::invalid_argument("ermakov solver: rho0 must be positive");
  }
  const GridPlan plan = make_plan(profile, t0, t1, dt);

  const auto rhs = [&profile](double t, Side side,
                              const std::array<double, 4>& y,
                              std::array<double, 4>& dy) {
    const double w2 = profile.omega_squared(t, side);
    dy[0] = y[1];
    dy[1] = -w2 * y[0];
    dy[2] = y[3];
    dy[3] = -w2 * y[2];
  };

  std::vector<double> rho, rho_dot, omega_drive;
  rho.reserve(plan.nsteps + 1);
  rho_dot.reserve(plan.nsteps + 1);
  omega_drive.reserve(plan.nsteps + 1);

  // u carries the amplitude initial data, v the conjugate direction; the
  // Wronskian u v' - v u' equals 1 for this choice and stays 1 exactly.
  std::array<double, 4> y{rho0, rho_dot0, 0.0, 1.0 / rho0};
  double wdefect = 0.0;
  for (std::size_t i = 0; i <= plan.nsteps; ++i) {
    const double t = plan.t0 + static_cast<double>(i) * plan.dt;
    const LinearPair pair{y[0], y[1], y[2], y[3]};
    const double w = pair.wronskian();
    wdefect = std::max(wdefect, std::abs(w - 1.0));
    if (wdefect > kWronskianTol) {
      std::ostringstream os;
      os << "pinney solver: Wronskian drifted to " << w << " at t = " << t;
      throw std::runtime_error(os.str());
    }
    const double r = std::hypot(y[0], y[2]);
    if (!std::isfinite(r) || r < kRhoFloor) singularity_error(t);
    rho.push_back(r);
    rho_dot.push_back((y[0] * y[1] + y[2] * y[3]) / r);
    omega_drive.push_back(profile.omega(t));
    if (i < plan.nsteps) {
      const double tn = plan.t0 + static_cast<double>(i + 1) * plan.dt;
      rk4_advance(rhs, plan.breaks, t, tn, y);
    }
  }
  return ErmakovSolution(plan.t0, plan.dt, ErmakovRoute::Pinney,
                         std::move(rho), std::move(rho_dot),
                         std::move(omega_drive), wdefect);
}

double residual(const ErmakovSolution& sol, double t) {
  const std::size_t i = sol.nearest_index(t);
  if (i < 2 || i + 2 >= sol.size()) {
    std::ostringstream os;
    os << "residual: t = " << t
       << " needs two samples of margin inside the grid";
    throw std::domain_error(os.str());
  }
  const auto& r = sol.rho_samples();
  const double h = sol.dt();
  const double d2 =
      (-r[i - 2] + 16.0 * r[i - 1] - 30.0 * r[i] + 16.0 * r[i + 1] - r[i + 2]) /
      (12.0 * h * h);
  const double w = sol.omega_drive_samples()[i];
  return d2 + w * w * r[i] - 1.0 / (r[i] * r[i] * r[i]);
}

double phase(const ErmakovSolution& sol, double t) { return sol.theta_at(t); }

ClassicalTrajectory integrate_classical(const FrequencyProfile& profile,
                                        double q0, double p0, double t0,
                                        double t1, double dt) {
  const GridPlan plan = make_plan(profile, t0, t1, dt);

  const auto rhs = [&profile](double t, Side side,
                              const std::array<double, 2>& y,
                              std::array<double, 2>& dy) {
    dy[0] = y[1];
    dy[1] = -profile.omega_squared(t, side) * y[0];
  };

  ClassicalTrajectory traj;
  traj.t0 = plan.t0;
  traj.dt = plan.dt;
  traj.q.reserve(plan.nsteps + 1);
  traj.p.reserve(plan.nsteps + 1);

  std::array<double, 2> y{q0, p0};
  for (std::size_t i = 0; i <= plan.nsteps; ++i) {
    traj.q.push_back(y[0]);
    traj.p.push_back(y[1]);
    if (i < plan.nsteps) {
      const double t = plan.t0 + static_cast<double>(i) * plan.dt;
      const double tn = plan.t0 + static_cast<double>(i + 1) * plan.dt;
      rk4_advance(rhs, plan.breaks, t, tn, y);
    }
  }
  return traj;
}

}  // namespace tdho
