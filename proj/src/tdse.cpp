#include "tdho/tdse.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tdho {
namespace {

constexpr double kEdgeLeakTol = 1e-8;
constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void check_grid(const GridSpec& spec) {
  std::ostringstream msg;
  if (!(spec.x_max > spec.x_min)) {
    msg << "grid box [" << spec.x_min << ", " << spec.x_max << ") is empty";
    throw std::invalid_argument(msg.str());
  }
  if (!power_of_two(spec.n)) {
    msg << "grid size " << spec.n << " is not a power of two";
    throw std::invalid_argument(msg.str());
  }
}

void check_sized(const GridWavefunction& wf) {
  check_grid(wf.spec);
  if (wf.amp.size() != wf.spec.n) {
    std::ostringstream msg;
    msg << "wavefunction holds " << wf.amp.size() << " amplitudes but its grid has "
        << wf.spec.n << " points";
    throw std::invalid_argument(msg.str());
  }
}

// Packet support must stay well inside the box: the grid is periodic, so
// amplitude that reaches an edge re-enters from the other side.
void check_support(const GridSpec& spec, double center, double half_width,
                   const char* what) {
  if (center - half_width < spec.x_min || center + half_width > spec.x_max) {
    std::ostringstream msg;
    msg << what << " centered at q = " << center << " needs [" << center - half_width
        << ", " << center + half_width << "] but the box is [" << spec.x_min << ", "
        << spec.x_max << "); enlarge the box or move the state";
    throw std::invalid_argument(msg.str());
  }
}

double momentum_of_index(const GridSpec& spec, std::size_t j) {
  const double base = 2.0 * kPi / spec.length();
  const auto half = spec.n / 2;
  const double m = (j < half) ? static_cast<double>(j)
                              : static_cast<double>(j) - static_cast<double>(spec.n);
  return base * m;
}

// Multiplies amp[j] by scale * exp(-i c x_j^2) for x_j = x0 + j dx.
//
// The quadratic phase is generated by a two-term recurrence (each factor is
// the previous one times a geometrically evolving ratio) instead of one
// sin/cos pair per point; the accumulated rounding after n steps is O(n eps),
// far below every tolerance used against this propagator.
void apply_quadratic_phase(GridWavefunction& wf, double c, double scale) {
  const double x0 = wf.spec.x_min;
  const double dx = wf.spec.dx();
  std::complex<double> p = std::polar(scale, -c * x0 * x0);
  std::complex<double> g = std::polar(1.0, -c * (2.0 * x0 * dx + dx * dx));
  const std::complex<double> w = std::polar(1.0, -2.0 * c * dx * dx);
  for (auto& a : wf.amp) {
    a *= p;
    p *= g;
    g *= w;
  }
}

fftw_complex* as_fftw(std::vector<std::complex<double>>& v) {
  return reinterpret_cast<fftw_complex*>(v.data());
}

}  // namespace

double GridWavefunction::norm() const {
  double sum = 0.0;
  for (const auto& a : amp) sum += std::norm(a);
  return std::sqrt(sum * spec.dx());
}

GridWavefunction init_coherent(const GridSpec& spec, std::complex<double> alpha) {
  check_grid(spec);
  const double q0 = std::sqrt(2.0) * alpha.real();
  const double p0 = std::sqrt(2.0) * alpha.imag();
  check_support(spec, q0, 6.0, "coherent state");

  GridWavefunction wf{spec, std::vector<std::complex<double>>(spec.n)};
  const double amp0 = std::pow(kPi, -0.25);
  for (std::size_t j = 0; j < spec.n; ++j) {
    const double x = spec.x(j);
    const double d = x - q0;
    wf.amp[j] = amp0 * std::exp(-0.5 * d * d) *
                std::exp(std::complex<double>(0.0, p0 * x - 0.5 * p0 * q0));
  }
  return wf;
}

GridWavefunction render_evolved_state(const GridSpec& spec, const EvolvedState& state) {
  check_grid(spec);
  if (!(state.rho > 0.0)) {
    std::ostringstream msg;
    msg << "state amplitude rho = " << state.rho << " must be positive";
    throw std::invalid_argument(msg.str());
  }
  const Complex label = state.label();
  const double q0 = std::sqrt(2.0) * label.real();
  const double p0 = std::sqrt(2.0) * label.imag();
  const double rho = state.rho;
  const double chirp = 0.5 * state.rho_dot / rho;
  // The packet's width is stretched by rho, so the minimum clearance scales
  // with it (never below the unstretched six sigma).
  check_support(spec, rho * q0, 6.0 * std::max(1.0, rho), "evolved state");

  GridWavefunction wf{spec, std::vector<std::complex<double>>(spec.n)};
  const double amp0 = std::pow(kPi * rho * rho, -0.25);
  for (std::size_t j = 0; j < spec.n; ++j) {
    const double x = spec.x(j);
    const double u = x / rho;
    const double d = u - q0;
    const double phase = p0 * u + chirp * x * x - 0.5 * p0 * q0;
    wf.amp[j] = amp0 * std::exp(-0.5 * d * d) * std::exp(std::complex<double>(0.0, phase));
  }
  return wf;
}

QuadratureStats moments(const GridWavefunction& wf) {
  check_sized(wf);
  const std::size_t n = wf.spec.n;
  const double dx = wf.spec.dx();

  double weight = 0.0;
  double mean_q = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(wf.amp[j]);
    weight += w;
    mean_q += w * wf.spec.x(j);
  }
  if (weight <= 0.0) throw std::domain_error("cannot take moments of a zero state");
  mean_q /= weight;

  double var_q = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = wf.spec.x(j) - mean_q;
    var_q += std::norm(wf.amp[j]) * d * d;
  }
  var_q /= weight;

  // Momentum moments from the spectral weights.
  std::vector<std::complex<double>> phi = wf.amp;
  fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(phi), as_fftw(phi),
                                   FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);

  double pweight = 0.0;
  double mean_p = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(phi[j]);
    pweight += w;
    mean_p += w * momentum_of_index(wf.spec, j);
  }
  mean_p /= pweight;
  double var_p = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = momentum_of_index(wf.spec, j) - mean_p;
    var_p += std::norm(phi[j]) * d * d;
  }
  var_p /= pweight;

  // Symmetrized covariance: Re<q p> - <q><p>, with (p psi) evaluated by the
  // spectral derivative.
  for (std::size_t j = 0; j < n; ++j) phi[j] *= momentum_of_index(wf.spec, j);
  fftw_plan bwd = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(phi), as_fftw(phi),
                                   FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);
  const double inv_n = 1.0 / static_cast<double>(n);
  std::complex<double> qp{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    qp += std::conj(wf.amp[j]) * wf.spec.x(j) * (phi[j] * inv_n);
  }
  const double cov = qp.real() / weight - mean_q * mean_p;

  QuadratureStats out;
  out.mean_q = mean_q;
  out.mean_p = mean_p;
  out.var_q = var_q;
  out.var_p = var_p;
  out.cov_qp = cov;
  return out;
}

double fidelity(const GridWavefunction& a, const GridWavefunction& b) {
  check_sized(a);
  check_sized(b);
  if (!(a.spec == b.spec)) {
    throw std::invalid_argument("fidelity requires both states on the same grid");
  }
  double na2 = 0.0;
  double nb2 = 0.0;
  std::complex<double> overlap{0.0, 0.0};
  for (std::size_t j = 0; j < a.spec.n; ++j) {
    na2 += std::norm(a.amp[j]);
    nb2 += std::norm(b.amp[j]);
    overlap += std::conj(a.amp[j]) * b.amp[j];
  }
  if (na2 <= 0.0 || nb2 <= 0.0) {
    throw std::domain_error("cannot compute fidelity with a zero state");
  }
  return std::norm(overlap) / (na2 * nb2);
}

double fidelity(const GridWavefunction& wf, const EvolvedState& state) {
  return fidelity(wf, render_evolved_state(wf.spec, state));
}

struct SplitStepEvolver::Impl {
  GridWavefunction psi;
  FrequencyProfile profile;
  double dt = 0.0;
  double t = 0.0;
  double norm0 = 1.0;
  double drift = 0.0;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::vector<std::complex<double>> kinetic;
  double kinetic_h = std::numeric_limits<double>::quiet_NaN();

  Impl(GridWavefunction psi0, FrequencyProfile prof, double step, double t0)
      : psi(std::move(psi0)), profile(std::move(prof)), dt(step), t(t0) {
    check_sized(psi);
    require(std::isfinite(dt) && dt > 0.0, "time step must be positive");
    require(std::isfinite(t0), "start time must be finite");

    // Resolution guard: across one step the potential phase between adjacent
    // grid points must stay well inside a period or the sampled phase aliases.
    const double x_edge = std::max(std::abs(psi.spec.x_min), std::abs(psi.spec.x_max));
    const double wmax = profile.max_omega();
    const double sharpness = dt * wmax * wmax * x_edge * x_edge;
    if (!(sharpness < 0.25 * kPi)) {
      std::ostringstream msg;
      msg << "dt * max(Omega)^2 * max|x|^2 = " << sharpness << " exceeds pi/4 = "
          << 0.25 * kPi << "; shrink the time step or the box";
      throw std::invalid_argument(msg.str());
    }

    const int n = static_cast<int>(psi.spec.n);
    fwd = fftw_plan_dft_1d(n, as_fftw(psi.amp), as_fftw(psi.amp), FFTW_FORWARD,
                           FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, as_fftw(psi.amp), as_fftw(psi.amp), FFTW_BACKWARD,
                           FFTW_ESTIMATE);
    norm0 = psi.norm();
  }

  ~Impl() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }

  void ensure_kinetic(double h) {
    if (kinetic.size() == psi.spec.n && h == kinetic_h) return;
    kinetic.resize(psi.spec.n);
    for (std::size_t j = 0; j < psi.spec.n; ++j) {
      const double k = momentum_of_index(psi.spec, j);
      kinetic[j] = std::polar(1.0, -0.5 * k * k * h);
    }
    kinetic_h = h;
  }

  void step_once(double a, double h) {
    const double w2 = profile.omega_squared(a + 0.5 * h);
    const double c = 0.25 * w2 * h;
    const double inv_n = 1.0 / static_cast<double>(psi.spec.n);

    apply_quadratic_phase(psi, c, 1.0);
    fftw_execute(fwd);
    for (std::size_t j = 0; j < psi.spec.n; ++j) psi.amp[j] *= kinetic[j];
    fftw_execute(bwd);
    apply_quadratic_phase(psi, c, inv_n);  // the 1/n undoes the unnormalized pair

    const double edge =
        std::max(std::abs(psi.amp.front()), std::abs(psi.amp.back()));
    if (edge > kEdgeLeakTol) {
      std::ostringstream msg;
      msg << "wavepacket reached the grid edge at t = " << a + h
          << " (|psi| = " << edge << " there); the box is too small for this state";
      throw std::runtime_error(msg.str());
    }
    drift = std::max(drift, std::abs(psi.norm() - norm0));
  }

  void advance_segment(double u, double v) {
    if (!(v - u > 1e-13 * std::max(1.0, std::abs(v)))) return;
    const auto m = std::max<long long>(1, std::llround((v - u) / dt));
    const double h = (v - u) / static_cast<double>(m);
    ensure_kinetic(h);
    for (long long i = 0; i < m; ++i) step_once(u + static_cast<double>(i) * h, h);
  }

  void advance_to(double target) {
    require(std::isfinite(target), "target time must be finite");
    if (target < t - 1e-12 * std::max(1.0, std::abs(t))) {
      std::ostringstream msg;
      msg << "cannot propagate backwards from t = " << t << " to t = " << target;
      throw std::invalid_argument(msg.str());
    }
    if (target <= t) return;

    double u = t;
    for (double b : profile.breakpoints()) {
      if (b > u && b < target) {
        advance_segment(u, b);
        u = b;
      }
    }
    advance_segment(u, target);
    t = target;
  }
};

SplitStepEvolver::SplitStepEvolver(GridWavefunction psi0, FrequencyProfile profile,
                                   double dt, double t0)
    : impl_(std::make_unique<Impl>(std::move(psi0), std::move(profile), dt, t0)) {}

SplitStepEvolver::~SplitStepEvolver() = default;
SplitStepEvolver::SplitStepEvolver(SplitStepEvolver&&) noexcept = default;
SplitStepEvolver& SplitStepEvolver::operator=(SplitStepEvolver&&) noexcept = default;

void SplitStepEvolver::advance_to(double t) { impl_->advance_to(t); }
double SplitStepEvolver::time() const { return impl_->t; }
const GridWavefunction& SplitStepEvolver::state() const { return impl_->psi; }
double SplitStepEvolver::norm_drift() const { return impl_->drift; }

GridWavefunction split_step_evolve(const GridSpec& spec, std::complex<double> alpha,
                                   const FrequencyProfile& profile, double t0,
                                   double t1, double dt) {
  SplitStepEvolver evolver(init_coherent(spec, alpha), profile, dt, t0);
  evolver.advance_to(t1);
  return evolver.state();
}

}  // namespace tdho
