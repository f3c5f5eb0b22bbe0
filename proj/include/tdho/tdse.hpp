#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "tdho/frequency_profile.hpp"
#include "tdho/gaussian_dynamics.hpp"

namespace tdho {

/// Uniform spatial grid on [x_min, x_max) with n points.  The right endpoint
/// is excluded because the discrete Fourier transform treats the domain as
/// periodic; x(n) would alias back onto x(0).
struct GridSpec {
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t n = 2048;

  double length() const { return x_max - x_min; }
  double dx() const { return length() / static_cast<double>(n); }
  double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx(); }

  bool operator==(const GridSpec& other) const {
    return x_min == other.x_min && x_max == other.x_max && n == other.n;
  }
};

/// Discretized wavefunction: complex amplitudes sampled at the grid nodes.
struct GridWavefunction {
  GridSpec spec;
  std::vector<std::complex<double>> amp;

  /// L2 norm, integral approximated by the rectangle rule (exact for
  /// band-limited functions on a periodic grid).
  double norm() const;
};

/// First and second moments of position and momentum computed directly from
/// the sampled amplitudes (momentum moments via the discrete Fourier
/// transform).  Produces the same statistics structure used by the
/// closed-form evolution so the two can be compared field by field.
QuadratureStats moments(const GridWavefunction& wf);

/// Ground-state-width coherent state centered at
/// (q0, p0) = (sqrt(2) Re alpha, sqrt(2) Im alpha).
///
/// Throws std::invalid_argument if n is not a power of two, or if the
/// packet's 6-sigma support [q0 - 6, q0 + 6] sticks out of the box (the
/// periodic wrap-around would silently corrupt every subsequent answer).
GridWavefunction init_coherent(const GridSpec& spec, std::complex<double> alpha);

/// Samples the closed-form evolved state on a grid: squeezed/sheared packet
/// with width set by rho, chirp set by rho_dot/rho, centered on the classical
/// trajectory of the label.  Same power-of-two check as init_coherent; the
/// support clearance scales with the stretched width when rho > 1.
GridWavefunction render_evolved_state(const GridSpec& spec, const EvolvedState& state);

/// |<a|b>|^2 with both states normalized first, so small norm drift in a
/// numerically propagated state does not masquerade as physical overlap loss.
/// Throws std::invalid_argument if the two grids differ.
double fidelity(const GridWavefunction& a, const GridWavefunction& b);

/// Convenience overload: renders the closed-form state on wf's grid and
/// overlaps against it.
double fidelity(const GridWavefunction& wf, const EvolvedState& state);

/// Strang-split Fourier propagator for i d/dt psi = [p^2/2 + Omega(t)^2 x^2/2] psi.
///
/// Each step applies a half-step of the potential phase, a full kinetic step
/// in Fourier space, and the second potential half-step, with Omega^2
/// evaluated at the segment midpoint.  Steps never straddle a breakpoint of
/// the frequency profile: advance_to() splits the requested interval there
/// first, so a discontinuous drive costs no accuracy order.
///
/// Construction throws std::invalid_argument when the step size cannot
/// resolve the dynamics on this box (dt * max(Omega)^2 * max|x|^2 must stay
/// below pi/4) -- beyond that the potential phase wraps between neighboring
/// points and the result is garbage rather than merely inaccurate.
///
/// If probability reaches the box edges (|amp| > 1e-8 at either end) the
/// propagator throws std::runtime_error naming the time: on a periodic grid
/// the packet would re-enter from the other side.
///
/// The norm is never renormalized; its drift is tracked and exposed as a
/// diagnostic via norm_drift().
class SplitStepEvolver {
 public:
  SplitStepEvolver(GridWavefunction psi0, FrequencyProfile profile, double dt,
                   double t0 = 0.0);
  ~SplitStepEvolver();

  SplitStepEvolver(SplitStepEvolver&&) noexcept;
  SplitStepEvolver& operator=(SplitStepEvolver&&) noexcept;
  SplitStepEvolver(const SplitStepEvolver&) = delete;
  SplitStepEvolver& operator=(const SplitStepEvolver&) = delete;

  /// Propagates forward to time t (must not go backwards).
  void advance_to(double t);

  double time() const;
  const GridWavefunction& state() const;

  /// max |norm(t) - norm(t0)| observed so far.
  double norm_drift() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot propagation: initial coherent state alpha at t0, evolved to t1.
GridWavefunction split_step_evolve(const GridSpec& spec, std::complex<double> alpha,
                                   const FrequencyProfile& profile, double t0,
                                   double t1, double dt);

}  // namespace tdho
