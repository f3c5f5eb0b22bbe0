#pragma once

#include "tdho/ermakov.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace tdho {

using Complex = std::complex<double>;

// Label of a coherent state |alpha> of the unit-frequency reference
// oscillator, q0 = sqrt(2) Re alpha, p0 = sqrt(2) Im alpha.
using CoherentLabel = Complex;

// ---------------------------------------------------------------------------
// Sign conventions (frozen; do not change independently of each other).
// The split-step propagator pins every choice below — see the calibration
// tests — and all formulas in this module are mutually consistent with them.
//
//  * A unitary U with a quadratic generator acts on the phase-space column
//    x = (q, p)^T through the matrix M(U) defined by U^dag x U = M(U) x.
//    This map is a homomorphism, M(UV) = M(U) M(V), and for states it means
//    means transform as m -> M m and covariances as Sigma -> M Sigma M^T
//    when |psi> -> U|psi>.
//  * exp(i lam (qp + pq)/2)  ->  diag(e^{-lam}, e^{+lam})
//  * exp(i s q^2)            ->  [[1, 0], [2s, 1]]
//  * The scaling unitary attached to an Ermakov amplitude,
//        T(rho, rho') = exp(i (ln rho)/2 (qp + pq)) exp(-i rho'/(2 rho) q^2),
//    therefore maps to
//        M(T) = diag(1/rho, rho) * [[1, 0], [-rho'/rho, 1]]
//             = [[1/rho, 0], [-rho', rho]].
//  * Equivalently, as a single exponential,
//        M(T) = exp( ln(rho) [[-1, 0], [0, 1]] + 2 c [[0, 0], [1, 0]] ),
//        c = ln(rho) * rho rho' / (1 - rho^2),
//    with the removable limit c -> -rho'/2 as rho -> 1.
//  * The evolved state T^dag |alpha e^{-i theta}> then carries
//        <q> = sqrt(2) rho Re(alpha e^{-i theta}),
//        <p> = sqrt(2) [rho' Re(alpha e^{-i theta})
//                       + Im(alpha e^{-i theta}) / rho],
//        Var q = rho^2 / 2,   Var p = (rho'^2 + 1/rho^2) / 2,
//        Cov(q,p) = rho rho' / 2.
//    In particular dq = rho/sqrt(2) (NOT 1/(rho sqrt(2))): after an upward
//    frequency step, the packet narrows in position at the rho-minima.  The
//    grid propagator confirms this assignment.
//  * Its position wavefunction, up to a global phase, is
//        psi(x) = (pi rho^2)^{-1/4}
//                 exp[ -(x/rho - q0)^2 / 2 + i p0 x / rho
//                      + i (rho'/(2 rho)) x^2 - i p0 q0 / 2 ].
// ---------------------------------------------------------------------------

// Coherent state evolved to time t: the label rotates by the accumulated
// phase theta while (rho, rho') carry the shape.  alpha0 is the label at the
// solution's t0; nonstandard_initial is set when the underlying solution did
// not start from (rho, rho') = (1, 0), in which case the initial state was
// not the plain coherent state |alpha0>.
struct EvolvedState {
  Complex alpha0;
  double theta = 0.0;
  double rho = 1.0;
  double rho_dot = 0.0;
  double t = 0.0;
  bool nonstandard_initial = false;

  Complex label() const {
    return alpha0 * std::exp(Complex(0.0, -theta));
  }
};

// First and second moments of the quadratures q, p.
struct QuadratureStats {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double var_q = 0.0;
  double var_p = 0.0;
  double cov_qp = 0.0;

  double dq() const;
  double dp() const;
  double uncertainty_product() const;  // dq * dp
};

// 2x2 linear map on (q, p); unit determinant for the unitary representations
// produced here.
struct SymplecticMatrix {
  double m[2][2] = {{1.0, 0.0}, {0.0, 1.0}};

  static SymplecticMatrix identity() { return SymplecticMatrix{}; }
  double determinant() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  SymplecticMatrix operator*(const SymplecticMatrix& o) const;
  double max_abs_diff(const SymplecticMatrix& o) const;
};

enum class ExtremumKind { Minimum, Maximum };

struct RhoExtremum {
  double t = 0.0;
  double rho = 0.0;
  ExtremumKind kind = ExtremumKind::Minimum;
};

// State at time t (theta, rho, rho' linearly interpolated from the solution
// grid; throws std::domain_error outside it).
EvolvedState evolve(CoherentLabel alpha0, const ErmakovSolution& sol, double t);

// <q> and <p> of the evolved state.
std::pair<double, double> expectations(const EvolvedState& state);

// Full quadrature statistics of the evolved state.  The uncertainty product
// equals 1/2 exactly when rho' = 0 and exceeds it otherwise.
QuadratureStats uncertainties(const EvolvedState& state);

// Statistics of the invariant-mode quadratures Q = q/rho, P = rho p - rho' q,
// obtained by propagating the (q, p) statistics through that linear map.
// Always a minimum-uncertainty pair: dQ = dP = 1/sqrt(2).
QuadratureStats transformed_uncertainties(const EvolvedState& state);

// ln(rho) when the state sits at a shape extremum (|rho'| <= tol), otherwise
// empty: between extrema the state is sheared, not purely squeezed.
std::optional<double> squeezing_parameter(const EvolvedState& state,
                                          double tol = 1e-6);

// Classical counterpart of the conserved quantity behind the construction:
//   I = [ (q/rho)^2 + (rho p - rho' q)^2 ] / 2.
// Throws std::domain_error for rho <= 0.
double lewis_invariant_classical(double q, double p, double rho,
                                 double rho_dot);

// M(T) built as the explicit product of the scaling and shear factors.
SymplecticMatrix symplectic_of_T_factored(double rho, double rho_dot);

// M(T) built as the matrix exponential of the single combined generator
// (independent route; must agree with the factored product to 1e-10).  The
// shear coefficient's removable singularity at rho = 1 is evaluated by its
// analytic limit.
SymplecticMatrix symplectic_of_T_generator(double rho, double rho_dot);

// Max-abs defect of the commutator identity [A, B] = 2 ln(rho) B satisfied
// by the generator pieces A (scaling) and B (shear) in the 2x2
// representation.  Exact up to rounding; |rho - 1| < 1e-6 is reported as 0
// (both sides vanish with ln rho).
double commutator_check(double rho, double rho_dot);

// Extrema of rho(t): sign changes of rho' refined by a three-point parabola
// through the neighbouring rho samples.  Plateaus (rho' identically 0) are
// not extrema.
std::vector<RhoExtremum> find_extrema(const ErmakovSolution& sol);

}  // namespace tdho
