#include "tdho/gaussian_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tdho {

namespace {

constexpr double kStandardStartTol = 1e-9;

// Shear coefficient c = ln(rho) * rho * rho' / (1 - rho^2) of the combined
// generator.  Written via log1p and the factored denominator e (rho + 1),
// e = rho - 1, so it stays fully accurate arbitrarily close to the removable
// singularity at rho = 1; the |e| < 1e-8 branch returns the analytic limit
// -rho'/2 outright (the relative error of doing so is below 1e-16 there).
double shear_coefficient(double rho, double rho_dot) {
  const double e = rho - 1.0;
  if (std::abs(e) < 1e-8) return -0.5 * rho_dot;
  return -rho_dot * rho * std::log1p(e) / (e * (rho + 1.0));
}

SymplecticMatrix mat2_exp(const SymplecticMatrix& a) {
  // Scaling and squaring with a truncated Taylor series; plenty for the
  // well-conditioned 2x2 generators used here.
  double norm = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) norm = std::max(norm, std::abs(a.m[i][j]));

  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }

  SymplecticMatrix s;  // scaled input
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s.m[i][j] = a.m[i][j] * scale;

  SymplecticMatrix result = SymplecticMatrix::identity();
  SymplecticMatrix term = SymplecticMatrix::identity();
  for (int k = 1; k <= 24; ++k) {
    term = term * s;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) term.m[i][j] /= static_cast<double>(k);
    double tnorm = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        result.m[i][j] += term.m[i][j];
        tnorm = std::max(tnorm, std::abs(term.m[i][j]));
      }
    if (tnorm < 1e-20) break;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

void require_rho_positive(double rho, const char* who) {
  if (!(rho > 0.0)) {
    std::ostringstream os;
    os << who << ": rho must be positive";
    throw std::domain_error(os.str());
  }
}

}  // namespace

double QuadratureStats::dq() const { return std::sqrt(var_q); }
double QuadratureStats::dp() const { return std::sqrt(var_p); }
double QuadratureStats::uncertainty_product() const {
  return std::sqrt(var_q * var_p);
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& o) const {
  SymplecticMatrix r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
  return r;
}

double SymplecticMatrix::max_abs_diff(const SymplecticMatrix& o) const {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, std::abs(m[i][j] - o.m[i][j]));
  return d;
}

EvolvedState evolve(CoherentLabel alpha0, const ErmakovSolution& sol,
                    double t) {
  EvolvedState st;
  st.alpha0 = alpha0;
  st.t = t;
  st.theta = sol.theta_at(t);
  st.rho = sol.rho_at(t);
  st.rho_dot = sol.rho_dot_at(t);
  st.nonstandard_initial =
      std::abs(sol.rho_samples().front() - 1.0) > kStandardStartTol ||
      std::abs(sol.rho_dot_samples().front()) > kStandardStartTol;
  return st;
}

std::pair<double, double> expectations(const EvolvedState& state) {
  const Complex a = state.label();
  const double re = a.real();
  const double im = a.imag();
  const double root2 = std::sqrt(2.0);
  const double mean_q = root2 * state.rho * re;
  const double mean_p = root2 * (state.rho_dot * re + im / state.rho);
  return {mean_q, mean_p};
}

QuadratureStats uncertainties(const EvolvedState& state) {
  const auto [mq, mp] = expectations(state);
  const double rho = state.rho;
  const double rd = state.rho_dot;
  QuadratureStats s;
  s.mean_q = mq;
  s.mean_p = mp;
  s.var_q = 0.5 * rho * rho;
  s.var_p = 0.5 * (rd * rd + 1.0 / (rho * rho));
  s.cov_qp = 0.5 * rho * rd;
  return s;
}

QuadratureStats transformed_uncertainties(const EvolvedState& state) {
  // Push the (q, p) statistics through the linear map
  //   Q = q / rho,  P = rho p - rho' q,
  // i.e. J = [[1/rho, 0], [-rho', rho]]:  m -> J m, Sigma -> J Sigma J^T.
  const QuadratureStats s = uncertainties(state);
  const double rho = state.rho;
  const double rd = state.rho_dot;
  QuadratureStats out;
  out.mean_q = s.mean_q / rho;
  out.mean_p = rho * s.mean_p - rd * s.mean_q;
  out.var_q = s.var_q / (rho * rho);
  out.cov_qp = (rho * s.cov_qp - rd * s.var_q) / rho;
  out.var_p = rd * rd * s.var_q - 2.0 * rho * rd * s.cov_qp +
              rho * rho * s.var_p;
  return out;
}

std::optional<double> squeezing_parameter(const EvolvedState& state,
                                          double tol) {
  if (std::abs(state.rho_dot) > tol) return std::nullopt;
  return std::log(state.rho);
}

double lewis_invariant_classical(double q, double p, double rho,
                                 double rho_dot) {
  require_rho_positive(rho, "lewis_invariant_classical");
  const double a = q / rho;
  const double b = rho * p - rho_dot * q;
  return 0.5 * (a * a + b * b);
}

SymplecticMatrix symplectic_of_T_factored(double rho, double rho_dot) {
  require_rho_positive(rho, "symplectic_of_T_factored");
  SymplecticMatrix scale;  // exp(i ln(rho)/2 (qp+pq)) -> diag(1/rho, rho)
  scale.m[0][0] = 1.0 / rho;
  scale.m[0][1] = 0.0;
  scale.m[1][0] = 0.0;
  scale.m[1][1] = rho;
  SymplecticMatrix shear;  // exp(-i rho'/(2 rho) q^2) -> [[1,0],[-rho'/rho,1]]
  shear.m[0][0] = 1.0;
  shear.m[0][1] = 0.0;
  shear.m[1][0] = -rho_dot / rho;
  shear.m[1][1] = 1.0;
  return scale * shear;
}

SymplecticMatrix symplectic_of_T_generator(double rho, double rho_dot) {
  require_rho_positive(rho, "symplectic_of_T_generator");
  const double a = std::log(rho);
  const double c = shear_coefficient(rho, rho_dot);
  SymplecticMatrix gen;
  gen.m[0][0] = -a;
  gen.m[0][1] = 0.0;
  gen.m[1][0] = 2.0 * c;
  gen.m[1][1] = a;
  return mat2_exp(gen);
}

double commutator_check(double rho, double rho_dot) {
  require_rho_positive(rho, "commutator_check");
  if (std::abs(rho - 1.0) < 1e-6) return 0.0;  // identity degenerates to 0 = 0
  const double a = std::log(rho);
  const double c = shear_coefficient(rho, rho_dot);

  SymplecticMatrix A;
  A.m[0][0] = -a;
  A.m[0][1] = 0.0;
  A.m[1][0] = 0.0;
  A.m[1][1] = a;
  SymplecticMatrix B;
  B.m[0][0] = 0.0;
  B.m[0][1] = 0.0;
  B.m[1][0] = 2.0 * c;
  B.m[1][1] = 0.0;

  const SymplecticMatrix ab = A * B;
  const SymplecticMatrix ba = B * A;
  double defect = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double lhs = ab.m[i][j] - ba.m[i][j];
      const double rhs = 2.0 * a * B.m[i][j];
      defect = std::max(defect, std::abs(lhs - rhs));
    }
  return defect;
}

std::vector<RhoExtremum> find_extrema(const ErmakovSolution& sol) {
  const auto& r = sol.rho_samples();
  const auto& v = sol.rho_dot_samples();
  const std::size_t n = sol.size();
  std::vector<RhoExtremum> out;
  if (n < 3) return out;

  const auto refine_at = [&](std::size_t j) {
    // Parabola through (t_{j-1}, r_{j-1}), (t_j, r_j), (t_{j+1}, r_{j+1}).
    const double fm = r[j - 1], f0 = r[j], fp = r[j + 1];
    const double slope = 0.5 * (fp - fm);
    const double curv = fp - 2.0 * f0 + fm;
    RhoExtremum ex;
    if (std::abs(curv) < 1e-300) {
      ex.t = sol.time_at(j);
      ex.rho = f0;
      ex.kind = ExtremumKind::Minimum;
      return ex;
    }
    double d = -slope / curv;  // vertex offset in units of dt
    d = std::clamp(d, -1.0, 1.0);
    ex.t = sol.time_at(j) + d * sol.dt();
    ex.rho = f0 + slope * d + 0.5 * curv * d * d;
    ex.kind = curv < 0.0 ? ExtremumKind::Maximum : ExtremumKind::Minimum;
    return ex;
  };

  std::size_t i = 1;
  while (i + 1 < n) {
    if (v[i] == 0.0 && v[i - 1] * v[i + 1] < 0.0) {
      out.push_back(refine_at(i));
      i += 2;
      continue;
    }
    if (v[i] * v[i + 1] < 0.0) {
      std::size_t j = (std::abs(v[i]) <= std::abs(v[i + 1])) ? i : i + 1;
      if (j == 0) j = 1;
      if (j + 1 >= n) j = n - 2;
      out.push_back(refine_at(j));
      i += 2;
      continue;
    }
    ++i;
  }
  return out;
}

}  // namespace tdho
