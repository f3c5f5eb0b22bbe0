#include "tdho/frequency_profile.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tdho {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

FrequencyProfile FrequencyProfile::smoothed_step(double omega1, double omega2,
                                                 double epsilon, double t_step,
                                                 bool alt_omega_form) {
  require(omega1 > 0.0 && omega2 > 0.0,
          "smoothed step: omega1 and omega2 must be positive");
  require(epsilon > 0.0, "smoothed step: epsilon must be positive");
  if (alt_omega_form) {
    // The multiplicative form's plateaus are omega1(1 + D/4) and
    // omega1(1 + 3D/4); for a large downward step they can cross zero,
    // which is not a valid frequency profile.
    const double d = omega2 - omega1;
    require(omega1 * (1.0 + 0.25 * d) > 0.0 &&
                omega1 * (1.0 + 0.75 * d) > 0.0,
            "smoothed step: alternate form must stay positive");
  }
  FrequencyProfile p;
  p.kind_ = Kind::SmoothedStep;
  p.omega1_ = omega1;
  p.omega2_ = omega2;
  p.epsilon_ = epsilon;
  p.t_step_ = t_step;
  p.alt_omega_form_ = alt_omega_form;
  return p;
}

FrequencyProfile FrequencyProfile::ideal_step(double omega1, double omega2,
                                              double t_step) {
  require(omega1 > 0.0 && omega2 > 0.0,
          "ideal step: omega1 and omega2 must be positive");
  FrequencyProfile p;
  p.kind_ = Kind::IdealStep;
  p.omega1_ = omega1;
  p.omega2_ = omega2;
  p.t_step_ = t_step;
  return p;
}

FrequencyProfile FrequencyProfile::constant(double omega0) {
  require(omega0 > 0.0, "constant profile: omega0 must be positive");
  FrequencyProfile p;
  p.kind_ = Kind::Constant;
  p.omega0_ = omega0;
  return p;
}

FrequencyProfile FrequencyProfile::tabulated(std::vector<double> times,
                                             std::vector<double> values) {
  require(times.size() == values.size(),
          "tabulated profile: times and values must have equal length");
  require(times.size() >= 2, "tabulated profile: need at least two samples");
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    require(times[i] < times[i + 1],
            "tabulated profile: times must be strictly increasing");
  }
  for (double w : values) {
    require(w > 0.0, "tabulated profile: values must be positive");
  }
  FrequencyProfile p;
  p.kind_ = Kind::Tabulated;
  p.tab_t_ = std::move(times);
  p.tab_w_ = std::move(values);
  return p;
}

double FrequencyProfile::omega(double t, Side side) const {
  switch (kind_) {
    case Kind::Constant:
      return omega0_;
    case Kind::IdealStep:
      if (t < t_step_) return omega1_;
      if (t > t_step_) return omega2_;
      return side == Side::Left ? omega1_ : omega2_;
    case Kind::SmoothedStep: {
      const double th = std::tanh(epsilon_ * (t - t_step_));
      const double d = omega2_ - omega1_;
      if (alt_omega_form_) {
        return omega1_ * (1.0 + 0.5 * d * (1.0 + 0.5 * th));
      }
      return omega1_ + 0.5 * d * (1.0 + th);
    }
    case Kind::Tabulated: {
      if (t < tab_t_.front() || t > tab_t_.back()) {
        std::ostringstream os;
        os << "tabulated profile: t = " << t << " outside sampled range ["
           << tab_t_.front() << ", " << tab_t_.back() << "]";
        throw std::domain_error(os.str());
      }
      const auto it = std::upper_bound(tab_t_.begin(), tab_t_.end(), t);
      if (it == tab_t_.end()) return tab_w_.back();
      const std::size_t hi = static_cast<std::size_t>(it - tab_t_.begin());
      if (hi == 0) return tab_w_.front();
      const std::size_t lo = hi - 1;
      const double f = (t - tab_t_[lo]) / (tab_t_[hi] - tab_t_[lo]);
      return tab_w_[lo] + f * (tab_w_[hi] - tab_w_[lo]);
    }
  }
  throw std::logic_error("frequency profile: invalid kind");
}

double FrequencyProfile::max_omega() const {
  switch (kind_) {
    case Kind::Constant:
      return omega0_;
    case Kind::IdealStep:
      return std::max(omega1_, omega2_);
    case Kind::SmoothedStep:
      // tanh is monotone, so the supremum is attained at a plateau.
      if (alt_omega_form_) {
        const double d = omega2_ - omega1_;
        return std::max(omega1_ * (1.0 + 0.25 * d),
                        omega1_ * (1.0 + 0.75 * d));
      }
      return std::max(omega1_, omega2_);
    case Kind::Tabulated:
      return *std::max_element(tab_w_.begin(), tab_w_.end());
  }
  throw std::logic_error("frequency profile: invalid kind");
}

double FrequencyProfile::stiffness_rate() const {
  double r = max_omega();
  if (kind_ == Kind::SmoothedStep) r = std::max(r, epsilon_);
  return r;
}

std::vector<double> FrequencyProfile::breakpoints() const {
  if (kind_ == Kind::IdealStep) return {t_step_};
  return {};
}

double rho_analytic(const FrequencyProfile& profile, double t) {
  if (!profile.is_step()) {
    throw std::invalid_argument("rho_analytic requires a step profile");
  }
  const double ts = profile.step_time();
  const double w = profile.omega(t);
  const double r = (profile.omega1() * profile.omega1()) / (w * w);

  double phi = 0.0;  // integral of Omega from ts to t
  if (profile.kind() == FrequencyProfile::Kind::IdealStep) {
    phi = (t >= ts) ? profile.omega2() * (t - ts) : profile.omega1() * (t - ts);
  } else if (t != ts) {
    const auto f = [&profile](double u) { return profile.omega(u); };
    using quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    // Relative tolerance 1e-12 on an integrand of order max(omega)*|t - ts|
    // keeps the absolute error of the phase comfortably below 1e-10.
    phi = (t > ts) ? quad::integrate(f, ts, t, 15, 1e-12)
                   : -quad::integrate(f, t, ts, 15, 1e-12);
  }

  const double c = std::cos(2.0 * phi);
  return std::sqrt(0.5 * (1.0 + r + (1.0 - r) * c));
}

double effective_frequency(double rho) {
  if (rho <= 0.0) {
    throw std::domain_error("effective_frequency: rho must be positive");
  }
  return 1.0 / (rho * rho);
}

}  // namespace tdho
