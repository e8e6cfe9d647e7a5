#include <cmath>
#include <string>

#include "dephaseprobe/dephasing.hpp"
#include "dephaseprobe/errors.hpp"

namespace dephaseprobe::dephasing {

using mathkern::digamma;
using mathkern::gamma_fn;

namespace {

constexpr double kOhmicBranchWidth = 1e-12;
constexpr double kDerivativeSwitchWidth = 1e-4;
constexpr double kDerivativeStep = 1e-5;

void check_s_tau(double s, double tau, const char* where) {
  if (!(s > 0.0)) throw DomainError(std::string(where) + ": s must be > 0");
  if (!(tau >= 0.0)) throw DomainError(std::string(where) + ": tau must be >= 0");
}

void check_T(double T, const char* where) {
  if (!(T > 0.0)) throw DomainError(std::string(where) + ": T must be > 0");
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Pieces of the closed form written with eps = s - 1:
//   gamma_s(tau) = Gamma(s) * B(eps) / eps,
//   B(eps) = 1 - cos(eps a) exp(-eps L),  a = atan(tau),  L = log(1 + tau^2) / 2.
// Gamma(s - 1) = Gamma(s) / (s - 1) keeps Gamma on the positive axis for s < 1,
// and B is split so that B / eps stays accurate as eps -> 0.
struct ClosedFormTerms {
  double a;
  double L;
  double eps;
  double bracket;

  ClosedFormTerms(double s, double tau)
      : a(std::atan(tau)), L(0.5 * std::log1p(tau * tau)), eps(s - 1.0) {
    const double half = 0.5 * eps * a;
    bracket = -std::expm1(-eps * L) * std::cos(eps * a) + 2.0 * std::sin(half) * std::sin(half);
  }

  double bracket_derivative() const {
    return std::exp(-eps * L) * (a * std::sin(eps * a) + L * std::cos(eps * a));
  }
};

double gamma_closed_form(double s, double tau) {
  if (tau == 0.0) return 0.0;
  if (std::abs(s - 1.0) <= kOhmicBranchWidth) return 0.5 * std::log1p(tau * tau);
  const ClosedFormTerms t(s, tau);
  return gamma_fn(s) * (t.bracket / t.eps);
}

// Integrand (1 - cos(x tau)) x^{s-2} e^{-x} rewritten as
// (tau^2 / 2) sinc^2(x tau / 2) x^s e^{-x} so that small x never forms 0 * inf.
double zero_T_integrand(double x, double s, double tau) {
  const double c = sinc(0.5 * x * tau);
  return 0.5 * tau * tau * c * c * std::pow(x, s) * std::exp(-x);
}

double finite_T_integrand(double x, double s, double tau, double T) {
  const double y = x / (2.0 * T);
  const double y_coth_y = (y == 0.0) ? 1.0 : y / std::tanh(y);
  // x^s coth(x / 2T) = 2T x^{s-1} (y coth y)
  const double c = sinc(0.5 * x * tau);
  return 0.5 * tau * tau * c * c * 2.0 * T * std::pow(x, s - 1.0) * y_coth_y * std::exp(-x);
}

double finite_T_quadrature(double s, double tau, double T, const mathkern::QuadratureSpec& spec) {
  if (tau == 0.0) return 0.0;
  return mathkern::integrate_semi_infinite(
      [&](double x) { return finite_T_integrand(x, s, tau, T); }, spec);
}

}  // namespace

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::ExactClosedForm: return "exact_closed_form";
    case RegimeTag::ExactQuadrature: return "exact_quadrature";
    case RegimeTag::LowTApprox: return "low_T_approx";
    case RegimeTag::LowTQuadratic: return "low_T_quadratic";
    case RegimeTag::HighTApprox: return "high_T_approx";
  }
  return "unknown";
}

DephasingOutcome gamma_zero_T(double s, double tau) {
  check_s_tau(s, tau, "gamma_zero_T");
  return {gamma_closed_form(s, tau), dgamma_ds_zero_T(s, tau), RegimeTag::ExactClosedForm};
}

double dgamma_ds_zero_T(double s, double tau) {
  check_s_tau(s, tau, "dgamma_ds_zero_T");
  if (tau == 0.0) return 0.0;
  if (std::abs(s - 1.0) < kDerivativeSwitchWidth) {
    const double h = kDerivativeStep;
    return (gamma_closed_form(s + h, tau) - gamma_closed_form(s - h, tau)) / (2.0 * h);
  }
  const ClosedFormTerms t(s, tau);
  const double ratio = t.bracket / t.eps;
  const double ratio_derivative = (t.eps * t.bracket_derivative() - t.bracket) / (t.eps * t.eps);
  return gamma_fn(s) * (digamma(s) * ratio + ratio_derivative);
}

double gamma_zero_T_oracle(double s, double tau, const mathkern::QuadratureSpec& spec) {
  check_s_tau(s, tau, "gamma_zero_T_oracle");
  if (tau == 0.0) return 0.0;
  return mathkern::integrate_semi_infinite([&](double x) { return zero_T_integrand(x, s, tau); },
                                           spec);
}

double gamma_zero_T_oracle(double s, double tau) {
  return gamma_zero_T_oracle(s, tau, mathkern::quadrature_spec_for(tau));
}

double gamma_zero_T_continued(double sigma, double tau) {
  if (!(sigma > -1.0)) throw DomainError("gamma_zero_T_continued: sigma must be > -1");
  if (!(tau >= 0.0)) throw DomainError("gamma_zero_T_continued: tau must be >= 0");
  if (sigma > 0.0) return gamma_closed_form(sigma, tau);
  if (tau == 0.0) return 0.0;
  // Integrating by parts once:
  //   gamma_sigma = (gamma_{sigma+1} - tau Gamma(sigma) (1+tau^2)^{-sigma/2} sin(sigma a)) / (sigma - 1)
  // with Gamma(sigma) sin(sigma a) = Gamma(sigma + 1) a sinc(sigma a), finite at sigma = 0.
  const double a = std::atan(tau);
  const double sine_term = gamma_fn(sigma + 1.0) * a * sinc(sigma * a) *
                           std::exp(-0.5 * sigma * std::log1p(tau * tau));
  return (gamma_closed_form(sigma + 1.0, tau) - tau * sine_term) / (sigma - 1.0);
}

double gamma_short_time(double s, double tau) {
  check_s_tau(s, tau, "gamma_short_time");
  return 0.5 * tau * tau * gamma_fn(1.0 + s);
}

std::optional<double> gamma_asymptote(double s) {
  if (!(s > 0.0)) throw DomainError("gamma_asymptote: s must be > 0");
  if (s <= 1.0) return std::nullopt;
  return gamma_fn(s - 1.0);
}

DephasingOutcome gamma_finite_T_exact(double s, double tau, double T,
                                      const mathkern::QuadratureSpec& spec) {
  check_s_tau(s, tau, "gamma_finite_T_exact");
  check_T(T, "gamma_finite_T_exact");
  const double gamma = finite_T_quadrature(s, tau, T, spec);
  double derivative = 0.0;
  if (tau > 0.0) {
    const double h = kDerivativeStep;
    if (s - h <= 0.0) throw DomainError("gamma_finite_T_exact: s too close to 0 for the derivative");
    mathkern::QuadratureSpec tight = spec;
    tight.relative_tolerance = std::min(spec.relative_tolerance, 1e-13);
    derivative =
        (finite_T_quadrature(s + h, tau, T, tight) - finite_T_quadrature(s - h, tau, T, tight)) /
        (2.0 * h);
  }
  return {gamma, derivative, RegimeTag::ExactQuadrature};
}

DephasingOutcome gamma_finite_T_exact(double s, double tau, double T) {
  return gamma_finite_T_exact(s, tau, T, mathkern::quadrature_spec_for(tau, T));
}

DephasingOutcome gamma_low_T(double s, double tau, double T) {
  check_s_tau(s, tau, "gamma_low_T");
  check_T(T, "gamma_low_T");
  const DephasingOutcome base = gamma_zero_T(s, tau);
  const double log_ratio = std::log1p(T) - std::log(T);  // log((1 + T) / T)
  const double weight = 2.0 * std::exp((1.0 - s) * log_ratio);
  const double scaled_tau = T * tau / (1.0 + T);
  const DephasingOutcome scaled = gamma_zero_T(s, scaled_tau);
  return {base.gamma + weight * scaled.gamma,
          base.dgamma_ds + weight * (scaled.dgamma_ds - log_ratio * scaled.gamma),
          RegimeTag::LowTApprox};
}

DephasingOutcome gamma_low_T_quadratic(double s, double tau, double T) {
  check_s_tau(s, tau, "gamma_low_T_quadratic");
  if (!(T >= 0.0)) throw DomainError("gamma_low_T_quadratic: T must be >= 0");
  const DephasingOutcome base = gamma_zero_T(s, tau);
  if (T == 0.0) return {base.gamma, base.dgamma_ds, RegimeTag::LowTQuadratic};
  const double log_T = std::log(T);
  const double log_1pT = std::log1p(T);
  const double correction =
      std::exp((1.0 + s) * log_T - s * log_1pT) * (1.0 - T) * tau * tau * gamma_fn(1.0 + s);
  const double correction_ds = correction * (log_T - log_1pT + digamma(1.0 + s));
  return {base.gamma + correction, base.dgamma_ds + correction_ds, RegimeTag::LowTQuadratic};
}

DephasingOutcome gamma_high_T(double s, double tau, double T) {
  check_s_tau(s, tau, "gamma_high_T");
  check_T(T, "gamma_high_T");
  // coth(x / 2T) ~ 2T / x lowers the spectral exponent by one.
  const double sigma = s - 1.0;
  const double h = kDerivativeStep;
  if (sigma - h <= -1.0) throw DomainError("gamma_high_T: s too close to 0");
  const double gamma = 2.0 * T * gamma_zero_T_continued(sigma, tau);
  const double derivative = 2.0 * T *
                            (gamma_zero_T_continued(sigma + h, tau) -
                             gamma_zero_T_continued(sigma - h, tau)) /
                            (2.0 * h);
  return {gamma, derivative, RegimeTag::HighTApprox};
}

}  // namespace dephaseprobe::dephasing
