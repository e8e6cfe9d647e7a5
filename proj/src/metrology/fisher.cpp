#include <cmath>
#include <string>

#include "dephaseprobe/errors.hpp"
#include "dephaseprobe/metrology.hpp"

namespace dephaseprobe::metrology {

using mathkern::digamma;
using mathkern::gamma_fn;

namespace {

constexpr double kAxisNormTolerance = 1e-12;

QfiPoint make_point(double s, double tau, double T, const dephasing::DephasingOutcome& rate) {
  QfiPoint p;
  p.s = s;
  p.tau = tau;
  p.T = T;
  p.gamma = rate.gamma;
  p.dgamma_ds = rate.dgamma_ds;
  p.qfi = tau == 0.0 ? 0.0 : qfi_from_rate(rate.gamma, rate.dgamma_ds);
  p.qsnr = s * s * p.qfi;
  return p;
}

}  // namespace

MeasurementAxis::MeasurementAxis(double b1, double b2, double b3) : b_{b1, b2, b3} {
  const double norm = std::sqrt(b1 * b1 + b2 * b2 + b3 * b3);
  if (!(std::abs(norm - 1.0) <= kAxisNormTolerance)) {
    throw InvariantError("MeasurementAxis: |b| must be 1, got " + std::to_string(norm));
  }
}

MeasurementAxis MeasurementAxis::from_b1(double b1) {
  if (!(b1 >= -1.0 && b1 <= 1.0)) throw InvariantError("MeasurementAxis: b1 must lie in [-1, 1]");
  return {b1, std::sqrt((1.0 - b1) * (1.0 + b1)), 0.0};
}

double qfi_qubit_closed_form(double C0, double C_lambda, double Omega, double dgamma_dlambda) {
  if (!(C0 > 0.0 && C0 <= 1.0)) throw DomainError("qfi_qubit_closed_form: C0 must lie in (0, 1]");
  if (!(C_lambda > 0.0 && C_lambda < C0)) {
    throw DomainError("qfi_qubit_closed_form: C_lambda must lie in (0, C0)");
  }
  if (!(Omega > 0.0)) throw DomainError("qfi_qubit_closed_form: Omega must be > 0");
  if (dgamma_dlambda == 0.0) return 0.0;
  const double omega2 = Omega * Omega;
  const double c0 = C0 * C0;
  const double c = C_lambda * C_lambda;
  return omega2 * omega2 * dgamma_dlambda * dgamma_dlambda * c0 * c / ((C0 - C_lambda) * (C0 + C_lambda));
}

double qfi_from_rate(double gamma, double dgamma) {
  if (gamma == 0.0) return 0.0;
  const double denominator = std::expm1(2.0 * gamma);
  if (std::isinf(denominator)) return 0.0;
  return dgamma * dgamma / denominator;
}

QfiPoint qfi_ohmicity(double s, double tau) {
  return make_point(s, tau, 0.0, dephasing::gamma_zero_T(s, tau));
}

double qfi_short_time_coeff(double s) {
  if (!(s > 0.0)) throw DomainError("qfi_short_time_coeff: s must be > 0");
  const double psi = digamma(1.0 + s);
  return 0.25 * gamma_fn(1.0 + s) * psi * psi;
}

double qfi_short_time_coeff_literal(double s) {
  if (!(s > 0.0)) throw DomainError("qfi_short_time_coeff_literal: s must be > 0");
  if (std::abs(s - 1.0) < 1e-6) return qfi_short_time_coeff(s);
  const double e = s - 1.0;
  // Gamma and psi at s - 1 (possibly negative) through one step of recurrence.
  const double gamma_sm1 = gamma_fn(s) / e;
  const double psi_sm1 = digamma(s) - 1.0 / e;
  const double inner = 2.0 * s - 1.0 + s * e * psi_sm1;
  return gamma_sm1 / (4.0 * s * e) * inner * inner;
}

double qfi_asymptote(double s) {
  if (!(s > 0.0)) throw DomainError("qfi_asymptote: s must be > 0");
  if (s <= 1.0) return 0.0;
  const double g = gamma_fn(s - 1.0);
  const double dg = g * digamma(s - 1.0);
  return dg * dg / std::expm1(2.0 * g);
}

OutcomeProbabilities measurement_probabilities(double gamma, const MeasurementAxis& axis) {
  if (!(gamma >= 0.0)) throw DomainError("measurement_probabilities: gamma must be >= 0");
  const double signal = axis.b1() * std::exp(-gamma);
  return {0.5 * (1.0 + signal), 0.5 * (1.0 - signal)};
}

double fisher_info_projective(double s, double tau, const MeasurementAxis& axis) {
  const dephasing::DephasingOutcome rate = dephasing::gamma_zero_T(s, tau);
  if (tau == 0.0) return 0.0;
  const double b1 = axis.b1();
  if (b1 == 0.0) return 0.0;
  // b1^2 (dg)^2 e^{-2g} / (1 - b1^2 e^{-2g}) = b1^2 (dg)^2 / (expm1(2g) + 1 - b1^2)
  const double denominator = std::expm1(2.0 * rate.gamma) + (1.0 - b1) * (1.0 + b1);
  if (std::isinf(denominator)) return 0.0;
  return b1 * b1 * rate.dgamma_ds * rate.dgamma_ds / denominator;
}

QfiPoint qfi_low_T(double s, double tau, double T) {
  return make_point(s, tau, T, dephasing::gamma_low_T_quadratic(s, tau, T));
}

QfiPoint qfi_finite_T_exact(double s, double tau, double T) {
  return make_point(s, tau, T, dephasing::gamma_finite_T_exact(s, tau, T));
}

double excess_qfi(double s, double tau, double T) {
  if (!(T > 0.0)) throw DomainError("excess_qfi: T must be > 0");
  return qfi_low_T(s, tau, T).qfi - qfi_ohmicity(s, tau).qfi;
}

double qfi_high_T(double s, double tau, double T) {
  if (!(T >= 10.0)) throw DomainError("qfi_high_T: the high-temperature form needs T >= 10");
  const dephasing::DephasingOutcome rate = dephasing::gamma_high_T(s, tau, T);
  if (tau == 0.0) return 0.0;
  return qfi_from_rate(rate.gamma, rate.dgamma_ds);
}

}  // namespace dephaseprobe::metrology
