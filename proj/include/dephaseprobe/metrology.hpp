#pragma once

// Fisher and quantum Fisher information for dephased probes, with the
// ohmicity-estimation specialisations.

#include <array>

#include "dephaseprobe/dephasing.hpp"

namespace dephaseprobe::metrology {

/// Unit Bloch vector b of the projective measurement P_pm = (I pm b.sigma) / 2.
class MeasurementAxis {
 public:
  /// Throws InvariantError unless |b| = 1 within 1e-12.
  MeasurementAxis(double b1, double b2, double b3);

  /// (b1, sqrt(1 - b1^2), 0); b1 must lie in [-1, 1].
  static MeasurementAxis from_b1(double b1);
  static MeasurementAxis sigma_x() { return {1.0, 0.0, 0.0}; }

  double b1() const { return b_[0]; }
  const std::array<double, 3>& components() const { return b_; }

 private:
  std::array<double, 3> b_;
};

struct QfiPoint {
  double s = 0.0;
  double tau = 0.0;
  double T = 0.0;
  double qfi = 0.0;
  double qsnr = 0.0;  ///< s^2 qfi
  double gamma = 0.0;
  double dgamma_ds = 0.0;
};

struct OutcomeProbabilities {
  double p_plus = 0.5;
  double p_minus = 0.5;
};

/// Omega^4 (d gamma)^2 C0^2 C^2 / (C0^2 - C^2) for a pure qubit preparation.
/// Requires 0 < C_lambda < C0 <= 1; DomainError otherwise.
double qfi_qubit_closed_form(double C0, double C_lambda, double Omega, double dgamma_dlambda);

/// SLD quantum Fisher information from the spectral decomposition of rho:
///   H = sum_{n,k} 2 |<phi_k| d rho |phi_n>|^2 / (rho_n + rho_k),
/// dropping pairs with rho_n + rho_k < 1e-14. drho must be Hermitian and
/// traceless within 1e-10 and match rho's dimension (InvariantError otherwise).
double qfi_spectral(const dephasing::ProbeState& rho, const dephasing::ProbeState::Matrix& drho);

/// (d gamma)^2 / (e^{2 gamma} - 1) for the |+> qubit; 0 when gamma = 0.
double qfi_from_rate(double gamma, double dgamma);

/// QFI for s at zero temperature, H_s(tau). tau = 0 yields 0.
QfiPoint qfi_ohmicity(double s, double tau);

/// Short-time coefficient g_s with H_s(tau) ~ g_s tau^2, in the regular form
/// Gamma(1 + s) psi(1 + s)^2 / 4 (valid for every s > 0).
double qfi_short_time_coeff(double s);

/// The same coefficient written as
/// Gamma(s-1) / (4 s (s-1)) (2s - 1 + s (s-1) psi(s-1))^2,
/// singular-looking at s = 1; falls back to the regular form for |s - 1| < 1e-6.
double qfi_short_time_coeff_literal(double s);

/// H_s(inf): 0 for s <= 1, [Gamma(s-1) psi(s-1)]^2 / (e^{2 Gamma(s-1)} - 1) for s > 1.
double qfi_asymptote(double s);

/// Outcome law of P_pm on the dephased |+> qubit: (1 pm b1 e^{-gamma}) / 2.
OutcomeProbabilities measurement_probabilities(double gamma, const MeasurementAxis& axis);

/// Classical Fisher information of the projective measurement along axis:
/// b1^2 (d gamma)^2 / (e^{2 gamma} - b1^2).
double fisher_info_projective(double s, double tau, const MeasurementAxis& axis);

/// H_s(tau, T) from the quadratic low-temperature rate and its analytic s-derivative.
QfiPoint qfi_low_T(double s, double tau, double T);

/// H_s(tau, T) from the exact quadrature rate; cross-check for qfi_low_T.
QfiPoint qfi_finite_T_exact(double s, double tau, double T);

/// H_s(tau, T) - H_s(tau, 0), with H_s(tau, T) from qfi_low_T.
double excess_qfi(double s, double tau, double T);

/// H_s(tau, T) with the high-temperature rate 2T gamma_{s-1}(tau).
double qfi_high_T(double s, double tau, double T);

}  // namespace dephaseprobe::metrology
