#pragma once

// Dephasing exponents for an Ohmic-like bosonic bath and the pure-dephasing
// channel acting on a d-level probe.
//
// Units: tau = omega_c t and T (in units of omega_c) are dimensionless; probe
// energies are in units of the qubit splitting.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "dephaseprobe/mathkern.hpp"

namespace dephaseprobe::dephasing {

enum class BathRegime { SubOhmic, Ohmic, SuperOhmic };

struct BathModel {
  double s = 1.0;  ///< ohmicity
  double T = 0.0;  ///< temperature

  void validate() const;
  BathRegime regime() const;
};

/// cos(phi)|e1> + sin(phi)|e2> on a qubit with splitting Omega.
struct QubitPreparation {
  double phi = mathkern::kPi / 4.0;
  double Omega = 1.0;

  void validate() const;
  double initial_coherence() const;
};

class ProbeState {
 public:
  using Matrix = Eigen::MatrixXcd;

  /// Validates Hermiticity (1e-12), unit trace (1e-12), positivity (min
  /// eigenvalue >= -1e-10) and that energies are ascending with size d >= 2.
  ProbeState(std::vector<double> energies, Matrix rho);

  static ProbeState maximally_coherent(std::vector<double> energies);
  static ProbeState equispaced_maximally_coherent(int d, double Omega = 1.0);
  static ProbeState qubit(const QubitPreparation& prep);

  int dimension() const { return static_cast<int>(energies_.size()); }
  const std::vector<double>& energies() const { return energies_; }
  const Matrix& rho() const { return rho_; }

 private:
  struct Unchecked {};
  ProbeState(Unchecked, std::vector<double> energies, Matrix rho)
      : energies_(std::move(energies)), rho_(std::move(rho)) {}

  std::vector<double> energies_;
  Matrix rho_;

  friend ProbeState apply_dephasing(const ProbeState& state, double gamma);
};

enum class RegimeTag { ExactClosedForm, ExactQuadrature, LowTApprox, LowTQuadratic, HighTApprox };

const char* to_string(RegimeTag tag);

struct DephasingOutcome {
  double gamma = 0.0;
  double dgamma_ds = 0.0;
  RegimeTag regime_tag = RegimeTag::ExactClosedForm;
};

// ---- zero temperature -------------------------------------------------------

/// gamma_s(tau) = integral of (1 - cos(x tau)) x^{s-2} e^{-x} over x > 0, in
/// closed form; s = 1 gives (1/2) log(1 + tau^2).
DephasingOutcome gamma_zero_T(double s, double tau);

/// Same integral by quadrature; an independent check on the closed form.
double gamma_zero_T_oracle(double s, double tau, const mathkern::QuadratureSpec& spec);
double gamma_zero_T_oracle(double s, double tau);

/// d gamma_s(tau) / ds. Analytic away from s = 1; central difference with
/// h = 1e-5 when |s - 1| < 1e-4.
double dgamma_ds_zero_T(double s, double tau);

/// The closed form analytically continued to spectral exponents sigma > -1,
/// where the defining integral still converges. Needed by the high-T limit.
double gamma_zero_T_continued(double sigma, double tau);

/// (1/2) tau^2 Gamma(1 + s).
double gamma_short_time(double s, double tau);

/// Gamma(s - 1) for s > 1; std::nullopt (divergent) for s <= 1.
std::optional<double> gamma_asymptote(double s);

// ---- finite temperature -----------------------------------------------------

/// Quadrature of (1 - cos(x tau)) x^{s-2} e^{-x} coth(x / 2T); the s-derivative
/// is a central difference with step 1e-5.
DephasingOutcome gamma_finite_T_exact(double s, double tau, double T,
                                      const mathkern::QuadratureSpec& spec);
DephasingOutcome gamma_finite_T_exact(double s, double tau, double T);

/// coth ~ 1 + 2 e^{-x/T}:  gamma_s(tau) + 2 ((1+T)/T)^{1-s} gamma_s(T tau / (1+T)).
DephasingOutcome gamma_low_T(double s, double tau, double T);

/// gamma_s(tau) + T^{1+s} (1 - T) / (1 + T)^s tau^2 Gamma(1 + s).
DephasingOutcome gamma_low_T_quadratic(double s, double tau, double T);

/// coth(x / 2T) ~ 2T / x:  2T gamma_{s-1}(tau).
DephasingOutcome gamma_high_T(double s, double tau, double T);

// ---- channel ----------------------------------------------------------------

/// rho_nk -> rho_nk exp(-gamma (E_n - E_k)^2).
ProbeState apply_dephasing(const ProbeState& state, double gamma);

/// l1 coherence, sum over n != k of |rho_nk|.
double coherence(const ProbeState& state);

/// (2/d) sum_{j=1}^{d-1} exp(-j^2 gamma Omega^2): residual coherence of the
/// maximally coherent state on d equispaced levels.
double residual_coherence_equispaced(int d, double gamma, double Omega = 1.0);

}  // namespace dephaseprobe::dephasing
