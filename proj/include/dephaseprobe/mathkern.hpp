#pragma once

// Special functions and semi-infinite quadrature shared by every other module.
// Everything here is a pure function of its arguments.

#include <functional>
#include <limits>

namespace dephaseprobe::mathkern {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// ln Gamma(x) for x > 0. Relative error below 1e-13 on (0, 100], including
/// near the zeros at x = 1 and x = 2 where a naive Lanczos sum loses digits.
/// Throws DomainError for x <= 0 or NaN.
double ln_gamma(double x);

/// Gamma(x) = exp(ln_gamma(x)) for x > 0.
double gamma_fn(double x);

/// Digamma psi(x) = Gamma'(x)/Gamma(x) for x > 0, absolute error below 1e-12.
double digamma(double x);

struct QuadratureSpec {
  double relative_tolerance = 1e-10;
  double absolute_tolerance = 1e-14;
  /// Bisections allowed on top of the initial partition.
  int max_subdivisions = 20000;
  /// The integral over [0, inf) is truncated here; the discarded tail is
  /// bounded assuming at least e^{-x} decay and added to the error estimate.
  double upper_cutoff = 50.0;
  /// Initial panels are no wider than this (pi/(2 tau) for oscillatory kernels).
  double max_panel_width = std::numeric_limits<double>::infinity();

  /// Throws InvariantError unless tolerances are positive and upper_cutoff > 0.
  void validate() const;
};

/// Spec for integrands of the form (1 - cos(x tau)) x^a e^{-x} coth(x / 2T):
/// cutoff max(50, 50 T, 10 tau) and panels no wider than pi / (2 tau).
QuadratureSpec quadrature_spec_for(double tau, double temperature = 0.0);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
};

/// Integrates f over [0, inf). f must be finite on (0, upper_cutoff]; integrable
/// endpoint singularities at 0 are handled by a tanh-sinh rule on the panel
/// touching the origin, every other panel uses adaptive Gauss-Kronrod 10/21.
/// Throws ConvergenceError (carrying the estimate and its error) when the
/// subdivision budget runs out or f returns a non-finite value.
QuadratureResult integrate_semi_infinite_detailed(const std::function<double(double)>& f,
                                                  const QuadratureSpec& spec);

double integrate_semi_infinite(const std::function<double(double)>& f, const QuadratureSpec& spec);

}  // namespace dephaseprobe::mathkern
