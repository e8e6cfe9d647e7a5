#pragma once

// Simulated sigma-type measurements on the dephased |+> probe, inversion
// estimation of the ohmicity s, and empirical Cramer-Rao checks.
//
// Randomness: every record draws from std::mt19937_64 (bit-exact across
// standard libraries) seeded with the record's seed. Uniforms are
// (word >> 11) * 2^-53 and each shot is "+" when the uniform is below p_+,
// so n_plus is an exact Binomial(M, p_+) draw without relying on the
// implementation-defined std::binomial_distribution. Trial i of an
// experiment with master seed S uses derive_seed(S, i), a SplitMix64 hash of
// S + (i + 1) * 0x9E3779B97F4A7C15.

#include <cstdint>
#include <optional>
#include <vector>

#include "dephaseprobe/metrology.hpp"

namespace dephaseprobe::montecarlo {

struct MeasurementRecord {
  std::int64_t M = 0;
  std::int64_t n_plus = 0;
  double tau = 0.0;
  metrology::MeasurementAxis axis = metrology::MeasurementAxis::sigma_x();
  std::uint64_t seed = 0;

  /// Throws InvariantError unless M >= 1 and 0 <= n_plus <= M.
  void validate() const;
};

enum class Infeasibility { None, NonPositiveSignal, NoRootInRange };

struct Estimate {
  std::optional<double> s_hat;
  bool multiple_roots = false;
  Infeasibility reason = Infeasibility::None;

  bool feasible() const { return s_hat.has_value(); }
};

struct EstimationResult {
  double s_hat = 0.0;               ///< mean estimate over feasible trials
  std::int64_t n_trials = 0;
  double empirical_variance = 0.0;  ///< unbiased sample variance over feasible trials
  double cr_bound = 0.0;            ///< 1 / (M F_s)
  double q_cr_bound = 0.0;          ///< 1 / (M H_s)
  double saturation_ratio = 0.0;    ///< empirical_variance / cr_bound
  std::int64_t failures = 0;
  std::int64_t multiple_root_trials = 0;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial);

/// n_plus ~ Binomial(M, (1 + b1 e^{-gamma_s(tau)}) / 2), deterministic in seed.
MeasurementRecord sample_outcomes(double s_true, double tau, std::int64_t M,
                                  const metrology::MeasurementAxis& axis, std::uint64_t seed);

/// Solves gamma_s(tau) = -log((2 p_hat - 1) / b1) for s in [s_lo, s_hi]: sign
/// changes on a 64-point grid are bisected to 1e-10; with several roots the
/// one with the smallest residual wins and multiple_roots is set.
Estimate estimate_s_from_probability(double p_hat, double b1, double tau, double s_lo, double s_hi);

Estimate estimate_s(const MeasurementRecord& record, double s_lo, double s_hi);

struct ExperimentConfig {
  double s_true = 1.5;
  double tau = 1.0;
  std::int64_t M = 10000;
  std::int64_t n_trials = 1000;
  metrology::MeasurementAxis axis = metrology::MeasurementAxis::sigma_x();
  std::uint64_t seed = 42;
  double s_lo = 0.1;
  double s_hi = 3.0;
};

/// Runs n_trials independent records (trial i seeded with derive_seed(seed, i))
/// and compares the spread of the estimates with both Cramer-Rao bounds.
/// Throws DomainError when more than 20% of the trials are infeasible.
EstimationResult cr_experiment(const ExperimentConfig& config);

}  // namespace dephaseprobe::montecarlo
