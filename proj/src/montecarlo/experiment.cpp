#include <cmath>
#include <random>
#include <string>

#include "dephaseprobe/dephasing.hpp"
#include "dephaseprobe/errors.hpp"
#include "dephaseprobe/montecarlo.hpp"
#include "dephaseprobe/parallel.hpp"

namespace dephaseprobe::montecarlo {

namespace {

constexpr int kRootScanPoints = 64;
constexpr double kRootTolerance = 1e-10;
constexpr double kMaxInfeasibleFraction = 0.2;

double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

struct Root {
  double s;
  double residual;
};

}  // namespace

void MeasurementRecord::validate() const {
  if (M < 1) throw InvariantError("MeasurementRecord: M must be >= 1");
  if (n_plus < 0 || n_plus > M) throw InvariantError("MeasurementRecord: n_plus must lie in [0, M]");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(master + (trial + 1) * 0x9E3779B97F4A7C15ULL);
}

MeasurementRecord sample_outcomes(double s_true, double tau, std::int64_t M,
                                  const metrology::MeasurementAxis& axis, std::uint64_t seed) {
  if (M < 1) throw DomainError("sample_outcomes: M must be >= 1");
  const double gamma = dephasing::gamma_zero_T(s_true, tau).gamma;
  const double p_plus = metrology::measurement_probabilities(gamma, axis).p_plus;

  std::mt19937_64 engine(seed);
  std::int64_t n_plus = 0;
  for (std::int64_t shot = 0; shot < M; ++shot) {
    if (unit_uniform(engine) < p_plus) ++n_plus;
  }
  return {M, n_plus, tau, axis, seed};
}

Estimate estimate_s_from_probability(double p_hat, double b1, double tau, double s_lo, double s_hi) {
  if (!(s_lo > 0.0 && s_lo < s_hi)) throw DomainError("estimate_s: need 0 < s_lo < s_hi");
  if (b1 == 0.0) throw DomainError("estimate_s: axis must have b1 != 0");
  if (!(tau >= 0.0)) throw DomainError("estimate_s: tau must be >= 0");

  Estimate out;
  const double signal = (2.0 * p_hat - 1.0) / b1;
  if (!(signal > 0.0)) {
    out.reason = Infeasibility::NonPositiveSignal;
    return out;
  }
  const double target = -std::log(signal);
  const auto residual = [&](double s) { return dephasing::gamma_zero_T(s, tau).gamma - target; };

  std::vector<Root> roots;
  double s_prev = s_lo;
  double r_prev = residual(s_prev);
  if (r_prev == 0.0) roots.push_back({s_prev, 0.0});
  for (int j = 1; j < kRootScanPoints; ++j) {
    const double s_next = (j + 1 == kRootScanPoints)
                              ? s_hi
                              : s_lo + (s_hi - s_lo) * j / static_cast<double>(kRootScanPoints - 1);
    const double r_next = residual(s_next);
    if (r_next == 0.0) {
      roots.push_back({s_next, 0.0});
    } else if ((r_prev < 0.0 && r_next > 0.0) || (r_prev > 0.0 && r_next < 0.0)) {
      double a = s_prev;
      double b = s_next;
      double ra = r_prev;
      while (b - a > kRootTolerance) {
        const double mid = 0.5 * (a + b);
        const double rm = residual(mid);
        if (rm == 0.0) {
          a = b = mid;
          break;
        }
        if ((rm < 0.0) == (ra < 0.0)) {
          a = mid;
          ra = rm;
        } else {
          b = mid;
        }
      }
      const double root = 0.5 * (a + b);
      roots.push_back({root, std::abs(residual(root))});
    }
    s_prev = s_next;
    r_prev = r_next;
  }

  if (roots.empty()) {
    out.reason = Infeasibility::NoRootInRange;
    return out;
  }
  const Root* best = &roots.front();
  for (const Root& r : roots) {
    if (r.residual < best->residual) best = &r;
  }
  out.s_hat = best->s;
  out.multiple_roots = roots.size() > 1;
  return out;
}

Estimate estimate_s(const MeasurementRecord& record, double s_lo, double s_hi) {
  record.validate();
  const double p_hat = static_cast<double>(record.n_plus) / static_cast<double>(record.M);
  return estimate_s_from_probability(p_hat, record.axis.b1(), record.tau, s_lo, s_hi);
}

EstimationResult cr_experiment(const ExperimentConfig& config) {
  if (config.n_trials < 100) throw DomainError("cr_experiment: n_trials must be >= 100");
  if (config.M < 1) throw DomainError("cr_experiment: M must be >= 1");
  if (!(config.tau > 0.0)) throw DomainError("cr_experiment: tau must be > 0");

  const auto n = static_cast<std::size_t>(config.n_trials);
  std::vector<Estimate> estimates(n);
  parallel_for(n, [&](std::size_t i) {
    const MeasurementRecord record = sample_outcomes(config.s_true, config.tau, config.M,
                                                     config.axis, derive_seed(config.seed, i));
    estimates[i] = estimate_s(record, config.s_lo, config.s_hi);
  });

  EstimationResult result;
  result.n_trials = config.n_trials;
  double sum = 0.0;
  std::int64_t feasible = 0;
  for (const Estimate& e : estimates) {
    if (!e.feasible()) {
      ++result.failures;
      continue;
    }
    sum += *e.s_hat;
    ++feasible;
    if (e.multiple_roots) ++result.multiple_root_trials;
  }
  if (static_cast<double>(result.failures) > kMaxInfeasibleFraction * static_cast<double>(n) ||
      feasible < 2) {
    throw DomainError("cr_experiment: " + std::to_string(result.failures) + " of " +
                      std::to_string(n) + " trials infeasible; choose a different tau or M");
  }
  const double mean = sum / static_cast<double>(feasible);
  double squares = 0.0;
  for (const Estimate& e : estimates) {
    if (e.feasible()) squares += (*e.s_hat - mean) * (*e.s_hat - mean);
  }
  result.s_hat = mean;
  result.empirical_variance = squares / static_cast<double>(feasible - 1);

  const double M = static_cast<double>(config.M);
  const double fisher = metrology::fisher_info_projective(config.s_true, config.tau, config.axis);
  const double qfi = metrology::qfi_ohmicity(config.s_true, config.tau).qfi;
  result.cr_bound = 1.0 / (M * fisher);
  result.q_cr_bound = 1.0 / (M * qfi);
  result.saturation_ratio = result.empirical_variance / result.cr_bound;
  return result;
}

}  // namespace dephaseprobe::montecarlo
