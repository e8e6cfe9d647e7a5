#include <algorithm>
#include <cmath>
#include <string>

#include "dephaseprobe/errors.hpp"
#include "dephaseprobe/metrology.hpp"
#include "dephaseprobe/optimal.hpp"
#include "dephaseprobe/parallel.hpp"

namespace dephaseprobe::optimal {

namespace {

constexpr double kInvPhi = 0.61803398874989484820458683436563812;  // 1 / golden ratio
constexpr double kSaturationFraction = 0.02;

double qfi_at(double s, double tau) { return metrology::qfi_ohmicity(s, tau).qfi; }

}  // namespace

ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                      double rel_tol, int max_iterations) {
  if (!(a < b)) throw DomainError("golden_section_maximize: need a < b");
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int it = 0;
  for (; it < max_iterations; ++it) {
    const double scale = std::max(std::abs(0.5 * (a + b)), 1e-300);
    if (b - a <= rel_tol * scale) break;
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? ScalarOptimum{x1, f1, it} : ScalarOptimum{x2, f2, it};
}

OptimumReport maximize_qfi_over_time(double s, double tau_max, double rel_tol, int scan_points) {
  if (!(s > 0.0)) throw DomainError("maximize_qfi_over_time: s must be > 0");
  if (!(tau_max > kScanStart)) throw DomainError("maximize_qfi_over_time: tau_max must exceed 1e-3");
  if (!(rel_tol > 0.0)) throw DomainError("maximize_qfi_over_time: rel_tol must be > 0");
  if (scan_points < 3) throw DomainError("maximize_qfi_over_time: need at least 3 scan points");

  const auto n = static_cast<std::size_t>(scan_points);
  std::vector<double> taus(n);
  std::vector<double> values(n);
  const double log_lo = std::log(kScanStart);
  const double log_hi = std::log(tau_max);
  for (std::size_t i = 0; i < n; ++i) {
    taus[i] = (i + 1 == n) ? tau_max
                           : std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                                   static_cast<double>(n - 1));
    values[i] = qfi_at(s, taus[i]);
  }
  const auto best = static_cast<std::size_t>(
      std::distance(values.begin(), std::max_element(values.begin(), values.end())));

  OptimumReport report;
  report.s = s;
  report.horizon = tau_max;

  const double tail_start = tau_max - kSaturationFraction * (tau_max - kScanStart);
  if (taus[best] >= tail_start) {
    const double h = 1e-4 * tau_max;
    const double h_end = values[n - 1];
    const double slope = (h_end - qfi_at(s, tau_max - h)) / h;
    if (slope > -rel_tol * h_end) {
      report.saturating = true;
      report.tau_star = tau_max;
      report.qfi_star = h_end;
      return report;
    }
  }

  const double lo = taus[best == 0 ? 0 : best - 1];
  const double hi = taus[std::min(best + 1, n - 1)];
  const ScalarOptimum refined =
      golden_section_maximize([s](double tau) { return qfi_at(s, tau); }, lo, hi, rel_tol);
  if (refined.value >= values[best]) {
    report.tau_star = refined.x;
    report.qfi_star = refined.value;
  } else {
    report.tau_star = taus[best];
    report.qfi_star = values[best];
  }
  return report;
}

std::vector<CurvePoint> optimal_time_curve(const std::vector<double>& s_grid, double tau_max) {
  std::vector<CurvePoint> out(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) {
    out[i].s = s_grid[i];
    try {
      out[i].report = maximize_qfi_over_time(s_grid[i], tau_max);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

std::vector<OptimalQfiRow> optimal_qfi_curve(std::vector<double> s_grid, double tau_max) {
  std::sort(s_grid.begin(), s_grid.end());
  const std::vector<CurvePoint> curve = optimal_time_curve(s_grid, tau_max);
  std::vector<OptimalQfiRow> rows;
  rows.reserve(curve.size());
  for (const CurvePoint& point : curve) {
    if (!point.report) {
      throw DomainError("optimal_qfi_curve: s = " + std::to_string(point.s) + ": " + point.error);
    }
    const OptimumReport& r = *point.report;
    rows.push_back({r.s, r.qfi_star, r.s * r.s * r.qfi_star, r.tau_star, r.saturating});
  }
  return rows;
}

std::vector<TimeJump> find_time_jumps(const std::vector<CurvePoint>& curve, double drop_ratio) {
  std::vector<TimeJump> jumps;
  const OptimumReport* previous = nullptr;
  for (const CurvePoint& point : curve) {
    if (!point.report) continue;
    const OptimumReport& current = *point.report;
    if (previous && current.tau_star < drop_ratio * previous->tau_star) {
      jumps.push_back({previous->s, current.s, previous->tau_star, current.tau_star});
    }
    previous = &current;
  }
  return jumps;
}

}  // namespace dephaseprobe::optimal
