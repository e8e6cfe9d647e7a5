#pragma once

// Interaction-time optimisation of the ohmicity QFI.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dephaseprobe::optimal {

inline constexpr double kDefaultHorizon = 35.0;
inline constexpr double kDefaultRelTol = 1e-8;
inline constexpr int kDefaultScanPoints = 512;
inline constexpr double kScanStart = 1e-3;

struct OptimumReport {
  double s = 0.0;
  double tau_star = 0.0;
  double qfi_star = 0.0;
  /// H_s is still rising at the horizon, so tau_star == horizon.
  bool saturating = false;
  double horizon = kDefaultHorizon;
};

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section search for the maximum of a unimodal f on [a, b]; stops
/// when the bracket is narrower than rel_tol * max(|x|, 1e-300).
ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                                      double rel_tol, int max_iterations = 200);

/// Coarse log-spaced scan of H_s(tau) on [1e-3, tau_max] followed by
/// golden-section refinement inside the winning bracket. Saturation is
/// reported when the scan maximum sits in the last 2% of the range and the
/// end slope is above -rel_tol * H.
OptimumReport maximize_qfi_over_time(double s, double tau_max = kDefaultHorizon,
                                     double rel_tol = kDefaultRelTol,
                                     int scan_points = kDefaultScanPoints);

struct CurvePoint {
  double s = 0.0;
  std::optional<OptimumReport> report;
  std::string error;  ///< set when report is empty
};

/// One independent optimisation per s, results in input order. Failures are
/// recorded per point rather than thrown.
std::vector<CurvePoint> optimal_time_curve(const std::vector<double>& s_grid,
                                           double tau_max = kDefaultHorizon);

struct OptimalQfiRow {
  double s = 0.0;
  double qfi_star = 0.0;
  double qsnr_star = 0.0;
  double tau_star = 0.0;
  bool saturating = false;
};

/// Optimised QFI and QSNR s^2 H, sorted by s. Throws the first per-point error.
std::vector<OptimalQfiRow> optimal_qfi_curve(std::vector<double> s_grid,
                                             double tau_max = kDefaultHorizon);

struct TimeJump {
  double s_before = 0.0;
  double s_after = 0.0;
  double tau_before = 0.0;
  double tau_after = 0.0;
};

/// Places where tau_star falls by more than a factor 1/drop_ratio between
/// consecutive s values (curve assumed sorted by s).
std::vector<TimeJump> find_time_jumps(const std::vector<CurvePoint>& curve, double drop_ratio = 0.5);

}  // namespace dephaseprobe::optimal
