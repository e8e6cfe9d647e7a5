// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dephaseprobe/dephasing.hpp"
#include "dephaseprobe/metrology.hpp"
#include "dephaseprobe/montecarlo.hpp"
#include "dephaseprobe/optimal.hpp"

using namespace dephaseprobe;
using dephasing::ProbeState;
using mathkern::kPi;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4g", v);
  return buffer;
}

Verdict closed_form_vs_quadrature() {
  Verdict v;
  double worst = 0.0;
  for (double s : {0.1, 0.5, 1.0, 1.6, 2.2, 3.0}) {
    for (double tau : {0.1, 1.0, 5.0, 20.0, 35.0}) {
      const double closed = dephasing::gamma_zero_T(s, tau).gamma;
      const double oracle = dephasing::gamma_zero_T_oracle(s, tau);
      worst = std::max(worst, std::abs(closed - oracle) / std::max(closed, 1e-12));
    }
  }
  double continuity = 0.0;
  for (double tau : {0.1, 1.0, 5.0, 20.0, 35.0}) {
    const double at_one = dephasing::gamma_zero_T(1.0, tau).gamma;
    for (double ds : {1e-7, -1e-7}) {
      continuity = std::max(continuity, std::abs(dephasing::gamma_zero_T(1.0 + ds, tau).gamma - at_one));
    }
  }
  v.detail << "max rel dev " << fmt(worst) << ", s=1 continuity " << fmt(continuity);
  v.require(worst <= 1e-8, "closed form vs quadrature");
  v.require(continuity <= 1e-5, "continuity at s=1");
  return v;
}

Verdict ohmic_special_case() {
  Verdict v;
  double worst = 0.0;
  for (double tau : {0.5, 1.0, 5.0, 20.0}) {
    worst = std::max(worst, rel_err(dephasing::gamma_zero_T(1.0, tau).gamma, 0.5 * std::log1p(tau * tau)));
  }
  const double g21 = dephasing::gamma_zero_T(2.0, 1.0).gamma;
  const double g22 = dephasing::gamma_zero_T(2.0, 2.0).gamma;
  v.detail << "s=1 rel dev " << fmt(worst) << ", |g2(1)-0.5| " << fmt(std::abs(g21 - 0.5)) << ", |g2(2)-0.8| "
           << fmt(std::abs(g22 - 0.8));
  v.require(worst <= 4.0 * std::numeric_limits<double>::epsilon(), "s=1 branch");
  v.require(std::abs(g21 - 0.5) <= 1e-12 && std::abs(g22 - 0.8) <= 1e-12, "s=2 reduction");
  return v;
}

Verdict asymptotics() {
  Verdict v;
  for (double s : {0.3, 0.7, 1.0}) v.require(metrology::qfi_asymptote(s) == 0.0, "zero asymptote s=" + fmt(s));
  v.detail << "H(s,1e4)/H_inf:";
  for (double s : {1.6, 2.2, 3.0}) {
    const double ratio = metrology::qfi_ohmicity(s, 1e4).qfi / metrology::qfi_asymptote(s);
    v.detail << " s=" << fmt(s) << " " << fmt(ratio);
    v.require(std::abs(ratio - 1.0) <= 0.01, "1% at s=" + fmt(s));
  }
  return v;
}

Verdict short_time_law() {
  Verdict v;
  double worst_limit = 0.0;
  for (double s : {0.1, 0.5, 1.0, 1.6, 3.0}) {
    worst_limit = std::max(worst_limit, rel_err(metrology::qfi_ohmicity(s, 1e-3).qfi / 1e-6,
                                                metrology::qfi_short_time_coeff(s)));
  }
  double worst_forms = 0.0;
  for (double s : {0.5, 1.0 - 1e-3, 1.0 + 1e-3, 2.0, 3.0}) {
    worst_forms = std::max(worst_forms, rel_err(metrology::qfi_short_time_coeff_literal(s),
                                                 metrology::qfi_short_time_coeff(s)));
  }
  v.detail << "H/tau^2 vs g_s " << fmt(worst_limit) << ", literal vs regular " << fmt(worst_forms);
  v.require(worst_limit <= 0.01, "short-time limit");
  v.require(worst_forms <= 1e-10, "algebraic forms");
  return v;
}

ProbeState::Matrix drho_dgamma(const ProbeState& start, double gamma) {
  ProbeState::Matrix out = start.rho();
  const auto& E = start.energies();
  for (int n = 0; n < start.dimension(); ++n) {
    for (int k = 0; k < start.dimension(); ++k) {
      const double gap = E[static_cast<std::size_t>(n)] - E[static_cast<std::size_t>(k)];
      out(n, k) *= -gap * gap * std::exp(-gamma * gap * gap);
    }
  }
  return out;
}

Verdict qfi_equivalences() {
  Verdict v;
  double worst = 0.0;
  for (double phi : {kPi / 12.0, kPi / 6.0, kPi / 4.0}) {
    for (double gamma : {0.1, 0.5, 2.0}) {
      const ProbeState start = ProbeState::qubit({phi, 1.0});
      const double spectral =
          metrology::qfi_spectral(dephasing::apply_dephasing(start, gamma), drho_dgamma(start, gamma));
      const double c0 = std::sin(2.0 * phi);
      worst = std::max(worst, rel_err(spectral, metrology::qfi_qubit_closed_form(c0, c0 * std::exp(-gamma), 1.0, 1.0)));
    }
  }
  const int n = 1000;
  double best_phi = 0.0;
  double best = -1.0;
  for (int i = 1; i < n; ++i) {
    const double phi = 0.5 * kPi * i / n;
    const ProbeState start = ProbeState::qubit({phi, 1.0});
    const double h = metrology::qfi_spectral(dephasing::apply_dephasing(start, 0.5), drho_dgamma(start, 0.5));
    if (h > best) {
      best = h;
      best_phi = phi;
    }
  }
  v.detail << "max rel dev " << fmt(worst) << ", argmax phi " << fmt(best_phi) << " (pi/4 = " << fmt(kPi / 4) << ")";
  v.require(worst <= 1e-8, "spectral vs closed form");
  v.require(std::abs(best_phi - kPi / 4.0) <= 0.5 * kPi / n, "argmax at pi/4");
  return v;
}

Verdict measurement_optimality() {
  Verdict v;
  std::vector<double> s_grid;
  std::vector<double> tau_grid;
  for (int i = 1; i <= 30; ++i) s_grid.push_back(0.1 * i);
  for (int j = 1; j <= 35; ++j) tau_grid.push_back(1.0 * j);
  for (double t : {0.01, 0.1, 0.25, 0.5}) tau_grid.push_back(t);

  double worst = 0.0;
  for (double s : s_grid) {
    for (double tau : tau_grid) {
      const double H = metrology::qfi_ohmicity(s, tau).qfi;
      const double F = metrology::fisher_info_projective(s, tau, metrology::MeasurementAxis::sigma_x());
      worst = std::max(worst, std::abs(F - H) / std::max(H, 1.0));
    }
  }
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal;
  int violations = 0;
  int equalities = 0;
  for (int a = 0; a < 100; ++a) {
    const double b1 = normal(rng);
    const double b2 = normal(rng);
    const double b3 = normal(rng);
    const double norm = std::sqrt(b1 * b1 + b2 * b2 + b3 * b3);
    const metrology::MeasurementAxis axis(b1 / norm, b2 / norm, b3 / norm);
    for (double s : s_grid) {
      for (double tau : tau_grid) {
        const double H = metrology::qfi_ohmicity(s, tau).qfi;
        const double F = metrology::fisher_info_projective(s, tau, axis);
        if (F > H + 1e-12) ++violations;
        if (H > 1e-10 && F >= H) ++equalities;
      }
    }
  }
  v.detail << "max |F-H| at b1=1 " << fmt(worst) << ", F>H violations " << violations
           << ", equalities off |b1|=1 " << equalities;
  v.require(worst <= 1e-12, "F = H at b1 = 1");
  v.require(violations == 0 && equalities == 0, "F < H elsewhere");
  return v;
}

Verdict optimal_times() {
  Verdict v;
  v.detail << "tau*/(pi e^s/2):";
  for (double s : {0.02, 0.05, 0.1}) {
    const double ratio = optimal::maximize_qfi_over_time(s).tau_star / (0.5 * kPi * std::exp(s));
    v.detail << " " << fmt(ratio);
    v.require(std::abs(ratio - 1.0) <= 0.1, "small-s fit at s=" + fmt(s));
  }
  v.detail << "; tau*/(pi/2s):";
  for (double s : {2.3, 2.6, 3.0}) {
    const double ratio = optimal::maximize_qfi_over_time(s).tau_star / (kPi / (2.0 * s));
    v.detail << " " << fmt(ratio);
    v.require(std::abs(ratio - 1.0) <= 0.1, "large-s fit at s=" + fmt(s));
  }
  const auto mid = optimal::maximize_qfi_over_time(1.6, 35.0);
  v.detail << "; s=1.6 saturating " << (mid.saturating ? "yes" : "no") << " at " << fmt(mid.tau_star);
  v.require(mid.saturating && mid.tau_star == 35.0, "saturation at s=1.6");
  return v;
}

Verdict precision_peak() {
  Verdict v;
  const auto rows = optimal::optimal_qfi_curve({0.5, 1.5, 2.0}, 35.0);
  v.detail << "Q*: s=0.5 " << fmt(rows[0].qsnr_star) << ", s=1.5 " << fmt(rows[1].qsnr_star) << ", s=2.0 "
           << fmt(rows[2].qsnr_star);
  v.require(rows[1].qsnr_star > rows[0].qsnr_star && rows[1].qsnr_star > rows[2].qsnr_star, "peak at 1.5");
  return v;
}

Verdict finite_temperature() {
  Verdict v;
  double worst_rate = 0.0;
  std::string worst_at;
  for (double s : {0.5, 1.0, 1.5, 2.5}) {
    for (double tau : {0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
      const double approx = dephasing::gamma_low_T_quadratic(s, tau, 0.01).gamma;
      const double exact = dephasing::gamma_finite_T_exact(s, tau, 0.01).gamma;
      const double dev = rel_err(approx, exact);
      if (dev > worst_rate) {
        worst_rate = dev;
        worst_at = "s=" + fmt(s) + " tau=" + fmt(tau);
      }
    }
  }
  double worst_excess = 0.0;
  int excess_over = 0;
  int points = 0;
  int positive = 0;
  int negative = 0;
  for (int i = 1; i <= 30; ++i) {
    const double s = 0.1 * i;
    for (int j = 1; j <= 28; ++j) {
      const double tau = 0.25 * j;
      ++points;
      const double ratio = std::abs(metrology::excess_qfi(s, tau, 0.01)) / metrology::qfi_ohmicity(s, tau).qfi;
      worst_excess = std::max(worst_excess, ratio);
      if (!(ratio < 0.2)) ++excess_over;
      const double hot = metrology::excess_qfi(s, tau, 0.1);
      if (hot > 0.0) ++positive;
      if (hot < 0.0) ++negative;
    }
  }
  v.detail << "low-T rate max dev " << fmt(worst_rate) << " at " << worst_at << "; |dH|/H at T=0.01 max "
           << fmt(worst_excess) << " (" << excess_over << "/" << points << " points >= 0.2); T=0.1 signs +"
           << positive << " -" << negative;
  v.require(worst_rate <= 0.01, "low-T rate within 1%");
  v.require(excess_over == 0, "|dH|/H < 0.2");
  v.require(positive > 0 && negative > 0, "both signs at T=0.1");
  return v;
}

Verdict high_temperature() {
  Verdict v;
  double worst_track = 0.0;
  double worst_scaling = 0.0;
  for (double s : {0.5, 1.0, 1.5}) {
    for (double tau : {0.5, 1.0, 2.0}) {
      const double hot = metrology::qfi_high_T(s, tau, 100.0);
      const double hotter = metrology::qfi_high_T(s, tau, 1000.0);
      const double cold = metrology::qfi_ohmicity(1.0 + s, tau).qfi;
      const double track = std::abs(100.0 * hot / cold - 1.0);
      const double scaling = std::abs(10.0 * hotter / hot - 1.0);
      worst_track = std::isnan(track) ? std::numeric_limits<double>::infinity() : std::max(worst_track, track);
      worst_scaling = std::isnan(scaling) ? std::numeric_limits<double>::infinity() : std::max(worst_scaling, scaling);
    }
  }
  const double sample = metrology::qfi_high_T(1.0, 1.0, 100.0);
  v.detail << "max |T H_s(T)/H_{1+s} - 1| " << fmt(worst_track) << ", max |10 H(1000)/H(100) - 1| "
           << fmt(worst_scaling) << ", H_1(1, T=100) = " << fmt(sample);
  v.require(worst_track <= 0.1, "T H_s(T) tracks H_{1+s}");
  v.require(worst_scaling <= 0.15, "1/T scaling");
  return v;
}

Verdict cramer_rao() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  montecarlo::ExperimentConfig config;
  config.s_true = 1.5;
  config.tau = optimal::maximize_qfi_over_time(1.5).tau_star;
  config.M = 10000;
  config.n_trials = 1000;
  config.axis = metrology::MeasurementAxis::sigma_x();
  const auto first = montecarlo::cr_experiment(config);
  const auto repeat = montecarlo::cr_experiment(config);
  auto doubled_config = config;
  doubled_config.M = 20000;
  const auto doubled = montecarlo::cr_experiment(doubled_config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const bool identical = first.s_hat == repeat.s_hat && first.empirical_variance == repeat.empirical_variance &&
                         first.failures == repeat.failures && first.saturation_ratio == repeat.saturation_ratio;
  const double halving = first.empirical_variance / doubled.empirical_variance;
  v.detail << "tau*=" << fmt(config.tau) << ", saturation ratio " << fmt(first.saturation_ratio)
           << ", var(M)/var(2M) " << fmt(halving) << ", deterministic " << (identical ? "yes" : "no") << ", "
           << fmt(seconds) << " s";
  v.require(first.saturation_ratio >= 0.85 && first.saturation_ratio <= 1.3, "saturation ratio");
  v.require(std::abs(halving - 2.0) <= 0.4, "variance halves");
  v.require(identical, "determinism");
  v.require(seconds <= 120.0, "runtime");
  return v;
}

Verdict channel_properties() {
  Verdict v;
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 3.0);
  int instances = 0;
  int trace_or_hermiticity = 0;
  int coherence_increase = 0;
  double composition = 0.0;
  const int dims[] = {2, 3, 5};
  for (int k = 0; k < 200; ++k) {
    const int d = dims[k % 3];
    ProbeState::Matrix a(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) a(i, j) = {normal(rng), normal(rng)};
    }
    ProbeState::Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    rho = (0.5 * (rho + rho.adjoint())).eval();
    std::vector<double> energies(static_cast<std::size_t>(d));
    for (int i = 1; i < d; ++i) {
      energies[static_cast<std::size_t>(i)] = energies[static_cast<std::size_t>(i - 1)] + 0.1 + uniform(rng);
    }
    const ProbeState state(energies, rho);
    const double g1 = uniform(rng);
    const double g2 = uniform(rng);
    const ProbeState out = dephasing::apply_dephasing(state, g1);
    if (out.rho().trace() != state.rho().trace() || out.rho() != out.rho().adjoint()) ++trace_or_hermiticity;
    if (dephasing::coherence(out) > dephasing::coherence(state)) ++coherence_increase;
    const ProbeState twice = dephasing::apply_dephasing(out, g2);
    const ProbeState once = dephasing::apply_dephasing(state, g1 + g2);
    composition = std::max(composition, (twice.rho() - once.rho()).cwiseAbs().maxCoeff());
    ++instances;
  }
  v.detail << instances << " states, trace/Hermiticity breaks " << trace_or_hermiticity << ", coherence increases "
           << coherence_increase << ", max composition dev " << fmt(composition);
  v.require(trace_or_hermiticity == 0, "exact trace and Hermiticity");
  v.require(coherence_increase == 0, "coherence never increases");
  v.require(composition <= 1e-14, "additive composition");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"closed form vs quadrature", closed_form_vs_quadrature},
      {"Ohmic special case", ohmic_special_case},
      {"large-time asymptotics", asymptotics},
      {"short-time law", short_time_law},
      {"QFI equivalences", qfi_equivalences},
      {"measurement optimality", measurement_optimality},
      {"optimal-time estimates", optimal_times},
      {"precision peak", precision_peak},
      {"finite temperature", finite_temperature},
      {"high-temperature suppression", high_temperature},
      {"Cramer-Rao saturation", cramer_rao},
      {"channel properties", channel_properties},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "threw: " << e.what();
    }
    if (!v.pass) ++failures;
    std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
