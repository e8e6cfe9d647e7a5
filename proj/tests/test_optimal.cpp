#include <doctest.h>

#include <cmath>

#include "dephaseprobe/errors.hpp"
#include "dephaseprobe/metrology.hpp"
#include "dephaseprobe/optimal.hpp"

using namespace dephaseprobe;
using namespace dephaseprobe::optimal;
using mathkern::kPi;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

struct Reference {
  double s;
  double tau_star;
  double qfi_star;
};

// stationary points of H_s(tau) solved at 30 digits
constexpr Reference kReferences[] = {
    {0.02, 1.83481464999, 0.135797237058}, {0.05, 1.89679343014, 0.127106115888},
    {0.1, 2.00536787214, 0.114610213345},  {2.3, 0.636471137931, 0.0854816396484},
    {2.5, 0.606292963841, 0.108075010614}, {2.6, 0.589000128154, 0.120571383364},
    {3.0, 0.506844052352, 0.177743107211},
};

}  // namespace

TEST_CASE("golden-section search") {
  const auto parabola = [](double x) { return -(x - 1.234) * (x - 1.234) + 3.0; };
  const auto r = golden_section_maximize(parabola, 0.0, 5.0, 1e-10);
  CHECK(std::abs(r.x - 1.234) < 1e-7);
  CHECK(std::abs(r.value - 3.0) < 1e-15);
  CHECK(r.iterations > 0);
  const auto edge = golden_section_maximize([](double x) { return x; }, 0.0, 1.0, 1e-10);
  CHECK(edge.x > 1.0 - 1e-8);
  CHECK_THROWS_AS(golden_section_maximize(parabola, 2.0, 1.0, 1e-8), DomainError);
}

TEST_CASE("optimal interaction time matches the stationary point") {
  for (const auto& ref : kReferences) {
    CAPTURE(ref.s);
    const auto r = maximize_qfi_over_time(ref.s);
    CHECK_FALSE(r.saturating);
    CHECK(rel_err(r.tau_star, ref.tau_star) < 1e-5);
    CHECK(rel_err(r.qfi_star, ref.qfi_star) < 1e-9);
    CHECK(r.horizon == kDefaultHorizon);
  }
}

TEST_CASE("large-s optimum follows pi / (2 s)") {
  const auto r = maximize_qfi_over_time(2.5);
  CHECK(rel_err(r.tau_star, kPi / 5.0) < 0.1);
}

TEST_CASE("intermediate ohmicity saturates at the horizon") {
  for (double s : {1.3, 1.6, 1.8}) {
    CAPTURE(s);
    const auto r = maximize_qfi_over_time(s, 35.0);
    CHECK(r.saturating);
    CHECK(r.tau_star == 35.0);
    CHECK(r.qfi_star == metrology::qfi_ohmicity(s, 35.0).qfi);
  }
  // a longer horizon keeps the optimum at its end
  CHECK(maximize_qfi_over_time(1.6, 70.0).tau_star == 70.0);
}

TEST_CASE("optimum dominates the scan, is stable and locally concave") {
  for (double s : {0.1, 0.4, 0.8, 1.0, 2.1, 2.7}) {
    CAPTURE(s);
    const auto r = maximize_qfi_over_time(s);
    REQUIRE_FALSE(r.saturating);
    for (int i = 0; i < kDefaultScanPoints; ++i) {
      const double tau = kScanStart * std::pow(kDefaultHorizon / kScanStart, i / double(kDefaultScanPoints - 1));
      CHECK(r.qfi_star >= metrology::qfi_ohmicity(s, tau).qfi);
    }
    const auto dense = maximize_qfi_over_time(s, kDefaultHorizon, kDefaultRelTol, 2 * kDefaultScanPoints);
    CHECK(rel_err(dense.tau_star, r.tau_star) < 0.01);
    const double h = 1e-3 * r.tau_star;
    const double second = metrology::qfi_ohmicity(s, r.tau_star + h).qfi - 2.0 * r.qfi_star +
                          metrology::qfi_ohmicity(s, r.tau_star - h).qfi;
    CHECK(second <= 0.0);
  }
}

TEST_CASE("optimisation rejects bad input") {
  CHECK_THROWS_AS(maximize_qfi_over_time(0.0), DomainError);
  CHECK_THROWS_AS(maximize_qfi_over_time(1.0, 1e-4), DomainError);
  CHECK_THROWS_AS(maximize_qfi_over_time(1.0, 35.0, 1e-8, 2), DomainError);
}

TEST_CASE("optimal time curve") {
  const auto rising = optimal_time_curve({0.05, 0.1, 0.2});
  REQUIRE(rising.size() == 3);
  CHECK(rising[0].report->tau_star < rising[1].report->tau_star);
  CHECK(rising[1].report->tau_star < rising[2].report->tau_star);

  const auto falling = optimal_time_curve({2.3, 2.6, 3.0});
  for (const auto& p : falling) CHECK(rel_err(p.report->tau_star, kPi / (2.0 * p.s)) < 0.1);
  CHECK(falling[0].report->tau_star > falling[2].report->tau_star);

  CHECK(optimal_time_curve({1.6}).front().report->saturating);

  // input order preserved, failures recorded per point
  const auto mixed = optimal_time_curve({2.0, -1.0, 0.5});
  REQUIRE(mixed.size() == 3);
  CHECK(mixed[0].s == 2.0);
  CHECK(mixed[1].s == -1.0);
  CHECK_FALSE(mixed[1].report.has_value());
  CHECK_FALSE(mixed[1].error.empty());
  CHECK(mixed[2].report.has_value());
}

TEST_CASE("jump in the optimal time") {
  std::vector<double> grid;
  for (int i = 0; i < 59; ++i) grid.push_back(0.1 + 2.9 * i / 58.0);
  const auto curve = optimal_time_curve(grid);
  const auto jumps = find_time_jumps(curve);
  REQUIRE(jumps.size() == 1);
  CHECK(jumps[0].s_before < jumps[0].s_after);
  CHECK(jumps[0].tau_before > 10.0);
  CHECK(jumps[0].tau_after < 1.0);
  CHECK(jumps[0].s_after > 1.8);
  CHECK(jumps[0].s_after < 2.2);
}

TEST_CASE("optimal QFI curve") {
  const auto rows = optimal_qfi_curve({2.0, 0.5, 1.5});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].s == 0.5);
  CHECK(rows[1].s == 1.5);
  CHECK(rows[2].s == 2.0);
  for (const auto& row : rows) {
    CHECK(std::abs(row.qsnr_star - row.s * row.s * row.qfi_star) <= 1e-15 * row.qsnr_star);
    CHECK(row.qfi_star >= metrology::qfi_ohmicity(row.s, 1.0).qfi);
  }
  CHECK(rows[1].qsnr_star > rows[0].qsnr_star);
  CHECK(rows[1].qsnr_star > rows[2].qsnr_star);
  CHECK_THROWS(optimal_qfi_curve({1.0, -2.0}));
}
