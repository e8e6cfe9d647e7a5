#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "dephaseprobe/errors.hpp"
#include "dephaseprobe/mathkern.hpp"

namespace dephaseprobe::mathkern {

namespace {

// Gauss-Kronrod 21-point abscissae and weights (QUADPACK qk21). Odd indices
// are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool operator<(const Panel& other) const { return error < other.error; }
};

class Integrator {
 public:
  Integrator(const std::function<double(double)>& f, const QuadratureSpec& spec)
      : f_(f), spec_(spec) {}

  double eval(double x) {
    ++evaluations_;
    const double y = f_(x);
    if (!std::isfinite(y)) {
      throw ConvergenceError("integrate_semi_infinite: integrand is not finite at x = " +
                                 std::to_string(x),
                             std::nan(""), std::numeric_limits<double>::infinity());
    }
    return y;
  }

  Panel gauss_kronrod(double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = eval(center);
    double kronrod = fc * kWgk[10];
    double gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
      const double dx = half * kXgk[j];
      const double pair = eval(center - dx) + eval(center + dx);
      kronrod += kWgk[j] * pair;
      if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
  }

  // tanh-sinh on [0, b]; tolerates integrable algebraic singularities at 0.
  Panel tanh_sinh(double b) {
    constexpr double kHalfPi = 0.5 * kPi;
    constexpr double kUMax = 6.5;
    auto term = [&](double u) {
      const double v = kHalfPi * std::sinh(u);
      const double x = b / (1.0 + std::exp(-2.0 * v));
      if (!(x > 0.0) || !(x < b)) return 0.0;
      const double cv = std::cosh(v);
      const double w = 0.5 * b * kHalfPi * std::cosh(u) / (cv * cv);
      if (w == 0.0) return 0.0;
      return w * eval(x);
    };

    double h = 1.0;
    double sum = term(0.0);
    for (double u = h; u <= kUMax; u += h) sum += term(u) + term(-u);
    double estimate = h * sum;
    double error = std::abs(estimate);
    for (int level = 1; level <= 8; ++level) {
      h *= 0.5;
      for (double u = h; u <= kUMax; u += 2.0 * h) sum += term(u) + term(-u);
      const double refined = h * sum;
      error = std::abs(refined - estimate);
      estimate = refined;
      if (level >= 3 && error <= 0.01 * tolerance(std::abs(estimate))) break;
    }
    return {0.0, b, estimate, error};
  }

  Panel integrate_panel(double a, double b) { return a == 0.0 ? tanh_sinh(b) : gauss_kronrod(a, b); }

  double tolerance(double magnitude) const {
    return std::max(spec_.absolute_tolerance, spec_.relative_tolerance * magnitude);
  }

  // With at least e^{-x} decay past the cutoff, the tail integral is bounded by
  // the envelope of |f| over the last unit window.
  double tail_bound(double last_panel_width) {
    const double cutoff = spec_.upper_cutoff;
    const double window = std::min(1.0, last_panel_width);
    double envelope = 0.0;
    for (int i = 0; i <= 8; ++i) {
      envelope = std::max(envelope, std::abs(eval(cutoff - 0.125 * i * window)));
    }
    return envelope;
  }

  QuadratureResult run() {
    const double cutoff = spec_.upper_cutoff;
    const double width_limit = std::min(spec_.max_panel_width, cutoff);
    const auto initial = static_cast<std::size_t>(std::max(1.0, std::ceil(cutoff / width_limit)));
    const double width = cutoff / static_cast<double>(initial);

    std::priority_queue<Panel> queue;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i < initial; ++i) {
      const double a = width * static_cast<double>(i);
      const double b = (i + 1 == initial) ? cutoff : width * static_cast<double>(i + 1);
      Panel p = integrate_panel(a, b);
      total += p.value;
      total_error += p.error;
      queue.push(p);
    }
    const double tail = tail_bound(width);

    int subdivisions = 0;
    while (total_error + tail > tolerance(std::abs(total))) {
      if (tail > tolerance(std::abs(total))) {
        throw ConvergenceError("integrate_semi_infinite: truncation tail exceeds tolerance", total,
                               total_error + tail);
      }
      if (subdivisions >= spec_.max_subdivisions) {
        throw ConvergenceError("integrate_semi_infinite: subdivision budget exhausted", total,
                               total_error + tail);
      }
      const Panel worst = queue.top();
      queue.pop();
      const double mid = 0.5 * (worst.a + worst.b);
      const Panel left = integrate_panel(worst.a, mid);
      const Panel right = integrate_panel(mid, worst.b);
      total += left.value + right.value - worst.value;
      total_error += left.error + right.error - worst.error;
      queue.push(left);
      queue.push(right);
      ++subdivisions;
      if (subdivisions % 64 == 0) {
        // Re-sum to keep the running totals free of accumulated cancellation.
        auto copy = queue;
        total = 0.0;
        total_error = 0.0;
        while (!copy.empty()) {
          total += copy.top().value;
          total_error += copy.top().error;
          copy.pop();
        }
      }
    }
    return {total, total_error + tail, subdivisions, evaluations_};
  }

 private:
  const std::function<double(double)>& f_;
  const QuadratureSpec& spec_;
  int evaluations_ = 0;
};

}  // namespace

void QuadratureSpec::validate() const {
  if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0)) {
    throw InvariantError("QuadratureSpec: tolerances must be positive");
  }
  if (!(upper_cutoff > 0.0)) throw InvariantError("QuadratureSpec: upper_cutoff must be > 0");
  if (!(max_panel_width > 0.0)) throw InvariantError("QuadratureSpec: max_panel_width must be > 0");
  if (max_subdivisions < 0) throw InvariantError("QuadratureSpec: max_subdivisions must be >= 0");
}

QuadratureSpec quadrature_spec_for(double tau, double temperature) {
  QuadratureSpec spec;
  spec.upper_cutoff = std::max({50.0, 50.0 * temperature, 10.0 * tau});
  if (tau > 0.0) spec.max_panel_width = kPi / (2.0 * tau);
  return spec;
}

QuadratureResult integrate_semi_infinite_detailed(const std::function<double(double)>& f,
                                                  const QuadratureSpec& spec) {
  spec.validate();
  Integrator integrator(f, spec);
  return integrator.run();
}

double integrate_semi_infinite(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  return integrate_semi_infinite_detailed(f, spec).value;
}

}  // namespace dephaseprobe::mathkern
