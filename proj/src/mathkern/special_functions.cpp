#include "dephaseprobe/mathkern.hpp"

#include <array>
#include <cmath>
#include <string>

#include "dephaseprobe/errors.hpp"

namespace dephaseprobe::mathkern {

namespace {

// zeta(k) - 1 for k = 2..30.
constexpr std::array<double, 29> kZetaMinusOne = {
    0.6449340668482264364724,   0.2020569031595942853997,   0.082323233711138191516,
    0.03692775514336992633137,  0.01734306198444913971452,  0.008349277381922826839798,
    0.004077356197944339378685, 0.002008392826082214417853, 0.000994575127818085337146,
    0.0004941886041194645587023, 0.000246086553308048298638, 0.0001227133475784891467518,
    6.124813505870482925855e-5, 3.058823630702049355173e-5, 1.528225940865187173257e-5,
    7.6371976378997622736e-6,   3.817293264999839856462e-6, 1.908212716553938925657e-6,
    9.53962033872796113152e-7,  4.769329867878064631167e-7, 2.384505027277329900036e-7,
    1.192199259653110730678e-7, 5.960818905125947961244e-8, 2.980350351465228018606e-8,
    1.490155482836504123466e-8, 7.450711789835429491981e-9, 3.725334024788457054819e-9,
    1.862659723513049006404e-9, 9.313274324196681828718e-10,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640561764;

// ln Gamma(2 + z) - z (1 - gamma_E) for |z| <= 0.5, from the Taylor series of
// ln Gamma(1 + z) with the log1p part split off.
double lgamma_two_plus_tail(double z) {
  double sum = 0.0;
  double power = z;
  for (std::size_t i = 0; i < kZetaMinusOne.size(); ++i) {
    power *= -z;  // (-z)^k with k = i + 2, up to the sign folded below
    const double k = static_cast<double>(i + 2);
    sum += kZetaMinusOne[i] * power / k;
  }
  // power carries (-1)^{k-1} z^k; the series wants (-1)^k z^k.
  return -sum;
}

double lgamma_near_two(double z) { return z * (1.0 - kEulerGamma) + lgamma_two_plus_tail(z); }

double lgamma_stirling(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli terms B_{2k} / (2k (2k - 1) x^{2k - 1}), k = 1..8.
  double series = -3617.0 / 122400.0;
  series = series * inv2 + 1.0 / 156.0;
  series = series * inv2 - 691.0 / 360360.0;
  series = series * inv2 + 1.0 / 1188.0;
  series = series * inv2 - 1.0 / 1680.0;
  series = series * inv2 + 1.0 / 1260.0;
  series = series * inv2 - 1.0 / 360.0;
  series = series * inv2 + 1.0 / 12.0;
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series * inv;
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0)) {
    throw DomainError(std::string(name) + ": argument must be > 0, got " + std::to_string(x));
  }
}

}  // namespace

double ln_gamma(double x) {
  require_positive(x, "ln_gamma");
  if (std::isinf(x)) return x;
  if (x < 0.5) {
    // Gamma(x) = Gamma(1 + x) / x, and 1 + x lands in [1, 1.5).
    return ln_gamma(x + 1.0) - std::log(x);
  }
  if (x < 1.5) {
    const double z = x - 1.0;
    // ln Gamma(1 + z) = ln Gamma(2 + z) - log1p(z)
    return lgamma_near_two(z) - std::log1p(z);
  }
  if (x < 2.5) return lgamma_near_two(x - 2.0);
  if (x < 13.0) {
    double product = 1.0;
    while (x >= 2.5) {
      x -= 1.0;
      product *= x;
    }
    return lgamma_near_two(x - 2.0) + std::log(product);
  }
  return lgamma_stirling(x);
}

double gamma_fn(double x) { return std::exp(ln_gamma(x)); }

double digamma(double x) {
  require_positive(x, "digamma");
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // B_{2k} / (2k x^{2k}), k = 1..7
  double series = 1.0 / 12.0;
  series = series * inv2 - 691.0 / 32760.0;
  series = series * inv2 + 1.0 / 132.0;
  series = series * inv2 - 1.0 / 240.0;
  series = series * inv2 + 1.0 / 252.0;
  series = series * inv2 - 1.0 / 120.0;
  series = series * inv2 + 1.0 / 12.0;
  return shift + std::log(x) - 0.5 / x - series * inv2;
}

}  // namespace dephaseprobe::mathkern
