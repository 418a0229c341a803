#include "kgrs/specfun.hpp"

#include <cmath>
#include <limits>
#include <cstdlib>
#include <numbers>
#include <string>

#include "kgrs/errors.hpp"

namespace kgrs::specfun {

namespace {
constexpr double kOverflowGuard = 1e300;
constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^{-1/4}
}  // namespace

std::complex<double> hermite_function(int n, std::complex<double> z) {
  if (n < 0 || n > 500)
    throw ConfigError("hermite_function: order must be in [0, 500], got " + std::to_string(n));
  std::complex<double> prev = 0.0;
  std::complex<double> cur = kPiQuarterInv * std::exp(-0.5 * z * z);
  if (!(std::abs(cur) <= kOverflowGuard))
    throw Error("hermite_function: e^{-z^2/2} overflows for this argument");
  for (int m = 0; m < n; ++m) {
    const std::complex<double> next =
        z * std::sqrt(2.0 / (m + 1)) * cur - std::sqrt(m / (m + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kOverflowGuard)
      throw Error("hermite_function: recurrence overflow at order " + std::to_string(m + 1) +
                  " (|Im z| too large for this n)");
  }
  return cur;
}

double hermite_function(int n, double x) {
  return hermite_function(n, std::complex<double>(x, 0.0)).real();
}

namespace {

// Tricomi initial guess for the k-th root from the top (k = 1, 2, ...):
// x = sqrt(nu) cos(theta) with nu = 2K+1 and theta solving the WKB phase
// equation nu (theta - sin theta cos theta) / 2 = (k - 1/4) pi.
double tricomi_guess(int K, int k) {
  const double nu = 2.0 * K + 1.0;
  const double target = 2.0 * (k - 0.25) * std::numbers::pi / nu;
  double lo = 0.0, hi = 0.5 * std::numbers::pi;
  double theta = 0.5;
  while (hi - lo > 1e-12) {
    theta = 0.5 * (lo + hi);
    if (theta - std::sin(theta) * std::cos(theta) < target)
      lo = theta;
    else
      hi = theta;
  }
  for (int it = 0; it < 3; ++it) {
    const double f = theta - std::sin(theta) * std::cos(theta) - target;
    const double fp = 2.0 * std::sin(theta) * std::sin(theta);
    if (fp > 1e-14) theta -= f / fp;
  }
  return std::sqrt(nu) * std::cos(theta);
}

}  // namespace

QuadratureRule gauss_hermite_rule(int point_count) {
  const int K = point_count;
  if (K < 1 || K > 400)
    throw ConfigError("gauss_hermite_rule: point count must be in [1, 400], got " +
                      std::to_string(K));
  QuadratureRule rule;
  rule.nodes.assign(K, 0.0);
  rule.weights.assign(K, 0.0);

  // Orthonormal-polynomial values at the outer nodes overflow double beyond
  // K ~ 190, so the recurrence is rescaled on the fly: the Newton step is
  // scale invariant and the weight uses the accumulated log scale. Maehly
  // deflation against the roots already found keeps each iteration inside
  // its own basin (the top-of-spectrum spacing is comparable to the guess
  // error for large K).
  constexpr double kRescaleAt = 1e250;
  constexpr double kLogRescale = 575.6462732485114;  // log(1e250)

  for (int i = 0; i < (K + 1) / 2; ++i) {
    double r = tricomi_guess(K, i + 1);
    double p_prev = 0.0;
    double log_scale = 0.0;
    for (int it = 0; it < 200; ++it) {
      p_prev = 0.0;
      log_scale = 0.0;
      double p = kPiQuarterInv;
      for (int j = 0; j < K; ++j) {
        const double next = r * std::sqrt(2.0 / (j + 1)) * p - std::sqrt(j / (j + 1.0)) * p_prev;
        p_prev = p;
        p = next;
        if (std::abs(p) > kRescaleAt) {
          p *= 1.0 / kRescaleAt;
          p_prev *= 1.0 / kRescaleAt;
          log_scale += kLogRescale;
        }
      }
      double deflation = 0.0;
      for (int j = 0; j < i; ++j) {
        const double found = rule.nodes[K - 1 - j];
        deflation += 1.0 / (r - found) + 1.0 / (r + found);
      }
      const double dp = std::sqrt(2.0 * K) * p_prev;
      const double step = p / (dp - p * deflation);
      r -= step;
      if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(r))) break;
    }
    // w = 2 / (sqrt(2K) p_{K-1}(r))^2, assembled in log space; beyond
    // K ~ 370 the outermost weights drop below the double range and are
    // reported as the smallest positive value instead of 0
    const long double log_w =
        std::log(2.0L) - 2.0L * (log_scale + std::log(std::sqrt(2.0 * K) * std::abs(p_prev)));
    double w = static_cast<double>(std::exp(log_w));
    if (w == 0.0) w = std::numeric_limits<double>::denorm_min();
    const int hi = K - 1 - i;
    rule.nodes[hi] = r;
    rule.nodes[i] = -r;
    rule.weights[i] = rule.weights[hi] = w;
  }
  if (K % 2 == 1) rule.nodes[K / 2] = 0.0;
  return rule;
}

double hyp2f1_terminating(int m, double b, double c, double z) {
  if (m < 0) throw ConfigError("hyp2f1_terminating: m must be nonnegative");
  double sum = 1.0;
  double term = 1.0;
  for (int k = 0; k < m; ++k) {
    if (c + k == 0.0)
      throw Error("hyp2f1_terminating: Pochhammer factor (c)_" + std::to_string(k + 1) +
                  " vanishes (c = " + std::to_string(c) + ")");
    term *= (-m + k) * (b + k) / ((c + k) * (k + 1)) * z;
    if (term == 0.0) break;
    sum += term;
  }
  return sum;
}

double indefinite_gram_closed_form(int n, int m) {
  if (n < 0 || m < 0 || n > 60 || m > 60)
    throw ConfigError("indefinite_gram_closed_form: orders must be in [0, 60]");
  if ((n + m) % 2 == 1) return 0.0;
  const double log_pref =
      0.5 * ((n + m + 1) * (std::log(2.0) - std::log(3.0)) - std::log(std::numbers::pi) -
             std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) +
      std::lgamma((n + m + 1) / 2.0);
  const double f = hyp2f1_terminating(m, -static_cast<double>(n), (1.0 - m - n) / 2.0, 1.5);
  return std::exp(log_pref) * std::abs(f);
}

}  // namespace kgrs::specfun
