// Independent reference computations used by the tests. Nothing here calls
// into the library's quadrature or closed forms.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Composite trapezoid on n intervals.
template <typename Fn>
double trapezoid(Fn&& f, double lo, double hi, long n) {
  const double h = (hi - lo) / static_cast<double>(n);
  double sum = 0.5 * (f(lo) + f(hi));
  for (long k = 1; k < n; ++k) sum += f(lo + static_cast<double>(k) * h);
  return sum * h;
}

inline double f_integrand(double psi, double t) {
  const double s = std::sin(psi);
  return std::sqrt(std::max(0.0, s * s - t * t));
}

inline double g_integrand(double psi, double t) {
  const double s = std::sin(psi);
  if (s <= 0.0) return t == 0.0 ? pi / 2 : 0.0;
  return pi / 2 - std::asin(std::min(1.0, t / s));
}

// Earlier published unit-square expression and ours, a < l <= L.
inline double unit_square_x(double l) {
  return std::asin(1.0 / l) - std::acos(1.0 / l) + 2.0 * std::sqrt(l * l - 1.0) - l * l / 2.0 - 1.0;
}
inline double unit_square_ours(double l) { return 1.0 - 2.0 / pi * unit_square_x(l); }
inline double unit_square_prior(double l) { return 1.0 - 1.0 / pi * unit_square_x(l); }

// Short-regime closed forms written out longhand.
inline double needle_2d_short(double l, double a, double b) {
  return 2.0 / pi * (l / a + l / b) - l * l / (pi * a * b);
}
inline double needle_3d_short(double l, double a, double b) {
  return 4.0 / (pi * pi) * (l / a + l / b) - l * l / (2.0 * pi * a * b);
}
inline double disk(double sigma, double a, double b) { return sigma / a + sigma / b - sigma * sigma / (a * b); }

// One-sample Kolmogorov-Smirnov statistic against U(0, 1).
inline double ks_uniform(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, xs[i] - lo, hi - xs[i]});
  }
  return d;
}

// Asymptotic KS critical value at alpha = 0.001.
inline double ks_critical_001(std::size_t n) { return 1.9495 / std::sqrt(static_cast<double>(n)); }

inline double binomial_se(double p, double n) { return std::sqrt(std::max(0.0, p * (1.0 - p)) / n); }

}  // namespace oracle
