// SPDX-License-Identifier: Apache-2.0
//
// Tilt-angle integrals entering the 3D closed forms:
//
//   F(lo, hi, t) = int_lo^hi sqrt(sin^2(psi) - t^2) dpsi
//   G(lo, hi, t) = int_lo^hi (pi/2 - asin(t / sin(psi))) dpsi
//
// Both are evaluated with a refined composite Simpson rule: pass i uses
// ceil((hi - lo) * n_unit * 2i) intervals (rounded up to even) and the
// iteration stops once two successive passes differ by less than epsilon.
#pragma once

#include <cmath>
#include <concepts>

namespace needle_lab {

struct QuadratureSettings {
  int n_unit = 10000;
  double epsilon = 1e-9;
  int max_refinements = 30;

  void validate() const;
};

/// Composite Simpson sum of f over [lo, hi] with n intervals (n even).
template <std::invocable<double> Fn>
double simpson_sum(Fn&& f, double lo, double hi, long n) {
  const double h = (hi - lo) / static_cast<double>(n);
  double odd = 0.0;
  double even = 0.0;
  for (long k = 1; k < n; k += 2) odd += f(lo + static_cast<double>(k) * h);
  for (long k = 2; k < n; k += 2) even += f(lo + static_cast<double>(k) * h);
  return h / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even);
}

/// Interval count of refinement pass i, rounded up to an even number.
long simpson_intervals(double lo, double hi, int n_unit, int pass);

[[noreturn]] void throw_no_convergence(int max_refinements);

/// Runs the refinement protocol described above on an arbitrary integrand.
/// Throws NoConvergence when max_refinements passes do not settle.
template <std::invocable<double> Fn>
double refined_simpson(Fn&& f, double lo, double hi, const QuadratureSettings& settings) {
  settings.validate();
  if (hi <= lo) return 0.0;
  double previous = simpson_sum(f, lo, hi, simpson_intervals(lo, hi, settings.n_unit, 1));
  for (int pass = 2; pass <= settings.max_refinements + 1; ++pass) {
    const double current = simpson_sum(f, lo, hi, simpson_intervals(lo, hi, settings.n_unit, pass));
    if (std::abs(current - previous) < settings.epsilon) return current;
    previous = current;
  }
  throw_no_convergence(settings.max_refinements);
}

double integral_F(double lo, double hi, double t, const QuadratureSettings& settings = {});
double integral_G(double lo, double hi, double t, const QuadratureSettings& settings = {});

/// Pointwise integrands, with rounding noise near psi = asin(t) clamped.
double integrand_F(double psi, double t);
double integrand_G(double psi, double t);

}  // namespace needle_lab
