// SPDX-License-Identifier: Apache-2.0
//
// Probability landscapes over shape length and grid aspect ratio.
//
// Aspect sweeps hold lambda = l^2/(ab) and sigma_l = sigma/l fixed and vary
// t = a/b. In units of b the cell is (t, 1), the length is sqrt(lambda t)
// and the diameter is sigma_l sqrt(lambda t).
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "needle_lab/analytic.hpp"
#include "needle_lab/core.hpp"
#include "needle_lab/quadrature.hpp"

namespace needle_lab {

struct SweepRow {
  double abscissa;
  Probability p;
};

/// P versus l/b at a fixed aspect ratio a/b (which may be +inf, routed to
/// the single-family closed forms). Lengths are in units of b.
std::vector<SweepRow> sweep_length(Variant variant, double a_over_b, std::optional<double> sigma_over_b,
                                   const std::vector<double>& l_over_b, const QuadratureSettings& settings = {},
                                   unsigned threads = 1);

struct AspectSweepSpec {
  Variant variant = Variant::Needle2D;
  double lambda = 1.0;
  double sigma_l = 0.0;
  double t_min = 1.0;
  double t_max = 8.0;
  int t_steps = 2000;

  void validate() const;
  /// Evenly spaced t values from t_min to t_max inclusive.
  std::vector<double> grid() const;
};

/// Probability of the spec's variant at aspect ratio t.
Probability aspect_probability(const AspectSweepSpec& spec, double t, const QuadratureSettings& settings = {});

std::vector<SweepRow> sweep_aspect(const AspectSweepSpec& spec, const QuadratureSettings& settings = {},
                                   unsigned threads = 1);

struct LocalMinimum {
  double t;
  double p;
  bool at_boundary;
};

struct MinimaReport {
  std::vector<LocalMinimum> minima;  // ascending t
  std::size_t global_index = 0;

  const LocalMinimum& global() const { return minima.at(global_index); }
};

/// Golden-section minimisation of f on [lo, hi] until the bracket is
/// narrower than tol. Returns the abscissa of the smallest value seen.
template <typename Fn>
double golden_section_minimize(Fn&& f, double lo, double hi, double tol);

/// Local minima of P(t): dense-grid bracketing followed by golden-section
/// refinement to |dt| <= 1e-6.
MinimaReport find_minima(const AspectSweepSpec& spec, const QuadratureSettings& settings = {},
                         unsigned threads = 1);

struct LambdaThresholds {
  double lambda1;  // a second minimum appears at t > 1
  double lambda2;  // the global minimum moves from t = 1 to t > 1
  double lambda3;  // the minimum at t = 1 disappears
  double tolerance;
};

struct ThresholdSearch {
  double lambda_lo = 0.5;
  double lambda_hi = 1.2;
  double tolerance = 1e-4;
  double t_max = 8.0;
  int t_steps = 2000;
};

/// Bisection on lambda over the three structural predicates of the 2D
/// needle aspect landscape. Throws InvalidArgument for other variants and
/// StructureNotFound if a predicate does not flip across the search range.
LambdaThresholds find_lambda_thresholds(Variant variant, const QuadratureSettings& settings = {},
                                        const ThresholdSearch& search = {});

/// (2/pi) int_0^{pi/2} P2D(l sin(psi)) dpsi: the 3D probability rebuilt
/// from the 2D closed forms alone. The outer integral is split where
/// l sin(psi) crosses a regime threshold and each piece is integrated with
/// the refined Simpson rule.
double psi_marginal_oracle(double l, std::optional<double> sigma, const GridCell& grid,
                           const QuadratureSettings& settings = {},
                           const BranchEvaluator& evaluator = evaluate_branch);

// ---------------------------------------------------------------------------

template <typename Fn>
double golden_section_minimize(Fn&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace needle_lab
