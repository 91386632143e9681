// SPDX-License-Identifier: Apache-2.0
//
// Closed-form probability that a needle or spherocylinder dropped uniformly
// on a rectangular line grid touches at least one line. Each problem variant
// has four closed forms, one per length regime; the single-family limit
// (a -> inf) has two.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "needle_lab/core.hpp"
#include "needle_lab/quadrature.hpp"

namespace needle_lab {

/// Raw value of one regime's closed form at length l, without regime
/// selection or clamping. Callers may evaluate a branch slightly outside its
/// interval (e.g. exactly at a threshold); arcsin and square-root arguments
/// are clamped within 1e-12 of the valid range.
double evaluate_branch(Variant variant, RegimeKind branch, double l, double sigma,
                       const GridCell& grid, const QuadratureSettings& settings = {});

/// Signature of evaluate_branch; lets verification swap in another
/// implementation of the closed forms.
using BranchEvaluator = std::function<double(Variant, RegimeKind, double, double, const GridCell&,
                                             const QuadratureSettings&)>;

/// Full evaluation for a canonical grid: sigma >= b short-circuits to 1,
/// otherwise the branch picked by classify_regime is evaluated and clamped
/// to [0, 1]. In 2D, l at or above the certainty length returns exactly 1.
Probability probability(Variant variant, double l, double sigma, const GridCell& grid,
                        const QuadratureSettings& settings = {},
                        const BranchEvaluator& evaluator = evaluate_branch);

Probability prob_2d_needle(double l, const GridCell& grid);
Probability prob_2d_sc(double l, double sigma, const GridCell& grid);
Probability prob_3d_needle(double l, const GridCell& grid, const QuadratureSettings& settings = {});
Probability prob_3d_sc(double l, double sigma, const GridCell& grid,
                       const QuadratureSettings& settings = {});

/// Validates and canonicalizes, then dispatches on the shape and embedding.
Probability prob(const Shape& shape, Embedding embedding, double a, double b,
                 const QuadratureSettings& settings = {});

/// Single line family (a -> inf) with spacing b. Regime is Short below
/// b - sigma and MidB above.
Probability prob_bnp(const Shape& shape, Embedding embedding, double b,
                     const QuadratureSettings& settings = {});

struct ThresholdCheck {
  std::string name;  // "b", "a", "L" (needles) or "b-sigma", "a-sigma", "L-hat"
  double length;
  RegimeKind lower_branch;
  RegimeKind upper_branch;
  double lower_value;
  double upper_value;
  double difference;
  bool passed;
};

struct ConsistencyReport {
  Variant variant;
  GridCell grid;
  double sigma;
  double tolerance;
  std::vector<ThresholdCheck> checks;
  std::string note;

  bool passed() const;
};

/// 2D closed forms must agree to 1e-12 at each threshold, 3D ones to 1e-6.
double consistency_tolerance(Variant variant);

/// Evaluates the two branches adjacent to each regime threshold at the
/// threshold itself and reports their difference. Never throws for valid
/// numbers; sigma >= b yields an empty, failed report.
ConsistencyReport check_boundary_consistency(Variant variant, const GridCell& grid,
                                             std::optional<double> sigma,
                                             const QuadratureSettings& settings = {},
                                             const BranchEvaluator& evaluator = evaluate_branch);

struct PriorLiteratureComparison {
  double ours;
  double prior;
  double delta;  // prior - ours
};

/// Unit square grid, 1 <= l <= sqrt(2): compares our MidA closed form with
/// the earlier published variant whose second term carries 1/pi instead of
/// 2/pi. Throws DomainError outside that range.
PriorLiteratureComparison prior_literature_delta(double l);

/// The earlier published expression on the unit square,
/// 1 - (1/pi)(asin(1/l) - acos(1/l) + 2 sqrt(l^2 - 1) - l^2/2 - 1).
double prior_literature_unit_square(double l);

}  // namespace needle_lab
