// SPDX-License-Identifier: Apache-2.0
//
// Self-checks over a matrix of grids: branch agreement at regime
// thresholds, 3D closed forms against the psi-marginal oracle, the
// single-family limit, and a Monte Carlo regression on the unit square.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "needle_lab/analytic.hpp"
#include "needle_lab/quadrature.hpp"

namespace needle_lab {

struct VerifyCase {
  double a;
  double b;
  std::optional<double> sigma;  // spherocylinder variants run only when set
};

std::vector<VerifyCase> default_verify_cases();

/// Parses "a,b,sigma" lines (sigma may be empty). Blank lines, lines
/// starting with '#' and a header line starting with 'a' are skipped.
std::vector<VerifyCase> parse_verify_cases(const std::string& csv_text);

struct VerifyOptions {
  std::vector<VerifyCase> cases = default_verify_cases();
  QuadratureSettings settings{};
  BranchEvaluator evaluator = evaluate_branch;
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
};

struct CheckOutcome {
  std::string suite;  // boundary | psi-marginal | bnp-limit | prior-literature
  std::string name;
  double deviation;
  double tolerance;
  bool passed;
};

std::vector<CheckOutcome> run_verification(const VerifyOptions& options);

/// Test fixture: the closed forms with the earlier published 1/pi
/// coefficient in the 2D needle a < l <= L branch (on the unit square this
/// is exactly the published expression).
BranchEvaluator prior_coefficient_fault();

}  // namespace needle_lab
