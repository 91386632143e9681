// SPDX-License-Identifier: Apache-2.0
#include "needle_lab/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace needle_lab {

namespace {

using std::numbers::pi;

constexpr double kClampSlack = 1e-12;
constexpr double kTwoOverPi = 2.0 / pi;
constexpr double kFourOverPiSq = 4.0 / (pi * pi);
constexpr double kOneOverPiSq = 1.0 / (pi * pi);

double clamped_ratio(double x) {
  if (x > 1.0 + kClampSlack || x < -1.0 - kClampSlack) {
    throw Error(ErrorCode::DomainError, "closed form evaluated outside its regime");
  }
  return std::clamp(x, -1.0, 1.0);
}

double safe_asin(double x) { return std::asin(clamped_ratio(x)); }

// sqrt(1 - x^2)
double cosine_of_asin(double x) {
  const double c = clamped_ratio(x);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

// Effective cell after shrinking each axis by sigma; sigma = 0 gives the
// needle formulas.
struct Shrunk {
  double a;
  double b;
  double sigma;
  double width;   // a - sigma
  double height;  // b - sigma
  double area;    // a * b
  double disk;    // sigma/a + sigma/b - sigma^2/(ab), probability of the bare end disk

  Shrunk(const GridCell& grid, double s)
      : a(grid.a),
        b(grid.b),
        sigma(s),
        width(grid.a - s),
        height(grid.b - s),
        area(grid.a * grid.b),
        disk(s / grid.a + s / grid.b - s * s / (grid.a * grid.b)) {}

  double diagonal() const { return std::hypot(width, height); }
  // (a - sigma)/a * (b - sigma)/b
  double interior_fraction() const { return (width / a) * (height / b); }
};

double branch_2d(RegimeKind branch, double l, const Shrunk& c) {
  const double wa = c.width / c.a;
  const double hb = c.height / c.b;
  switch (branch) {
    case RegimeKind::Short:
      return kTwoOverPi * hb * l / c.a + kTwoOverPi * wa * l / c.b - l * l / (pi * c.area) + c.disk;
    case RegimeKind::MidB: {
      const double tb = c.height / l;
      return c.height * c.height / (pi * c.area) +
             kTwoOverPi * wa * (l / c.b) * (1.0 - cosine_of_asin(tb)) +
             kTwoOverPi * wa * hb * (pi / 2 - safe_asin(tb)) + c.disk;
    }
    case RegimeKind::MidA: {
      const double ta = c.width / l;
      const double tb = c.height / l;
      const double diag = c.diagonal();
      return (diag * diag + l * l) / (pi * c.area) -
             kTwoOverPi * (hb * (l / c.a) * cosine_of_asin(ta) + wa * (l / c.b) * cosine_of_asin(tb)) +
             kTwoOverPi * wa * hb * (pi - safe_asin(ta) - safe_asin(tb)) + c.disk;
    }
    case RegimeKind::Long:
      return 1.0;
  }
  return 1.0;
}

// Contribution of one wall family whose free distance is `gap` (a - sigma or
// b - sigma), integrated over tilt angles in [asin(gap/l), upper_tilt]:
//   (4/pi^2) [coef l - coef l F + (a-s)(b-s)/(ab) G]
// where coef is (b-s)/(ab) for the x-walls and (a-s)/(ab) for the y-walls.
double tilted_wall(double gap, double coef, double l, double upper_tilt, const Shrunk& c,
                   const QuadratureSettings& settings) {
  const double t = clamped_ratio(gap / l);
  const double lo = std::asin(t);
  const double hi = std::max(lo, upper_tilt);
  const double f = integral_F(lo, hi, t, settings);
  const double g = integral_G(lo, hi, t, settings);
  return kFourOverPiSq * (coef * l - coef * l * f + c.interior_fraction() * g);
}

// Overlap correction for tilts where the projection spans the full gap:
//   (1/pi^2) l^2/(ab) asin(gap/l) + (3/pi^2) coef l sqrt(1 - gap^2/l^2)
//   - (2/pi^2) gap^2/(ab) (pi/2 - asin(gap/l))
double tilted_overlap(double gap, double coef, double l, const Shrunk& c) {
  const double t = gap / l;
  const double angle = safe_asin(t);
  return kOneOverPiSq * l * l / c.area * angle + 3.0 * kOneOverPiSq * coef * l * cosine_of_asin(t) -
         2.0 * kOneOverPiSq * gap * gap / c.area * (pi / 2 - angle);
}

double branch_3d(RegimeKind branch, double l, const Shrunk& c, const QuadratureSettings& settings) {
  const double coef_x = c.height / c.area;  // (b-s)/b * 1/a
  const double coef_y = c.width / c.area;   // (a-s)/a * 1/b
  switch (branch) {
    case RegimeKind::Short:
      return kFourOverPiSq * (coef_x * l + coef_y * l) - l * l / (2.0 * pi * c.area) + c.disk;
    case RegimeKind::MidB:
      return kFourOverPiSq * coef_x * l + tilted_wall(c.height, coef_y, l, pi / 2, c, settings) -
             tilted_overlap(c.height, coef_x, l, c) + c.disk;
    case RegimeKind::MidA:
      return tilted_wall(c.width, coef_x, l, pi / 2, c, settings) +
             tilted_wall(c.height, coef_y, l, pi / 2, c, settings) -
             tilted_overlap(c.width, coef_y, l, c) - tilted_overlap(c.height, coef_x, l, c) +
             l * l / (2.0 * pi * c.area) + c.disk;
    case RegimeKind::Long: {
      const double diag = c.diagonal();
      const double td = diag / l;
      const double tilt = safe_asin(td);
      const double corner = kOneOverPiSq * l * l / c.area * tilt -
                            kOneOverPiSq * l * diag / c.area * cosine_of_asin(td) -
                            2.0 * kOneOverPiSq * diag * diag / c.area * (pi / 2 - tilt);
      return tilted_wall(c.width, coef_x, l, tilt, c, settings) +
             tilted_wall(c.height, coef_y, l, tilt, c, settings) -
             tilted_overlap(c.width, coef_y, l, c) - tilted_overlap(c.height, coef_x, l, c) + corner +
             kTwoOverPi * c.interior_fraction() * (pi / 2 - tilt) + c.disk;
    }
  }
  return 1.0;
}

double certainty_length(const GridCell& grid, double sigma) { return grid.shrunk_diagonal(sigma); }

}  // namespace

double evaluate_branch(Variant variant, RegimeKind branch, double l, double sigma, const GridCell& grid,
                       const QuadratureSettings& settings) {
  if (branch != RegimeKind::Short && !(l > 0.0)) {
    throw Error(ErrorCode::DomainError, "non-short branch requires l > 0");
  }
  const Shrunk cell(grid, is_spherocylinder(variant) ? sigma : 0.0);
  if (embedding_of(variant) == Embedding::TwoD) return branch_2d(branch, l, cell);
  return branch_3d(branch, l, cell, settings);
}

Probability probability(Variant variant, double l, double sigma, const GridCell& raw_grid,
                        const QuadratureSettings& settings, const BranchEvaluator& evaluator) {
  const Shape requested =
      is_spherocylinder(variant) ? Shape{Spherocylinder{l, sigma}} : Shape{Needle{l}};
  const auto [grid, shape] = validate_and_canonicalize(raw_grid.a, raw_grid.b, requested);
  const double s = shape_diameter(shape);
  if (s >= grid.b) return {1.0, RegimeKind::Long};

  const Regime regime = classify_regime(shape, grid);
  if (embedding_of(variant) == Embedding::TwoD && l >= certainty_length(grid, s)) {
    return {1.0, regime.kind};
  }
  const double value = evaluator(variant, regime.kind, l, s, grid, settings);
  return {std::clamp(value, 0.0, 1.0), regime.kind};
}

Probability prob_2d_needle(double l, const GridCell& grid) {
  return probability(Variant::Needle2D, l, 0.0, grid);
}

Probability prob_2d_sc(double l, double sigma, const GridCell& grid) {
  return probability(Variant::Spherocylinder2D, l, sigma, grid);
}

Probability prob_3d_needle(double l, const GridCell& grid, const QuadratureSettings& settings) {
  return probability(Variant::Needle3D, l, 0.0, grid, settings);
}

Probability prob_3d_sc(double l, double sigma, const GridCell& grid, const QuadratureSettings& settings) {
  return probability(Variant::Spherocylinder3D, l, sigma, grid, settings);
}

Probability prob(const Shape& shape, Embedding embedding, double a, double b,
                 const QuadratureSettings& settings) {
  const auto [grid, canonical] = validate_and_canonicalize(a, b, shape);
  return probability(variant_of(canonical, embedding), shape_length(canonical), shape_diameter(canonical),
                     grid, settings);
}

Probability prob_bnp(const Shape& shape, Embedding embedding, double b, const QuadratureSettings& settings) {
  // Any finite a passes validation; only b and the shape matter here.
  const auto [grid, canonical] = validate_and_canonicalize(b, b, shape);
  const double l = shape_length(canonical);
  const double sigma = shape_diameter(canonical);
  if (sigma >= b) return {1.0, RegimeKind::Long};

  const double gap = b - sigma;
  const double disk = sigma / b;
  if (l <= gap) {
    const double slope = embedding == Embedding::TwoD ? kTwoOverPi : kFourOverPiSq;
    return {std::clamp(slope * l / b + disk, 0.0, 1.0), RegimeKind::Short};
  }

  const double t = clamped_ratio(gap / l);
  double value = 0.0;
  if (embedding == Embedding::TwoD) {
    value = kTwoOverPi * (l / b) * (1.0 - cosine_of_asin(t)) + kTwoOverPi * (gap / b) * (pi / 2 - std::asin(t)) +
            disk;
  } else {
    const double lo = std::asin(t);
    value = kFourOverPiSq * (l / b) - kFourOverPiSq * (l / b) * integral_F(lo, pi / 2, t, settings) +
            kFourOverPiSq * (gap / b) * integral_G(lo, pi / 2, t, settings) + disk;
  }
  return {std::clamp(value, 0.0, 1.0), RegimeKind::MidB};
}

bool ConsistencyReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const ThresholdCheck& c) {
    return c.passed;
  });
}

double consistency_tolerance(Variant variant) {
  return embedding_of(variant) == Embedding::TwoD ? 1e-12 : 1e-6;
}

ConsistencyReport check_boundary_consistency(Variant variant, const GridCell& grid, std::optional<double> sigma,
                                             const QuadratureSettings& settings,
                                             const BranchEvaluator& evaluator) {
  const bool sc = is_spherocylinder(variant);
  const double s = sc ? sigma.value_or(0.0) : 0.0;
  ConsistencyReport report{variant, grid, s, consistency_tolerance(variant), {}, {}};
  if (sc && !(s > 0.0)) {
    report.note = "spherocylinder variant requires sigma > 0";
    return report;
  }
  if (s >= grid.b) {
    report.note = "sigma >= b: probability is identically 1, no regime thresholds";
    return report;
  }

  const Thresholds th = regime_thresholds(grid, s);
  struct Boundary {
    const char* needle_name;
    const char* sc_name;
    double length;
    RegimeKind lower;
    RegimeKind upper;
  };
  const Boundary boundaries[] = {
      {"b", "b-sigma", th.short_upper, RegimeKind::Short, RegimeKind::MidB},
      {"a", "a-sigma", th.mid_b_upper, RegimeKind::MidB, RegimeKind::MidA},
      {"L", "L-hat", th.mid_a_upper, RegimeKind::MidA, RegimeKind::Long},
  };
  for (const auto& bd : boundaries) {
    ThresholdCheck check{sc ? bd.sc_name : bd.needle_name, bd.length, bd.lower, bd.upper, 0.0, 0.0, 0.0, false};
    try {
      check.lower_value = evaluator(variant, bd.lower, bd.length, s, grid, settings);
      check.upper_value = evaluator(variant, bd.upper, bd.length, s, grid, settings);
      check.difference = std::abs(check.lower_value - check.upper_value);
      check.passed = check.difference <= report.tolerance;
    } catch (const Error& e) {
      report.note = e.what();
    }
    report.checks.push_back(check);
  }
  return report;
}

double prior_literature_unit_square(double l) {
  const double inv = 1.0 / l;
  return 1.0 - (1.0 / pi) * (std::asin(inv) - std::acos(inv) + 2.0 * std::sqrt(l * l - 1.0) - l * l / 2.0 - 1.0);
}

PriorLiteratureComparison prior_literature_delta(double l) {
  if (!(l >= 1.0 && l <= std::numbers::sqrt2 + kClampSlack)) {
    throw Error(ErrorCode::DomainError, "prior-literature comparison needs 1 <= l <= sqrt(2)");
  }
  // The published expression is the unit-square MidA closed form; evaluate
  // that branch directly so l = 1 compares like for like.
  const GridCell unit{1.0, 1.0};
  const double ours = std::clamp(evaluate_branch(Variant::Needle2D, RegimeKind::MidA, l, 0.0, unit), 0.0, 1.0);
  const double prior = prior_literature_unit_square(l);
  return {ours, prior, prior - ours};
}

}  // namespace needle_lab
