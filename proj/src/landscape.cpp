// SPDX-License-Identifier: Apache-2.0
#include "needle_lab/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "parallel.hpp"

namespace needle_lab {

namespace {

constexpr double kRefineTolerance = 1e-6;

}  // namespace

std::vector<SweepRow> sweep_length(Variant variant, double a_over_b, std::optional<double> sigma_over_b,
                                   const std::vector<double>& l_over_b, const QuadratureSettings& settings,
                                   unsigned threads) {
  settings.validate();
  const bool sc = is_spherocylinder(variant);
  const double sigma = sc ? sigma_over_b.value_or(0.0) : 0.0;
  if (sc && !(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "spherocylinder sweep needs sigma/b > 0");
  if (!(a_over_b > 0.0) || std::isnan(a_over_b)) {
    throw Error(ErrorCode::NonPositiveDimension, "a/b must be positive");
  }

  auto rows = detail::parallel_map<SweepRow>(l_over_b.size(), threads, [&](std::size_t i) {
    const double l = l_over_b[i];
    if (std::isinf(a_over_b)) {
      const Shape shape = sc ? Shape{Spherocylinder{l, sigma}} : Shape{Needle{l}};
      return SweepRow{l, prob_bnp(shape, embedding_of(variant), 1.0, settings)};
    }
    if (l < 0.0) throw Error(ErrorCode::NegativeLength, "l/b must be non-negative");
    return SweepRow{l, probability(variant, l, sigma, GridCell{a_over_b, 1.0}, settings)};
  });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& x, const SweepRow& y) { return x.abscissa < y.abscissa; });
  return rows;
}

void AspectSweepSpec::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda must be > 0");
  if (!(sigma_l >= 0.0) || !std::isfinite(sigma_l)) {
    throw Error(ErrorCode::InvalidArgument, "sigma/l must be >= 0");
  }
  if (is_spherocylinder(variant) && sigma_l == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "spherocylinder sweep needs sigma/l > 0");
  }
  if (!(t_min >= 1.0) || !(t_max > t_min) || !std::isfinite(t_max)) {
    throw Error(ErrorCode::InvalidArgument, "aspect range must satisfy 1 <= t_min < t_max");
  }
  if (t_steps < 2) throw Error(ErrorCode::InvalidArgument, "t_steps must be >= 2");
}

std::vector<double> AspectSweepSpec::grid() const {
  std::vector<double> ts(static_cast<std::size_t>(t_steps));
  const double span = t_max - t_min;
  for (int i = 0; i < t_steps; ++i) {
    ts[static_cast<std::size_t>(i)] = i + 1 == t_steps ? t_max : t_min + span * i / (t_steps - 1);
  }
  return ts;
}

Probability aspect_probability(const AspectSweepSpec& spec, double t, const QuadratureSettings& settings) {
  const double l = std::sqrt(spec.lambda * t);
  const double sigma = is_spherocylinder(spec.variant) ? spec.sigma_l * l : 0.0;
  return probability(spec.variant, l, sigma, GridCell{t, 1.0}, settings);
}

std::vector<SweepRow> sweep_aspect(const AspectSweepSpec& spec, const QuadratureSettings& settings,
                                   unsigned threads) {
  spec.validate();
  settings.validate();
  const auto ts = spec.grid();
  return detail::parallel_map<SweepRow>(ts.size(), threads, [&](std::size_t i) {
    return SweepRow{ts[i], aspect_probability(spec, ts[i], settings)};
  });
}

MinimaReport find_minima(const AspectSweepSpec& spec, const QuadratureSettings& settings, unsigned threads) {
  const auto rows = sweep_aspect(spec, settings, threads);
  const auto p_at = [&](double t) { return aspect_probability(spec, t, settings).value; };
  const std::size_t n = rows.size();
  const auto value = [&](std::size_t i) { return rows[i].p.value; };

  MinimaReport report;

  // Left end: a minimum if P rises immediately to its right. Checking one
  // refinement step away catches minima narrower than the grid spacing.
  const double t0 = rows.front().abscissa;
  if (value(0) < value(1) || value(0) < p_at(t0 + kRefineTolerance)) {
    report.minima.push_back({t0, value(0), true});
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (value(i) < value(i - 1) && value(i) <= value(i + 1)) {
      const double t = golden_section_minimize(p_at, rows[i - 1].abscissa, rows[i + 1].abscissa, kRefineTolerance);
      const double p = p_at(t);
      if (p <= value(i)) {
        report.minima.push_back({t, p, false});
      } else {
        report.minima.push_back({rows[i].abscissa, value(i), false});
      }
    }
  }

  if (value(n - 1) < value(n - 2)) report.minima.push_back({rows.back().abscissa, value(n - 1), true});

  if (report.minima.empty()) {
    throw Error(ErrorCode::StructureNotFound, "no local minimum found on the aspect grid");
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < report.minima.size(); ++k) {
    if (report.minima[k].p < report.minima[best].p) best = k;
  }
  report.global_index = best;
  return report;
}

namespace {

// First lambda in [lo, hi] where pred flips from false to true.
double bisect_flip(const std::function<bool(double)>& pred, double lo, double hi, double tol, const char* what) {
  if (pred(lo) || !pred(hi)) {
    throw Error(ErrorCode::StructureNotFound, std::string("predicate '") + what + "' does not flip on the search range");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

LambdaThresholds find_lambda_thresholds(Variant variant, const QuadratureSettings& settings,
                                        const ThresholdSearch& search) {
  if (variant != Variant::Needle2D) {
    throw Error(ErrorCode::InvalidArgument, "lambda thresholds are defined for the 2d-needle variant only");
  }
  const auto minima_at = [&](double lambda) {
    AspectSweepSpec spec;
    spec.variant = variant;
    spec.lambda = lambda;
    spec.t_max = search.t_max;
    spec.t_steps = search.t_steps;
    return find_minima(spec, settings);
  };
  const auto has_unit_minimum = [](const MinimaReport& r) {
    return !r.minima.empty() && r.minima.front().at_boundary && r.minima.front().t == 1.0;
  };
  const auto interior_count = [](const MinimaReport& r) {
    return std::count_if(r.minima.begin(), r.minima.end(), [](const LocalMinimum& m) { return !m.at_boundary; });
  };

  const auto second_minimum = [&](double lambda) {
    const auto r = minima_at(lambda);
    return has_unit_minimum(r) && interior_count(r) >= 1;
  };
  const auto global_moved = [&](double lambda) {
    const auto r = minima_at(lambda);
    return r.global().t > 1.0;
  };
  const auto unit_minimum_gone = [&](double lambda) { return !has_unit_minimum(minima_at(lambda)); };

  const double tol = search.tolerance;
  LambdaThresholds out{};
  out.lambda1 = bisect_flip(second_minimum, search.lambda_lo, 0.5 * (search.lambda_lo + search.lambda_hi), tol,
                            "second minimum appears");
  out.lambda2 = bisect_flip(global_moved, search.lambda_lo, search.lambda_hi, tol, "global minimum moves");
  out.lambda3 = bisect_flip(unit_minimum_gone, search.lambda_lo, search.lambda_hi, tol, "minimum at t=1 vanishes");
  out.tolerance = tol;
  return out;
}

double psi_marginal_oracle(double l, std::optional<double> sigma, const GridCell& raw_grid,
                           const QuadratureSettings& settings, const BranchEvaluator& evaluator) {
  const double s = sigma.value_or(0.0);
  const Shape requested = s > 0.0 ? Shape{Spherocylinder{l, s}} : Shape{Needle{l}};
  const auto [grid, shape] = validate_and_canonicalize(raw_grid.a, raw_grid.b, requested);
  const double diameter = shape_diameter(shape);
  if (diameter >= grid.b) return 1.0;
  const Variant flat = diameter > 0.0 ? Variant::Spherocylinder2D : Variant::Needle2D;
  if (l == 0.0) return evaluator(flat, RegimeKind::Short, 0.0, diameter, grid, settings);

  const Thresholds th = regime_thresholds(grid, diameter);
  const double cuts[] = {th.short_upper, th.mid_b_upper, th.mid_a_upper};
  const RegimeKind kinds[] = {RegimeKind::Short, RegimeKind::MidB, RegimeKind::MidA, RegimeKind::Long};

  double total = 0.0;
  double lo = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double hi =
        k < 3 && cuts[k] < l ? std::asin(std::clamp(cuts[k] / l, 0.0, 1.0)) : std::numbers::pi / 2;
    if (hi > lo) {
      const RegimeKind kind = kinds[k];
      if (kind == RegimeKind::Long) {
        total += hi - lo;
      } else {
        total += refined_simpson(
            [&](double psi) { return evaluator(flat, kind, l * std::sin(psi), diameter, grid, settings); }, lo, hi,
            settings);
      }
    }
    lo = std::max(lo, hi);
    if (hi >= std::numbers::pi / 2) break;
  }
  return 2.0 / std::numbers::pi * total;
}

}  // namespace needle_lab
