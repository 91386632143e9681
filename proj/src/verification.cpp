// SPDX-License-Identifier: Apache-2.0
#include "needle_lab/verification.hpp"

#include <cmath>
#include <sstream>

#include "needle_lab/landscape.hpp"
#include "needle_lab/montecarlo.hpp"

namespace needle_lab {

namespace {

constexpr double kOracleTolerance = 1e-5;
constexpr double kBnpTolerance = 1e-5;
constexpr double kBnpAspect = 1e6;
constexpr double kMcSigmas = 4.0;

std::string describe(const VerifyCase& c) {
  std::ostringstream os;
  os << "a=" << c.a << " b=" << c.b;
  if (c.sigma) os << " sigma=" << *c.sigma;
  return os.str();
}

std::vector<Variant> variants_for(const VerifyCase& c) {
  std::vector<Variant> out{Variant::Needle2D, Variant::Needle3D};
  if (c.sigma.value_or(0.0) > 0.0) {
    out.push_back(Variant::Spherocylinder2D);
    out.push_back(Variant::Spherocylinder3D);
  }
  return out;
}

// One length inside each regime.
std::vector<double> probe_lengths(const GridCell& grid, double sigma) {
  const Thresholds th = regime_thresholds(grid, sigma);
  std::vector<double> out{0.5 * th.short_upper};
  if (th.mid_b_upper > th.short_upper) out.push_back(0.5 * (th.short_upper + th.mid_b_upper));
  out.push_back(0.5 * (th.mid_b_upper + th.mid_a_upper));
  out.push_back(1.5 * th.mid_a_upper);
  return out;
}

}  // namespace

std::vector<VerifyCase> default_verify_cases() {
  return {{4.0, 3.0, 0.5}, {3.0, 3.0, 0.3}, {2.0, 1.0, 0.2}, {5.0, 1.5, 0.4}};
}

std::vector<VerifyCase> parse_verify_cases(const std::string& csv_text) {
  std::vector<VerifyCase> out;
  std::istringstream in(csv_text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#' || line[first] == 'a') continue;

    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() < 2 || fields.size() > 3) {
      throw Error(ErrorCode::InvalidArgument, "grid list line " + std::to_string(line_no) + ": expected a,b[,sigma]");
    }
    try {
      VerifyCase c{std::stod(fields[0]), std::stod(fields[1]), std::nullopt};
      if (fields.size() == 3 && fields[2].find_first_not_of(" \t") != std::string::npos) {
        c.sigma = std::stod(fields[2]);
      }
      out.push_back(c);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "grid list line " + std::to_string(line_no) + ": not a number");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "grid list is empty");
  return out;
}

std::vector<CheckOutcome> run_verification(const VerifyOptions& options) {
  std::vector<CheckOutcome> out;
  const auto& eval = options.evaluator;
  const auto& settings = options.settings;

  for (const auto& c : options.cases) {
    const auto [grid, shape] =
        validate_and_canonicalize(c.a, c.b, c.sigma ? Shape{Spherocylinder{1.0, *c.sigma}} : Shape{Needle{1.0}});
    const double sigma = shape_diameter(shape);
    const VerifyCase canonical{grid.a, grid.b, sigma > 0.0 ? std::optional<double>(sigma) : std::nullopt};

    for (const Variant v : variants_for(canonical)) {
      const double s = is_spherocylinder(v) ? sigma : 0.0;
      const std::string where =
          describe({grid.a, grid.b, s > 0.0 ? std::optional<double>(s) : std::nullopt});
      const auto report = check_boundary_consistency(v, grid, s > 0.0 ? std::optional<double>(s) : std::nullopt,
                                                     settings, eval);
      if (report.checks.empty()) {
        out.push_back({"boundary", std::string(to_string(v)) + " " + where + ": " + report.note, 0.0,
                       report.tolerance, false});
      }
      for (const auto& check : report.checks) {
        out.push_back({"boundary", std::string(to_string(v)) + " " + where + " l=" + check.name, check.difference,
                       report.tolerance, check.passed});
      }

      for (const double l : probe_lengths(grid, s)) {
        const std::string probe = std::string(to_string(v)) + " " + where + " l=" + std::to_string(l);
        if (embedding_of(v) == Embedding::ThreeD) {
          const double closed = probability(v, l, s, grid, settings, eval).value;
          const double oracle =
              psi_marginal_oracle(l, s > 0.0 ? std::optional<double>(s) : std::nullopt, grid, settings, eval);
          const double dev = std::abs(closed - oracle);
          out.push_back({"psi-marginal", probe, dev, kOracleTolerance, dev <= kOracleTolerance});
        }
        const GridCell wide{kBnpAspect * grid.b, grid.b};
        const Shape probe_shape = s > 0.0 ? Shape{Spherocylinder{l, s}} : Shape{Needle{l}};
        const double finite = probability(v, l, s, wide, settings, eval).value;
        const double limit = prob_bnp(probe_shape, embedding_of(v), grid.b, settings).value;
        const double gap = std::abs(finite - limit);
        out.push_back({"bnp-limit", probe, gap, kBnpTolerance, gap <= kBnpTolerance});
      }
    }
  }

  // Unit square, a < l <= L: the regime where the earlier published
  // coefficient differs from ours. Monte Carlo decides.
  const GridCell unit{1.0, 1.0};
  const double l = 1.3;
  const double analytic = probability(Variant::Needle2D, l, 0.0, unit, settings, eval).value;
  const SimResult mc = estimate(Needle{l}, Embedding::TwoD, unit, options.mc_samples, {options.seed, 0},
                                options.threads);
  const double dev = std::abs(mc.p_hat - analytic);
  const double tol = kMcSigmas * std::max(mc.std_err, 1.0 / static_cast<double>(mc.n_all));
  out.push_back({"prior-literature", "2d-needle a=1 b=1 l=1.3 vs Monte Carlo", dev, tol, dev <= tol});
  return out;
}

BranchEvaluator prior_coefficient_fault() {
  return [](Variant v, RegimeKind k, double l, double sigma, const GridCell& grid, const QuadratureSettings& q) {
    const double value = evaluate_branch(v, k, l, sigma, grid, q);
    if (v == Variant::Needle2D && k == RegimeKind::MidA) return 0.5 * (1.0 + value);
    return value;
  };
}

}  // namespace needle_lab
