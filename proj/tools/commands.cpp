// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>

#include "needle_lab/analytic.hpp"
#include "needle_lab/landscape.hpp"
#include "needle_lab/montecarlo.hpp"
#include "needle_lab/verification.hpp"

namespace needle_lab::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VariantChoice {
  Variant variant;
  bool single_family;
};

VariantChoice parse_variant_flag(const std::string& name) {
  constexpr std::string_view prefix = "bnp-";
  if (name.rfind(prefix, 0) == 0) return {parse_variant(name.substr(prefix.size())), true};
  return {parse_variant(name), false};
}

double parse_length(const std::string& text, const char* flag) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "infinity" || lower == "+inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw UsageError(std::string(flag) + ": not a number: '" + text + "'");
  return value;
}

json number_or_inf(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

struct QuadFlags {
  double epsilon = QuadratureSettings{}.epsilon;
  int n_unit = QuadratureSettings{}.n_unit;
  int max_refinements = QuadratureSettings{}.max_refinements;

  void attach(CLI::App* cmd) {
    cmd->add_option("--quad-eps", epsilon, "Simpson refinement stopping tolerance")->capture_default_str();
    cmd->add_option("--quad-nunit", n_unit, "Simpson intervals per unit length")->capture_default_str();
    cmd->add_option("--quad-max-refinements", max_refinements, "Refinement cap")->capture_default_str();
  }

  QuadratureSettings settings() const {
    QuadratureSettings s{n_unit, epsilon, max_refinements};
    s.validate();
    return s;
  }

  json to_json() const {
    return json{{"n_unit", n_unit}, {"epsilon", epsilon}, {"max_refinements", max_refinements}};
  }
};

struct ShapeFlags {
  std::string variant = "2d-needle";
  double l = 0.0;
  std::optional<double> sigma;
  std::string a = "1";
  double b = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--variant", variant, "2d-needle | 2d-sc | 3d-needle | 3d-sc | bnp-<variant>")->required();
    cmd->add_option("--l", l, "Shape length")->required();
    cmd->add_option("--sigma", sigma, "Spherocylinder diameter");
    cmd->add_option("--a", a, "Cell width (or 'inf' for a single line family)");
    cmd->add_option("--b", b, "Cell height")->required();
  }

  struct Resolved {
    Variant variant;
    bool single_family;
    Shape shape;
    double a;
  };

  Resolved resolve() const {
    const VariantChoice choice = parse_variant_flag(variant);
    const double width = choice.single_family ? std::numeric_limits<double>::infinity() : parse_length(a, "--a");
    const bool sc = is_spherocylinder(choice.variant);
    if (sc && !sigma) throw UsageError("--sigma is required for spherocylinder variants");
    if (!sc && sigma) throw UsageError("--sigma only applies to spherocylinder variants");
    Shape shape = sc ? Shape{Spherocylinder{l, *sigma}} : Shape{Needle{l}};
    return {choice.variant, choice.single_family || std::isinf(width), shape, width};
  }

  json inputs() const {
    json j{{"variant", variant}, {"l", l}};
    j["sigma"] = sigma ? json(*sigma) : json(nullptr);
    const VariantChoice choice = parse_variant_flag(variant);
    j["a"] = choice.single_family ? json("inf") : number_or_inf(parse_length(a, "--a"));
    j["b"] = b;
    return j;
  }
};

Probability evaluate(const ShapeFlags::Resolved& r, double b, const QuadratureSettings& q) {
  const Embedding embedding = embedding_of(r.variant);
  if (r.single_family) return prob_bnp(r.shape, embedding, b, q);
  return prob(r.shape, embedding, r.a, b, q);
}

SimResult simulate(const ShapeFlags::Resolved& r, double b, std::uint64_t n, const RngSpec& rng,
                   unsigned threads) {
  const Embedding embedding = embedding_of(r.variant);
  if (r.single_family) return estimate_single_family(r.shape, embedding, b, n, rng, threads);
  return estimate(r.shape, embedding, GridCell{r.a, b}, n, rng, threads);
}

void write_json(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

// ---------------------------------------------------------------------------

struct ProbCommand {
  ShapeFlags shape;
  QuadFlags quad;

  int run(std::ostream& out) const {
    const auto resolved = shape.resolve();
    const auto p = evaluate(resolved, shape.b, quad.settings());
    write_json(out, json{{"p", p.value},
                         {"regime", std::string(to_string(p.regime))},
                         {"inputs", shape.inputs()},
                         {"quad_settings", quad.to_json()}});
    return kExitOk;
  }
};

struct SimulateCommand {
  ShapeFlags shape;
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  unsigned threads = 0;

  int run(std::ostream& out) const {
    const auto resolved = shape.resolve();
    if (n == 0) throw UsageError("--n must be >= 1");
    const RngSpec rng{seed, stream};
    const SimResult r = simulate(resolved, shape.b, n, rng, threads == 0 ? default_thread_count() : threads);
    write_json(out, json{{"p_hat", r.p_hat},
                         {"std_err", r.std_err},
                         {"n_all", r.n_all},
                         {"n_coll", r.n_coll},
                         {"seed", r.seed},
                         {"stream_index", r.stream_index},
                         {"rng_algorithm", r.rng_algorithm},
                         {"inputs", shape.inputs()}});
    return kExitOk;
  }
};

struct SweepCommand {
  std::string mode = "length";
  std::string variant = "2d-needle";
  // length mode
  std::string a_over_b = "1";
  std::optional<double> sigma_over_b;
  std::vector<double> l_values;
  double l_min = 0.25;
  double l_max = 3.0;
  int l_count = 12;
  // aspect mode
  double lambda = 1.0;
  double sigma_over_l = 0.0;
  double t_min = 1.0;
  double t_max = 8.0;
  int t_steps = 141;
  // output
  std::string out_path = "-";
  std::uint64_t with_mc = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  QuadFlags quad;

  std::vector<double> lengths() const {
    if (!l_values.empty()) return l_values;
    if (l_count < 1) throw UsageError("--l-count must be >= 1");
    std::vector<double> out;
    for (int i = 0; i < l_count; ++i) {
      out.push_back(l_count == 1 ? l_min : l_min + (l_max - l_min) * i / (l_count - 1));
    }
    return out;
  }

  int run(std::ostream& out) const {
    const auto settings = quad.settings();
    const unsigned workers = threads == 0 ? default_thread_count() : threads;
    const VariantChoice choice = parse_variant_flag(variant);
    const bool sc = is_spherocylinder(choice.variant);

    std::vector<SweepRow> rows;
    // Maps a row to the shape and cell used for its Monte Carlo column.
    std::function<ShapeFlags::Resolved(const SweepRow&)> mc_setup;

    if (mode == "length") {
      const double ratio = choice.single_family ? std::numeric_limits<double>::infinity()
                                                : parse_length(a_over_b, "--a-over-b");
      if (sc && !sigma_over_b) throw UsageError("--sigma-over-b is required for spherocylinder variants");
      rows = sweep_length(choice.variant, ratio, sigma_over_b, lengths(), settings, workers);
      mc_setup = [&, ratio](const SweepRow& row) {
        const Shape s = sc ? Shape{Spherocylinder{row.abscissa, *sigma_over_b}} : Shape{Needle{row.abscissa}};
        return ShapeFlags::Resolved{choice.variant, std::isinf(ratio), s, ratio};
      };
    } else if (mode == "aspect") {
      if (choice.single_family) throw UsageError("aspect sweeps need a finite cell");
      AspectSweepSpec spec{choice.variant, lambda, sigma_over_l, t_min, t_max, t_steps};
      rows = sweep_aspect(spec, settings, workers);
      mc_setup = [&, spec](const SweepRow& row) {
        const double l = std::sqrt(spec.lambda * row.abscissa);
        const Shape s = sc ? Shape{Spherocylinder{l, spec.sigma_l * l}} : Shape{Needle{l}};
        return ShapeFlags::Resolved{choice.variant, false, s, row.abscissa};
      };
    } else {
      throw UsageError("--mode must be 'length' or 'aspect'");
    }

    std::ofstream file;
    if (out_path != "-") {
      file.open(out_path);
      if (!file) throw UsageError("cannot open '" + out_path + "' for writing");
    }
    std::ostream& csv = out_path == "-" ? out : file;

    csv << (with_mc > 0 ? "abscissa,p_analytic,p_mc,std_err,regime\n" : "abscissa,p_analytic,regime\n");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      csv << format_double(row.abscissa) << ',' << format_double(row.p.value);
      if (with_mc > 0) {
        const SimResult r = simulate(mc_setup(row), 1.0, with_mc, RngSpec{seed, i}, workers);
        csv << ',' << format_double(r.p_hat) << ',' << format_double(r.std_err);
      }
      csv << ',' << to_string(row.p.regime) << '\n';
    }
    return kExitOk;
  }
};

struct VerifyCommand {
  std::string grid_list;
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t seed = VerifyOptions{}.seed;
  unsigned threads = 0;
  std::string inject_fault = "none";
  QuadFlags quad;

  int run(std::ostream& out, std::ostream& err) const {
    VerifyOptions options;
    options.settings = quad.settings();
    options.mc_samples = mc_samples;
    options.seed = seed;
    options.threads = threads == 0 ? default_thread_count() : threads;
    if (!grid_list.empty()) {
      std::ifstream in(grid_list);
      if (!in) throw UsageError("cannot read grid list '" + grid_list + "'");
      std::stringstream buffer;
      buffer << in.rdbuf();
      options.cases = parse_verify_cases(buffer.str());
    }
    if (inject_fault == "prior-coefficient") {
      options.evaluator = prior_coefficient_fault();
    } else if (inject_fault != "none") {
      throw UsageError("--inject-fault must be 'none' or 'prior-coefficient'");
    }

    const auto outcomes = run_verification(options);
    const bool all_passed =
        std::all_of(outcomes.begin(), outcomes.end(), [](const CheckOutcome& c) { return c.passed; });

    json checks = json::array();
    err << std::left << std::setw(18) << "suite" << std::setw(64) << "check" << std::setw(14) << "deviation"
        << std::setw(12) << "tolerance" << "result\n";
    for (const auto& c : outcomes) {
      err << std::setw(18) << c.suite << std::setw(64) << c.name << std::setw(14) << std::setprecision(3)
          << std::scientific << c.deviation << std::setw(12) << c.tolerance << (c.passed ? "PASS" : "FAIL") << '\n';
      err << std::defaultfloat;
      checks.push_back({{"suite", c.suite},
                        {"name", c.name},
                        {"deviation", c.deviation},
                        {"tolerance", c.tolerance},
                        {"passed", c.passed}});
    }
    const auto failures = std::count_if(outcomes.begin(), outcomes.end(), [](const CheckOutcome& c) { return !c.passed; });
    err << outcomes.size() << " checks, " << failures << " failed\n";

    write_json(out, json{{"passed", all_passed},
                         {"fault", inject_fault},
                         {"checks", checks},
                         {"quad_settings", quad.to_json()}});
    return all_passed ? kExitOk : kExitVerifyFailed;
  }
};

struct ThresholdsCommand {
  std::string variant = "2d-needle";
  ThresholdSearch search;

  int run(std::ostream& out) const {
    const Variant v = parse_variant(variant);
    if (v != Variant::Needle2D) throw UsageError("thresholds are only defined for --variant 2d-needle");
    const auto th = find_lambda_thresholds(v, QuadratureSettings{}, search);
    write_json(out, json{{"lambda1", th.lambda1},
                         {"lambda2", th.lambda2},
                         {"lambda3", th.lambda3},
                         {"tolerance", th.tolerance},
                         {"search",
                          {{"lambda_lo", search.lambda_lo},
                           {"lambda_hi", search.lambda_hi},
                           {"t_max", search.t_max},
                           {"t_steps", search.t_steps}}}});
    return kExitOk;
  }
};

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"needle_lab: line-grid intersection probabilities for needles and spherocylinders"};
  app.require_subcommand(1);

  ProbCommand prob_cmd;
  auto* prob_app = app.add_subcommand("prob", "Closed-form intersection probability");
  prob_cmd.shape.attach(prob_app);
  prob_cmd.quad.attach(prob_app);

  SimulateCommand sim_cmd;
  auto* sim_app = app.add_subcommand("simulate", "Monte Carlo estimate of the intersection probability");
  sim_cmd.shape.attach(sim_app);
  sim_app->add_option("--n", sim_cmd.n, "Number of trials")->capture_default_str();
  sim_app->add_option("--seed", sim_cmd.seed, "Generator seed")->capture_default_str();
  sim_app->add_option("--stream", sim_cmd.stream, "Generator stream index")->capture_default_str();
  sim_app->add_option("--threads", sim_cmd.threads, "Worker threads (default NEEDLE_LAB_THREADS or all cores)");

  SweepCommand sweep_cmd;
  auto* sweep_app = app.add_subcommand("sweep", "CSV sweep over l/b or a/b");
  sweep_app->add_option("--mode", sweep_cmd.mode, "length | aspect")->capture_default_str();
  sweep_app->add_option("--variant", sweep_cmd.variant, "Problem variant")->capture_default_str();
  sweep_app->add_option("--a-over-b", sweep_cmd.a_over_b, "Aspect ratio for length sweeps ('inf' allowed)")
      ->capture_default_str();
  sweep_app->add_option("--sigma-over-b", sweep_cmd.sigma_over_b, "Diameter in units of b (length sweeps)");
  sweep_app->add_option("--l-values", sweep_cmd.l_values, "Explicit l/b values")->delimiter(',');
  sweep_app->add_option("--l-min", sweep_cmd.l_min)->capture_default_str();
  sweep_app->add_option("--l-max", sweep_cmd.l_max)->capture_default_str();
  sweep_app->add_option("--l-count", sweep_cmd.l_count)->capture_default_str();
  sweep_app->add_option("--lambda", sweep_cmd.lambda, "l^2/(ab) for aspect sweeps")->capture_default_str();
  sweep_app->add_option("--sigma-over-l", sweep_cmd.sigma_over_l, "sigma/l for aspect sweeps")->capture_default_str();
  sweep_app->add_option("--t-min", sweep_cmd.t_min)->capture_default_str();
  sweep_app->add_option("--t-max", sweep_cmd.t_max)->capture_default_str();
  sweep_app->add_option("--t-steps", sweep_cmd.t_steps)->capture_default_str();
  sweep_app->add_option("--out", sweep_cmd.out_path, "CSV path, '-' for stdout")->capture_default_str();
  sweep_app->add_option("--with-mc", sweep_cmd.with_mc, "Append Monte Carlo columns with this many trials");
  sweep_app->add_option("--seed", sweep_cmd.seed, "Generator seed for --with-mc")->capture_default_str();
  sweep_app->add_option("--threads", sweep_cmd.threads, "Worker threads");
  sweep_cmd.quad.attach(sweep_app);

  VerifyCommand verify_cmd;
  auto* verify_app = app.add_subcommand("verify", "Run the built-in consistency and oracle checks");
  verify_app->add_option("--grid-list", verify_cmd.grid_list, "CSV of a,b[,sigma] rows");
  verify_app->add_option("--mc-samples", verify_cmd.mc_samples)->capture_default_str();
  verify_app->add_option("--seed", verify_cmd.seed)->capture_default_str();
  verify_app->add_option("--threads", verify_cmd.threads);
  verify_app->add_option("--inject-fault", verify_cmd.inject_fault, "none | prior-coefficient (self-test)")
      ->capture_default_str();
  verify_cmd.quad.attach(verify_app);

  ThresholdsCommand thresholds_cmd;
  auto* thresholds_app = app.add_subcommand("thresholds", "Locate the lambda* transitions of the aspect landscape");
  thresholds_app->add_option("--variant", thresholds_cmd.variant)->capture_default_str();
  thresholds_app->add_option("--tolerance", thresholds_cmd.search.tolerance)->capture_default_str();
  thresholds_app->add_option("--lambda-lo", thresholds_cmd.search.lambda_lo)->capture_default_str();
  thresholds_app->add_option("--lambda-hi", thresholds_cmd.search.lambda_hi)->capture_default_str();
  thresholds_app->add_option("--t-max", thresholds_cmd.search.t_max)->capture_default_str();
  thresholds_app->add_option("--t-steps", thresholds_cmd.search.t_steps)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (prob_app->parsed()) return prob_cmd.run(out);
    if (sim_app->parsed()) return sim_cmd.run(out);
    if (sweep_app->parsed()) return sweep_cmd.run(out);
    if (verify_app->parsed()) return verify_cmd.run(out, err);
    if (thresholds_app->parsed()) return thresholds_cmd.run(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace needle_lab::cli
