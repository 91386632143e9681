#include <doctest.h>

#include <cmath>
#include <numbers>

#include "needle_lab/landscape.hpp"
#include "needle_lab/montecarlo.hpp"
#include "oracles.hpp"

using namespace needle_lab;
using std::numbers::pi;

namespace {

AspectSweepSpec needle_2d(double lambda) {
  AspectSweepSpec s;
  s.variant = Variant::Needle2D;
  s.lambda = lambda;
  return s;
}

}  // namespace

TEST_CASE("length sweep examples") {
  const auto bnp = sweep_length(Variant::Needle2D, INFINITY, std::nullopt, {1.0});
  CHECK(bnp.at(0).p.value == doctest::Approx(2 / pi).epsilon(1e-14));

  const auto square = sweep_length(Variant::Needle2D, 1.0, std::nullopt, {1.0, std::sqrt(2.0), 1.6, 2.0, 3.0});
  for (std::size_t i = 1; i < square.size(); ++i) CHECK(square[i].p.value == 1.0);
  CHECK(square[0].p.value < 1.0);

  const auto tall = sweep_length(Variant::Needle3D, 1.0, std::nullopt, {10.0});
  const double p = tall.at(0).p.value;
  CHECK(p < 1.0);
  const auto mc = estimate(Needle{10}, Embedding::ThreeD, {1, 1}, 10'000'000, {17, 0}, 0);
  CHECK(std::abs(mc.p_hat - p) <= 4 * oracle::binomial_se(p, 1e7));
}

TEST_CASE("length sweeps come back sorted and match the point API") {
  const std::vector<double> ls{2.5, 0.25, 1.0, 0.5};
  const auto rows = sweep_length(Variant::Spherocylinder3D, 1.5, 0.2, ls, {}, 3);
  REQUIRE(rows.size() == ls.size());
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].abscissa < rows[i].abscissa);
  for (const auto& r : rows) CHECK(r.p.value == prob_3d_sc(r.abscissa, 0.2, {1.5, 1}).value);

  const auto inf_rows = sweep_length(Variant::Spherocylinder2D, INFINITY, 0.2, {0.5, 1.5});
  for (const auto& r : inf_rows) {
    CHECK(r.p.value == prob_bnp(Spherocylinder{r.abscissa, 0.2}, Embedding::TwoD, 1).value);
  }
  CHECK_THROWS_AS(sweep_length(Variant::Spherocylinder2D, 2.0, std::nullopt, {1.0}), Error);
  CHECK_THROWS_AS(sweep_length(Variant::Needle2D, -1.0, std::nullopt, {1.0}), Error);
}

TEST_CASE("aspect sweep examples") {
  const auto spec = needle_2d(1.0);
  CHECK(aspect_probability(spec, 1.0).value == doctest::Approx(3 / pi).epsilon(1e-14));
  CHECK(aspect_probability(needle_2d(1e-10), 3.0).value < 1e-4);

  AspectSweepSpec s3;
  s3.variant = Variant::Needle3D;
  s3.lambda = 1.5;
  CHECK(std::abs(aspect_probability(s3, 1.0).value - 0.733559) <= 1e-4);
  CHECK(std::abs(aspect_probability(s3, 1.605).value - 0.732816) <= 1e-4);
}

TEST_CASE("aspect sweeps depend only on lambda, sigma/l and t") {
  AspectSweepSpec spec;
  spec.variant = Variant::Spherocylinder2D;
  spec.lambda = 0.9;
  spec.sigma_l = 0.1;
  for (const double t : {1.0, 1.7, 3.3}) {
    const double p = aspect_probability(spec, t).value;
    for (const double b : {0.01, 2.0, 50.0}) {
      const double l = std::sqrt(spec.lambda * t) * b;
      const double scaled = prob(Spherocylinder{l, spec.sigma_l * l}, Embedding::TwoD, t * b, b).value;
      CHECK(std::abs(scaled - p) <= 1e-12);
    }
  }
}

TEST_CASE("aspect sweep grid and validation") {
  AspectSweepSpec spec = needle_2d(0.8);
  spec.t_steps = 11;
  spec.t_max = 3;
  const auto rows = sweep_aspect(spec, {}, 4);
  REQUIRE(rows.size() == 11);
  CHECK(rows.front().abscissa == 1.0);
  CHECK(rows.back().abscissa == 3.0);
  CHECK(rows[5].abscissa == doctest::Approx(2.0));

  auto bad = spec;
  bad.t_min = 0.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = spec;
  bad.lambda = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = spec;
  bad.t_steps = 1;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = spec;
  bad.variant = Variant::Spherocylinder3D;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("flat derivative at t = 1") {
  for (const double lambda : {0.5, 1.2}) {
    const double h = 1e-4;
    const double l_plus = std::sqrt(lambda * (1 + h));
    const double l_minus = std::sqrt(lambda * (1 - h));
    // t < 1 is the same cell seen with the axes swapped
    const double up = prob(Needle{l_plus}, Embedding::TwoD, 1 + h, 1).value;
    const double down = prob(Needle{l_minus}, Embedding::TwoD, 1 - h, 1).value;
    CHECK(std::abs((up - down) / (2 * h)) <= 1e-4);
  }
}

TEST_CASE("minima examples") {
  const auto one = find_minima(needle_2d(0.5));
  REQUIRE(one.minima.size() == 1);
  CHECK(one.minima[0].t == 1.0);
  CHECK(one.minima[0].at_boundary);

  const auto two = find_minima(needle_2d(0.9));
  REQUIRE(two.minima.size() == 2);
  CHECK(two.minima[0].t == 1.0);
  CHECK(two.global().t > 1.0);
  CHECK_FALSE(two.global().at_boundary);
}

TEST_CASE("number of minima across the lambda scenario") {
  const std::pair<double, std::size_t> expected[] = {{0.5, 1}, {0.8, 2}, {0.9, 2}, {1.2, 1}};
  for (const auto& [lambda, count] : expected) {
    INFO("lambda=", lambda);
    CHECK(find_minima(needle_2d(lambda)).minima.size() == count);
  }
  const auto past = find_minima(needle_2d(1.2));
  CHECK(past.global().t > 1.0);
}

TEST_CASE("3d needle landscape minimum") {
  AspectSweepSpec spec;
  spec.variant = Variant::Needle3D;
  spec.lambda = 1.5;
  spec.t_max = 3.0;
  spec.t_steps = 41;
  const auto report = find_minima(spec);
  CHECK(std::abs(report.global().t - 1.605) <= 5e-3);
  CHECK(std::abs(report.global().p - 0.732816) <= 1e-4);
}

TEST_CASE("golden section search") {
  const double x = golden_section_minimize([](double t) { return (t - 1.2345) * (t - 1.2345); }, 0, 3, 1e-8);
  CHECK(x == doctest::Approx(1.2345).epsilon(1e-7));
}

TEST_CASE("lambda thresholds") {
  const auto th = find_lambda_thresholds(Variant::Needle2D);
  CHECK(std::abs(th.lambda1 - 0.771) <= 0.005);
  CHECK(std::abs(th.lambda2 - 0.830) <= 0.005);
  CHECK(std::abs(th.lambda3 - 0.999) <= 0.005);
  CHECK(th.lambda1 < th.lambda2);
  CHECK(th.lambda2 < th.lambda3);
  CHECK(th.tolerance == 1e-4);
  CHECK_THROWS_AS(find_lambda_thresholds(Variant::Needle3D), Error);

  ThresholdSearch narrow;
  narrow.lambda_lo = 0.9;
  narrow.lambda_hi = 0.95;
  CHECK_THROWS_AS(find_lambda_thresholds(Variant::Needle2D, {}, narrow), Error);
}

TEST_CASE("psi-marginal oracle examples") {
  const double s6 = std::sqrt(6.0);
  CHECK(psi_marginal_oracle(0, std::nullopt, {4, 3}) == 0.0);
  CHECK(std::abs(psi_marginal_oracle(3, std::nullopt, {s6, s6}) - 0.733559) <= 1e-4);
  CHECK(std::abs(psi_marginal_oracle(5, 0.3, {3, 3}) - prob_3d_sc(5, 0.3, {3, 3}).value) <= 1e-5);
  CHECK(psi_marginal_oracle(0, 0.5, {4, 3}) == doctest::Approx(oracle::disk(0.5, 4, 3)));
}

TEST_CASE("psi-marginal oracle on an independent outer rule") {
  // Outer trapezoid over psi of the 2D closed forms, no splitting.
  const GridCell g{2, 1};
  for (const double l : {0.7, 1.6, 2.5}) {
    const double outer = oracle::trapezoid(
        [&](double psi) { return prob_2d_needle(l * std::sin(psi), g).value; }, 0, pi / 2, 200'000);
    CHECK(std::abs(2 / pi * outer - prob_3d_needle(l, g).value) <= 1e-6);
  }
}
