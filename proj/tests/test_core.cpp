#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "needle_lab/core.hpp"

using namespace needle_lab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected needle_lab::Error");
  return ErrorCode::InvalidArgument;
}

bool contains(const Regime& r, double l) {
  const bool above = r.kind == RegimeKind::Short ? l >= r.lower : l > r.lower;
  return above && l <= r.upper;
}

}  // namespace

TEST_CASE("canonicalization swaps the axes so that a >= b") {
  const auto [grid, shape] = validate_and_canonicalize(2, 5, Needle{1});
  CHECK(grid.a == 5);
  CHECK(grid.b == 2);
  CHECK(std::holds_alternative<Needle>(shape));
  CHECK(shape_length(shape) == 1);
}

TEST_CASE("zero-diameter spherocylinder becomes a needle") {
  const auto [grid, shape] = validate_and_canonicalize(5, 2, Spherocylinder{1, 0});
  CHECK(grid.a == 5);
  CHECK(grid.b == 2);
  REQUIRE(std::holds_alternative<Needle>(shape));
  CHECK(shape_length(shape) == 1);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK(code_of([] { validate_and_canonicalize(5, 2, Needle{-1}); }) == ErrorCode::NegativeLength);
  CHECK(code_of([] { validate_and_canonicalize(0, 2, Needle{1}); }) == ErrorCode::NonPositiveDimension);
  CHECK(code_of([] { validate_and_canonicalize(5, -2, Needle{1}); }) == ErrorCode::NonPositiveDimension);
  CHECK(code_of([] { validate_and_canonicalize(5, 2, Spherocylinder{1, -0.1}); }) ==
        ErrorCode::NonPositiveDimension);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(code_of([&] { validate_and_canonicalize(nan, 2, Needle{1}); }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([&] { validate_and_canonicalize(inf, 2, Needle{1}); }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([&] { validate_and_canonicalize(5, 2, Needle{nan}); }) == ErrorCode::NonFiniteValue);
}

TEST_CASE("grid diagonals") {
  const GridCell g{4, 3};
  CHECK(g.diagonal() == doctest::Approx(5).epsilon(1e-15));
  CHECK(g.shrunk_diagonal(0.5) == doctest::Approx(std::sqrt(3.5 * 3.5 + 2.5 * 2.5)).epsilon(1e-15));
}

TEST_CASE("regime classification examples") {
  const GridCell g{4, 3};

  const Regime r1 = classify_regime(Needle{1}, g);
  CHECK(r1.kind == RegimeKind::Short);
  CHECK(r1.lower == 0);
  CHECK(r1.upper == 3);

  // l = L lands in the lower regime.
  CHECK(classify_regime(Needle{5}, g).kind == RegimeKind::MidA);
  CHECK(classify_regime(Needle{5.000001}, g).kind == RegimeKind::Long);
  CHECK(classify_regime(Needle{3}, g).kind == RegimeKind::Short);
  CHECK(classify_regime(Needle{4}, g).kind == RegimeKind::MidB);

  CHECK(classify_regime(Spherocylinder{2.5, 0.5}, g).kind == RegimeKind::Short);
  CHECK(classify_regime(Spherocylinder{3.5, 0.5}, g).kind == RegimeKind::MidB);
  CHECK(classify_regime(Spherocylinder{3.6, 0.5}, g).kind == RegimeKind::MidA);

  const Regime lng = classify_regime(Needle{9}, g);
  CHECK(lng.kind == RegimeKind::Long);
  CHECK(std::isinf(lng.upper));
}

TEST_CASE("square cells never report the empty MidB regime") {
  const GridCell g{2, 2};
  for (double l = 0; l < 4; l += 0.01) CHECK(classify_regime(Needle{l}, g).kind != RegimeKind::MidB);
  CHECK(classify_regime(Needle{2}, g).kind == RegimeKind::Short);
  CHECK(classify_regime(Needle{2.0001}, g).kind == RegimeKind::MidA);
}

TEST_CASE("sigma >= b cannot be classified") {
  CHECK(code_of([] { classify_regime(Spherocylinder{1, 3}, GridCell{4, 3}); }) == ErrorCode::SigmaExceedsCell);
  CHECK(code_of([] { classify_regime(Spherocylinder{1, 3.5}, GridCell{4, 3}); }) == ErrorCode::SigmaExceedsCell);
}

TEST_CASE("regimes partition the half line and are monotone in l") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double b = 0.2 + 3 * u(gen);
    const double a = b * (1 + 3 * u(gen));
    const double sigma = trial % 2 ? 0.9 * b * u(gen) : 0.0;
    const GridCell g{a, b};
    const auto th = regime_thresholds(g, sigma);
    CHECK(th.short_upper <= th.mid_b_upper);
    CHECK(th.mid_b_upper < th.mid_a_upper);

    int previous = 0;
    for (double l = 0; l < 1.3 * th.mid_a_upper; l += th.mid_a_upper / 97) {
      const Shape s = sigma > 0 ? Shape{Spherocylinder{l, sigma}} : Shape{Needle{l}};
      const Regime r = classify_regime(s, g);
      CHECK(contains(r, l));
      // exactly one of the four intervals holds l
      const double bounds[] = {th.short_upper, th.mid_b_upper, th.mid_a_upper};
      int hits = (l <= bounds[0]) + (l > bounds[0] && l <= bounds[1]) + (l > bounds[1] && l <= bounds[2]) +
                 (l > bounds[2]);
      CHECK(hits == 1);
      CHECK(static_cast<int>(r.kind) >= previous);
      previous = static_cast<int>(r.kind);
    }
  }
}

TEST_CASE("canonicalization is idempotent") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int i = 0; i < 100; ++i) {
    const Shape s = i % 3 ? Shape{Spherocylinder{u(gen), i % 2 ? 0.0 : 0.05 * u(gen)}} : Shape{Needle{u(gen)}};
    const auto [g1, s1] = validate_and_canonicalize(u(gen), u(gen), s);
    const auto [g2, s2] = validate_and_canonicalize(g1.a, g1.b, s1);
    CHECK(g1.a == g2.a);
    CHECK(g1.b == g2.b);
    CHECK(s1.index() == s2.index());
    CHECK(shape_length(s1) == shape_length(s2));
    CHECK(shape_diameter(s1) == shape_diameter(s2));
  }
}

TEST_CASE("variant names round-trip") {
  for (const Variant v : {Variant::Needle2D, Variant::Spherocylinder2D, Variant::Needle3D, Variant::Spherocylinder3D}) {
    CHECK(parse_variant(to_string(v)) == v);
  }
  CHECK(code_of([] { parse_variant("4d-needle"); }) == ErrorCode::InvalidArgument);
  CHECK(variant_of(Needle{1}, Embedding::ThreeD) == Variant::Needle3D);
  CHECK(variant_of(Spherocylinder{1, 0.1}, Embedding::TwoD) == Variant::Spherocylinder2D);
}
