#include <doctest.h>

#include <cmath>
#include <vector>

#include "riskpde/errors.hpp"
#include "riskpde/fields.hpp"
#include "riskpde/mesh.hpp"
#include "riskpde/rng.hpp"
#include "riskpde/stochastic.hpp"

using namespace riskpde;

TEST_SUITE("stochastic") {

TEST_CASE("field model positivity margin") {
  CHECK(build_field_model(1.0, {0.3, 0.1}).positivity_margin() == doctest::Approx(0.6));
  CHECK(build_field_model(1.0, {}).positivity_margin() == doctest::Approx(1.0));
  CHECK_THROWS_AS(build_field_model(1.0, {0.7, 0.5}), PositivityViolation);
  CHECK_THROWS_AS(build_field_model(1.0, {0.6, 0.4}), PositivityViolation); // margin 0
  CHECK_THROWS_AS(build_field_model(-1.0, {}), PositivityViolation);
}

TEST_CASE("two-point rule") {
  const CollocationGrid g = build_collocation_grid(1, 2);
  REQUIRE(g.size() == 2);
  REQUIRE(g.dim() == 1);
  const double r = 1.0 / std::sqrt(3.0);
  CHECK(g.node(0)[0] == doctest::Approx(-r).epsilon(1e-15));
  CHECK(g.node(1)[0] == doctest::Approx(r).epsilon(1e-15));
  CHECK(g.weight(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.weight(1) == doctest::Approx(0.5).epsilon(1e-15));
  // degree-3 exactness: integrates xi^2 to its uniform mean 1/3
  double second = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q)
    second += g.weight(q) * g.node(q)[0] * g.node(q)[0];
  CHECK(second == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("three-point rule") {
  const CollocationGrid g = build_collocation_grid(1, 3);
  REQUIRE(g.size() == 3);
  const double r = std::sqrt(0.6);
  CHECK(g.node(0)[0] == doctest::Approx(-r).epsilon(1e-14));
  CHECK(g.node(1)[0] == 0.0); // exact, antisymmetry is pinned
  CHECK(g.node(2)[0] == doctest::Approx(r).epsilon(1e-14));
  CHECK(g.weight(0) == doctest::Approx(5.0 / 18.0).epsilon(1e-14));
  CHECK(g.weight(1) == doctest::Approx(8.0 / 18.0).epsilon(1e-14));
  CHECK(g.weight(2) == doctest::Approx(5.0 / 18.0).epsilon(1e-14));
}

TEST_CASE("uniform even moments") {
  // E[xi^(2j)] = 1/(2j+1); a p-point rule is exact through degree 2p-1
  const CollocationGrid g = build_collocation_grid(1, 4);
  for (int j = 1; j <= 3; ++j) {
    double even = 0.0, odd = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) {
      even += g.weight(q) * std::pow(g.node(q)[0], 2 * j);
      odd += g.weight(q) * std::pow(g.node(q)[0], 2 * j - 1);
    }
    CHECK(even == doctest::Approx(1.0 / (2.0 * j + 1.0)).epsilon(1e-14));
    CHECK(std::abs(odd) < 1e-15);
  }
}

TEST_CASE("tensor grid over two modes") {
  const CollocationGrid g = build_collocation_grid(2, 3);
  REQUIRE(g.size() == 9);
  REQUIRE(g.dim() == 2);
  double total = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    total += g.weight(q);
    for (double c : g.node(q)) CHECK(std::abs(c) <= 1.0);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  // center point carries the product of the two middle weights
  bool found_center = false;
  for (std::size_t q = 0; q < g.size(); ++q)
    if (g.node(q)[0] == 0.0 && g.node(q)[1] == 0.0) {
      found_center = true;
      CHECK(g.weight(q) == doctest::Approx(16.0 / 81.0).epsilon(1e-14));
    }
  CHECK(found_center);
}

TEST_CASE("empty tensor product") {
  const CollocationGrid g = build_collocation_grid(0, 7);
  REQUIRE(g.size() == 1);
  CHECK(g.dim() == 0);
  CHECK(g.weight(0) == 1.0);
  CHECK(g.node(0).empty());
}

TEST_CASE("coefficient realization") {
  const RandomFieldModel model = build_field_model(1.0, {0.3});
  const SpatialMesh mesh = build_mesh(2, 1.0);

  const auto at_zero = realize_coefficient(model, std::vector<double>{0.0}, mesh);
  REQUIRE(at_zero.size() == 2);
  CHECK(at_zero[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(at_zero[1] == doctest::Approx(1.0).epsilon(1e-15));

  const auto at_one = realize_coefficient(model, std::vector<double>{1.0}, mesh);
  CHECK(at_one[0] == doctest::Approx(1.0 + 0.3 * std::cos(0.25 * M_PI)).epsilon(1e-12));
  CHECK(at_one[1] == doctest::Approx(1.0 + 0.3 * std::cos(0.75 * M_PI)).epsilon(1e-12));
  CHECK(at_one[0] == doctest::Approx(1.2121).epsilon(1e-4));
  CHECK(at_one[1] == doctest::Approx(0.7879).epsilon(1e-4));

  const RandomFieldModel flat = build_field_model(1.0, {});
  for (double v : realize_coefficient(flat, {}, mesh)) CHECK(v == 1.0);

  CHECK_THROWS_AS(realize_coefficient(model, std::vector<double>{0.5, 0.5}, mesh),
                  std::invalid_argument);
  CHECK_THROWS_AS(realize_coefficient(model, std::vector<double>{1.5}, mesh),
                  std::invalid_argument);
}

TEST_CASE("realizations stay above the positivity margin") {
  const RandomFieldModel model = build_field_model(1.0, {0.3, 0.1});
  const SpatialMesh mesh = build_mesh(16, 1.0);
  const CollocationGrid g = build_collocation_grid(2, 4);
  for (std::size_t q = 0; q < g.size(); ++q)
    for (double v : realize_coefficient(model, g.node(q), mesh))
      CHECK(v >= model.positivity_margin() - 1e-15);
}

TEST_CASE("expectation of node-constant field") {
  const CollocationGrid g = build_collocation_grid(2, 3);
  SpaceTimeStochField f(FieldRole::State, g.size(), 3, 4);
  SplitMix64 gen(11);
  SpaceTimeField pattern(3, 4);
  for (double& v : pattern.values()) v = gen.uniform_sym();
  for (std::size_t q = 0; q < g.size(); ++q)
    for (std::size_t m = 0; m <= 3; ++m)
      for (std::size_t i = 0; i < 4; ++i) f.at(q, m, i) = pattern.at(m, i);
  const SpaceTimeField mean = expectation(f, g);
  for (std::size_t m = 0; m <= 3; ++m)
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(mean.at(m, i) == doctest::Approx(pattern.at(m, i)).epsilon(1e-14));
  // identical nodes spread nothing
  const SpaceTimeField var = variance_field(f, g);
  for (double v : var.values()) CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("two-point symmetric field") {
  const CollocationGrid g(1, {-0.5, 0.5}, {0.5, 0.5});
  SpaceTimeStochField f(FieldRole::State, 2, 1, 2);
  for (std::size_t m = 0; m <= 1; ++m)
    for (std::size_t i = 0; i < 2; ++i) {
      f.at(0, m, i) = 1.0;
      f.at(1, m, i) = -1.0;
    }
  const SpaceTimeField mean = expectation(f, g);
  for (double v : mean.values()) CHECK(v == 0.0);
  const SpaceTimeField var = variance_field(f, g);
  const SpaceTimeField sd = std_field(f, g);
  for (double v : var.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  for (double v : sd.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("expectation matches independent weighted sum") {
  const CollocationGrid g = build_collocation_grid(2, 3);
  SpaceTimeStochField f(FieldRole::State, g.size(), 4, 5);
  SplitMix64 gen(23);
  for (double& v : f.values()) v = gen.uniform_sym();
  const SpaceTimeField mean = expectation(f, g);
  for (std::size_t m = 0; m <= 4; ++m)
    for (std::size_t i = 0; i < 5; ++i) {
      double s = 0.0;
      for (std::size_t q = g.size(); q-- > 0;) s += g.weight(q) * f.at(q, m, i); // reversed order
      CHECK(std::abs(mean.at(m, i) - s) <= 1e-15);
    }
}

TEST_CASE("variance routes agree on random fields") {
  const CollocationGrid g = build_collocation_grid(2, 3);
  SpaceTimeStochField f(FieldRole::State, g.size(), 4, 5);
  SplitMix64 gen(29);
  for (double& v : f.values()) v = gen.uniform_sym();
  const SpaceTimeField mean = expectation(f, g);
  const SpaceTimeField var = variance_field(f, g);
  for (std::size_t m = 0; m <= 4; ++m)
    for (std::size_t i = 0; i < 5; ++i) {
      double centered = 0.0;
      for (std::size_t q = 0; q < g.size(); ++q) {
        const double d = f.at(q, m, i) - mean.at(m, i);
        centered += g.weight(q) * d * d;
      }
      CHECK(var.at(m, i) == doctest::Approx(centered).epsilon(1e-13));
      CHECK(var.at(m, i) >= 0.0);
    }
}

TEST_CASE("high-order rule nodes remain inside and symmetric") {
  std::vector<double> x, w;
  gauss_legendre(31, x, w);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(x[i]) < 1.0);
    CHECK(w[i] > 0.0);
    CHECK(x[i] == -x[x.size() - 1 - i]); // exact mirror by construction
    sum += w[i];
  }
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(x[15] == 0.0);
}

} // TEST_SUITE
