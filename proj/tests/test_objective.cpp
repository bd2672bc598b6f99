#include <doctest.h>

#include <cmath>
#include <vector>

#include "riskpde/dynamics.hpp"
#include "riskpde/objective.hpp"
#include "riskpde/oracle.hpp"
#include "riskpde/tridiag.hpp"

#include "test_util.hpp"

using namespace riskpde;
using namespace riskpde::testutil;

TEST_SUITE("objective") {

TEST_CASE("inner product of zero fields") {
  const ProblemSetup s = small_setup();
  const SpaceTimeStochField z(FieldRole::Control, s.grid.size(), s.spec.n_steps,
                              s.mesh.n_interior);
  CHECK(inner_product_U(z, z, s.spec, s.mesh, s.grid) == 0.0);
  CHECK(norm_U(z, s.spec, s.mesh, s.grid) == 0.0);
}

TEST_CASE("norm of the constant-one field") {
  // per step dt * (1' M 1); mesh(4,1): 1'M1 = 3/6 + 4/24 = 2/3, summing to 2/3 over T = 1
  for (std::size_t n_el : {4u, 64u}) {
    ProblemSetup s{build_mesh(n_el, 1.0), build_field_model(1.0, {}),
                   build_collocation_grid(0, 1), ProblemSpec{}, SolverOptions{}};
    s.spec.horizon = 1.0;
    s.spec.n_steps = 10;
    s.spec.beta = 1.0;
    SpaceTimeStochField ones(FieldRole::Control, 1, s.spec.n_steps, s.mesh.n_interior);
    for (double& v : ones.values()) v = 1.0;
    const double sq = inner_product_U(ones, ones, s.spec, s.mesh, s.grid);
    if (n_el == 4) CHECK(sq == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    if (n_el == 64) CHECK(sq >= 0.96); // approaches the continuum value 1 from below
  }
}

TEST_CASE("inner product is symmetric and bilinear") {
  const ProblemSetup s = small_setup();
  const SpaceTimeStochField f = random_field(FieldRole::Control, s, 301);
  const SpaceTimeStochField g = random_field(FieldRole::Control, s, 302);
  const SpaceTimeStochField h = random_field(FieldRole::Control, s, 303);
  const double fg = inner_product_U(f, g, s.spec, s.mesh, s.grid);
  const double gf = inner_product_U(g, f, s.spec, s.mesh, s.grid);
  CHECK(fg == doctest::Approx(gf).epsilon(1e-13));
  const double lhs =
      inner_product_U(lin_comb(2.5, f, -1.0, h), g, s.spec, s.mesh, s.grid);
  const double rhs = 2.5 * fg - inner_product_U(h, g, s.spec, s.mesh, s.grid);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("objective vanishes at the global minimum of zero data") {
  ProblemSetup s = small_setup();
  s.spec.target = ConstantTarget{0.0};
  const SpaceTimeStochField u(FieldRole::Control, s.grid.size(), s.spec.n_steps,
                              s.mesh.n_interior);
  const ObjectiveBreakdown b = evaluate_objective(s.spec, s.mesh, s.model, s.grid, u);
  CHECK(b.tracking == 0.0);
  CHECK(b.variance_raw == 0.0);
  CHECK(b.control == 0.0);
  CHECK(b.total == 0.0);
}

TEST_CASE("single realization has no variance penalty") {
  ProblemSetup s = deterministic_setup(3.0, 0.01); // alpha large on purpose
  const SpaceTimeStochField u = random_field(FieldRole::Control, s, 304);
  const ObjectiveBreakdown b = evaluate_objective(s.spec, s.mesh, s.model, s.grid, u);
  CHECK(b.variance_raw == 0.0);
  CHECK(b.total == b.tracking + b.control);
}

TEST_CASE("zero-control objective matches the separable closed form") {
  // u = 0 gives y = 0, so J = tracking = 1/2 sum_m dt (m/n_t)^2 s' M s
  // with s the sine vector of the ramp target
  ProblemSetup s{build_mesh(16, 1.0), build_field_model(1.0, {0.3, 0.1}),
                 build_collocation_grid(2, 3), ProblemSpec{}, SolverOptions{}};
  s.spec.horizon = 1.0;
  s.spec.n_steps = 20;
  s.spec.alpha = 1.0;
  s.spec.beta = 0.01;
  s.spec.target = SeparableSineRampTarget{1.0};
  const SpaceTimeStochField u(FieldRole::Control, s.grid.size(), s.spec.n_steps,
                              s.mesh.n_interior);
  const ObjectiveBreakdown b = evaluate_objective(s.spec, s.mesh, s.model, s.grid, u);

  const SymTridiag mass = assemble_mass(s.mesh);
  std::vector<double> sine(s.mesh.n_interior);
  for (std::size_t i = 0; i < sine.size(); ++i) sine[i] = std::sin(M_PI * s.mesh.node(i));
  const double dt = s.spec.dt();
  double closed = 0.0;
  for (std::size_t m = 1; m <= s.spec.n_steps; ++m) {
    const double ramp = static_cast<double>(m) / static_cast<double>(s.spec.n_steps);
    closed += dt * ramp * ramp * quad_form(mass, sine);
  }
  closed *= 0.5;
  CHECK(b.total == doctest::Approx(b.tracking).epsilon(1e-15));
  CHECK(b.tracking == doctest::Approx(closed).epsilon(1e-12));
  CHECK(b.variance_raw == 0.0); // y = 0 across nodes has no spread
}

TEST_CASE("gradient field identities") {
  const ProblemSetup s = small_setup();
  const SpaceTimeStochField u = random_field(FieldRole::Control, s, 305);
  // lambda = -beta u is the stationarity point: gradient exactly zero
  const SpaceTimeStochField lambda = lin_comb(-s.spec.beta, u, 0.0, u);
  const SpaceTimeStochField g0 = gradient_from_adjoint(u, lambda, s.spec);
  CHECK(max_abs(g0) <= 1e-18);

  const SpaceTimeStochField zero(FieldRole::Control, s.grid.size(), s.spec.n_steps,
                                 s.mesh.n_interior);
  const SpaceTimeStochField l2 = random_field(FieldRole::Adjoint, s, 306);
  const SpaceTimeStochField g1 = gradient_from_adjoint(zero, l2, s.spec);
  CHECK(max_abs_diff(g1, l2) == 0.0);
}

TEST_CASE("adjoint pairing matches finite differences") {
  const ProblemSetup s = small_setup();
  for (std::uint64_t k = 0; k < 5; ++k) {
    const SpaceTimeStochField u = random_field(FieldRole::Control, s, 400 + 2 * k);
    const SpaceTimeStochField w = random_field(FieldRole::Control, s, 401 + 2 * k);
    const SpaceTimeStochField y = forward_solve(s.spec, s.mesh, s.model, s.grid, u);
    const SpaceTimeStochField lambda = adjoint_solve(s.spec, s.mesh, s.model, s.grid, y);
    const SpaceTimeStochField g = gradient_from_adjoint(u, lambda, s.spec);
    const double pairing = inner_product_U(g, w, s.spec, s.mesh, s.grid);
    const double fd = fd_directional(s.spec, s.mesh, s.model, s.grid, u, w, 1e-5);
    CHECK(std::abs(fd - pairing) / std::max(std::abs(pairing), 1e-12) <= 1e-6);
  }
}

TEST_CASE("directional terms vanish in the zero direction") {
  const ProblemSetup s = small_setup();
  const SpaceTimeStochField u = random_field(FieldRole::Control, s, 310);
  const DirectionalTerms t = directional_derivative_terms(s.spec, s.mesh, s.model, s.grid, u, u);
  CHECK(t.tracking == 0.0);
  CHECK(t.second_moment == 0.0);
  CHECK(t.mean_square == 0.0);
  CHECK(t.control == 0.0);
}

TEST_CASE("alpha zero kills both coupling terms") {
  const ProblemSetup s = small_setup(0.0);
  const SpaceTimeStochField u = random_field(FieldRole::Control, s, 311);
  const SpaceTimeStochField v = random_field(FieldRole::Control, s, 312);
  const DirectionalTerms t = directional_derivative_terms(s.spec, s.mesh, s.model, s.grid, u, v);
  CHECK(t.second_moment == 0.0);
  CHECK(t.mean_square == 0.0);
  CHECK(t.tracking != 0.0);
}

TEST_CASE("directional terms sum to the adjoint pairing") {
  const ProblemSetup s = small_setup(1.7, 0.05);
  const SpaceTimeStochField u = random_field(FieldRole::Control, s, 313);
  const SpaceTimeStochField v = random_field(FieldRole::Control, s, 314);
  const DirectionalTerms t = directional_derivative_terms(s.spec, s.mesh, s.model, s.grid, u, v);
  const SpaceTimeStochField y = forward_solve(s.spec, s.mesh, s.model, s.grid, u);
  const SpaceTimeStochField lambda = adjoint_solve(s.spec, s.mesh, s.model, s.grid, y);
  const SpaceTimeStochField g = gradient_from_adjoint(u, lambda, s.spec);
  const double pairing =
      inner_product_U(g, lin_comb(1.0, v, -1.0, u), s.spec, s.mesh, s.grid);
  CHECK(t.total() == doctest::Approx(pairing).epsilon(1e-10));
}

TEST_CASE("convexity along segments") {
  const ProblemSetup s = small_setup();
  for (std::uint64_t k = 0; k < 10; ++k) {
    const SpaceTimeStochField u1 = random_field(FieldRole::Control, s, 500 + 2 * k);
    const SpaceTimeStochField u2 = random_field(FieldRole::Control, s, 501 + 2 * k);
    const double j1 = evaluate_objective(s.spec, s.mesh, s.model, s.grid, u1).total;
    const double j2 = evaluate_objective(s.spec, s.mesh, s.model, s.grid, u2).total;
    for (double theta : {0.25, 0.5, 0.75}) {
      const double jm =
          evaluate_objective(s.spec, s.mesh, s.model, s.grid,
                             lin_comb(theta, u1, 1.0 - theta, u2))
              .total;
      CHECK(jm <= theta * j1 + (1.0 - theta) * j2 + 1e-12);
    }
  }
}

TEST_CASE("strong convexity with modulus beta") {
  const ProblemSetup s = small_setup();
  for (std::uint64_t k = 0; k < 10; ++k) {
    const SpaceTimeStochField u = random_field(FieldRole::Control, s, 600 + 2 * k);
    const SpaceTimeStochField w = random_field(FieldRole::Control, s, 601 + 2 * k);
    const double ju = evaluate_objective(s.spec, s.mesh, s.model, s.grid, u).total;
    const double juw =
        evaluate_objective(s.spec, s.mesh, s.model, s.grid, lin_comb(1.0, u, 1.0, w)).total;
    const SpaceTimeStochField y = forward_solve(s.spec, s.mesh, s.model, s.grid, u);
    const SpaceTimeStochField lambda = adjoint_solve(s.spec, s.mesh, s.model, s.grid, y);
    const SpaceTimeStochField g = gradient_from_adjoint(u, lambda, s.spec);
    const double gw = inner_product_U(g, w, s.spec, s.mesh, s.grid);
    const double wsq = inner_product_U(w, w, s.spec, s.mesh, s.grid);
    CHECK(juw >= ju + gw + 0.5 * s.spec.beta * wsq - 1e-12);
  }
}

TEST_CASE("breakdown parts are nonnegative and sum to total") {
  const ProblemSetup s = small_setup(2.0, 0.5);
  for (std::uint64_t k = 0; k < 5; ++k) {
    const SpaceTimeStochField u = random_field(FieldRole::Control, s, 700 + k);
    const ObjectiveBreakdown b = evaluate_objective(s.spec, s.mesh, s.model, s.grid, u);
    CHECK(b.tracking >= 0.0);
    CHECK(b.variance_raw >= 0.0);
    CHECK(b.control >= 0.0);
    CHECK(b.total == b.tracking + b.variance_raw + b.control);
  }
}

} // TEST_SUITE
