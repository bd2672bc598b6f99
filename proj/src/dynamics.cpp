#include "riskpde/dynamics.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "riskpde/parallel.hpp"
#include "riskpde/tridiag.hpp"

namespace riskpde {

namespace {

void check_dims(const ProblemSpec& spec, const SpatialMesh& mesh, const RandomFieldModel& model,
                const CollocationGrid& grid, const SpaceTimeStochField& f, const char* what) {
  spec.validate();
  if (grid.dim() != model.n_modes())
    throw std::invalid_argument(std::string(what) + ": grid dimension does not match field model");
  if (f.n_nodes() != grid.size() || f.n_steps() != spec.n_steps || f.n_space() != mesh.n_interior)
    throw std::invalid_argument(std::string(what) + ": field shape does not match discretization");
}

} // namespace

SpaceTimeStochField forward_solve(const ProblemSpec& spec, const SpatialMesh& mesh,
                                  const RandomFieldModel& model, const CollocationGrid& grid,
                                  const SpaceTimeStochField& control) {
  check_dims(spec, mesh, model, grid, control, "forward");

  const SymTridiag mass = assemble_mass(mesh);
  const double dt = spec.dt();
  const std::size_t n = mesh.n_interior;
  SpaceTimeStochField state(FieldRole::State, grid.size(), spec.n_steps, n);

  parallel_for(grid.size(), [&](std::size_t q) {
    const auto coeff = realize_coefficient(model, grid.node(q), mesh);
    const SymTridiag stiff = assemble_stiffness(mesh, coeff);
    const TridiagFactor factor(add_scaled(mass, dt, stiff));
    std::vector<double> rhs(n), mu(n);
    for (std::size_t m = 1; m <= spec.n_steps; ++m) {
      mass.apply(state.slice(q, m - 1), rhs);
      mass.apply(control.slice(q, m), mu);
      for (std::size_t i = 0; i < n; ++i) rhs[i] += dt * mu[i];
      factor.solve(rhs, state.slice(q, m));
    }
  });
  return state;
}

SpaceTimeStochField adjoint_solve(const ProblemSpec& spec, const SpatialMesh& mesh,
                                  const RandomFieldModel& model, const CollocationGrid& grid,
                                  const SpaceTimeStochField& state) {
  check_dims(spec, mesh, model, grid, state, "adjoint");

  const SymTridiag mass = assemble_mass(mesh);
  const double dt = spec.dt();
  const std::size_t n = mesh.n_interior;
  const SpaceTimeField mean_state = expectation(state, grid);
  const SpaceTimeField target = evaluate_target(spec, mesh);
  SpaceTimeStochField adjoint(FieldRole::Adjoint, grid.size(), spec.n_steps, n);

  parallel_for(grid.size(), [&](std::size_t q) {
    const auto coeff = realize_coefficient(model, grid.node(q), mesh);
    const SymTridiag stiff = assemble_stiffness(mesh, coeff);
    const TridiagFactor factor(add_scaled(mass, dt, stiff));
    std::vector<double> rhs(n), src(n), msrc(n);
    for (std::size_t m = spec.n_steps; m >= 1; --m) {
      // terminal condition: the slice beyond n_steps is zero
      if (m == spec.n_steps) {
        for (double& v : rhs) v = 0.0;
      } else {
        mass.apply(adjoint.slice(q, m + 1), rhs);
      }
      const auto y = state.slice(q, m);
      const auto ybar = mean_state.slice(m);
      const auto d = target.slice(m);
      for (std::size_t i = 0; i < n; ++i)
        src[i] = (1.0 + spec.alpha) * y[i] - spec.alpha * ybar[i] - d[i];
      mass.apply(src, msrc);
      for (std::size_t i = 0; i < n; ++i) rhs[i] += dt * msrc[i];
      factor.solve(rhs, adjoint.slice(q, m));
    }
  });
  return adjoint;
}

} // namespace riskpde
