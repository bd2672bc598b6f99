#include "riskpde/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace riskpde {

void ProblemSpec::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("problem: horizon must be positive");
  if (n_steps < 1) throw std::invalid_argument("problem: n_steps must be at least 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("problem: alpha must be >= 0");
  if (!(beta > 0.0)) throw std::invalid_argument("problem: beta must be positive");
}

SpaceTimeField evaluate_target(const ProblemSpec& spec, const SpatialMesh& mesh) {
  spec.validate();
  SpaceTimeField d(spec.n_steps, mesh.n_interior);

  if (const auto* c = std::get_if<ConstantTarget>(&spec.target)) {
    for (double& v : d.values()) v = c->value;
    return d;
  }

  if (const auto* s = std::get_if<SeparableSineRampTarget>(&spec.target)) {
    const double dt = spec.dt();
    for (std::size_t m = 0; m <= spec.n_steps; ++m) {
      const double ramp = (static_cast<double>(m) * dt) / spec.horizon;
      auto slice = d.slice(m);
      for (std::size_t i = 0; i < mesh.n_interior; ++i)
        slice[i] = s->amplitude * std::sin(M_PI * mesh.node(i) / mesh.length) * ramp;
    }
    return d;
  }

  const auto& table = std::get<NodalTableTarget>(spec.target);
  if (table.values.n_steps() != spec.n_steps || table.values.n_space() != mesh.n_interior)
    throw std::invalid_argument("target: nodal table shape does not match mesh and step count");
  return table.values;
}

} // namespace riskpde
