#pragma once

#include <cstddef>

namespace riskpde {

/// Uniform 1D mesh on (0, length) with homogeneous Dirichlet ends.
/// Unknowns live on the interior nodes x_i = i*h, i = 1..n_interior;
/// the boundary values are eliminated, not stored.
struct SpatialMesh {
  std::size_t n_elements = 0;
  double length = 0.0;
  double h = 0.0;
  std::size_t n_interior = 0;

  /// Coordinate of interior node i (0-based, so node 0 sits at h).
  double node(std::size_t i) const { return static_cast<double>(i + 1) * h; }

  /// Midpoint of element e, where the diffusion coefficient is sampled.
  double element_midpoint(std::size_t e) const {
    return (static_cast<double>(e) + 0.5) * h;
  }
};

/// Requires n_elements >= 2 (at least one interior node) and length > 0.
SpatialMesh build_mesh(std::size_t n_elements, double length);

} // namespace riskpde
