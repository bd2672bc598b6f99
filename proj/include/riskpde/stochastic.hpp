#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "riskpde/fields.hpp"
#include "riskpde/mesh.hpp"

namespace riskpde {

/// Affine expansion of the diffusion coefficient,
///   a(x, xi) = a0 + sum_k sigma_k cos(k pi x / length) xi_k,
/// with xi uniform on [-1,1]^K. Every realization is bounded below by
/// positivity_margin(), which build_field_model requires to be positive.
struct RandomFieldModel {
  double a0 = 1.0;
  std::vector<double> sigmas;

  std::size_t n_modes() const { return sigmas.size(); }
  double positivity_margin() const;
};

/// Validates the uniform positivity margin a0 - sum_k |sigma_k| > 0.
RandomFieldModel build_field_model(double a0, std::vector<double> sigmas);

/// Point set with probability weights on [-1,1]^K. Built as a tensor
/// Gauss-Legendre rule by build_collocation_grid; the Monte Carlo oracle
/// also instantiates it directly with a single sampled point.
class CollocationGrid {
public:
  /// nodes is size() * dim() coordinates, node q occupying the contiguous
  /// block [q*dim, (q+1)*dim). K = 0 means one empty point.
  CollocationGrid(std::size_t dim, std::vector<double> nodes, std::vector<double> weights);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }

  std::span<const double> node(std::size_t q) const;
  double weight(std::size_t q) const { return weights_[q]; }
  std::span<const double> weights() const { return weights_; }

private:
  std::size_t dim_ = 0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// 1D Gauss-Legendre rule on [-1,1], weights summing to 2. Nodes come out
/// ascending and exactly antisymmetric (the center node of an odd rule is
/// exactly zero).
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

/// Tensor Gauss-Legendre rule over [-1,1]^n_modes with points_per_dim points
/// per direction, weights normalized to the uniform probability measure
/// (they sum to 1). n_modes = 0 yields the single empty point with weight 1.
CollocationGrid build_collocation_grid(std::size_t n_modes, std::size_t points_per_dim);

/// Coefficient realization sampled at the element midpoints.
/// xi must have one coordinate per mode and lie in the closed unit box.
std::vector<double> realize_coefficient(const RandomFieldModel& model, std::span<const double> xi,
                                        const SpatialMesh& mesh);

/// Pointwise mean over nodes, accumulated in ascending q order.
SpaceTimeField expectation(const SpaceTimeStochField& field, const CollocationGrid& grid);

/// Pointwise variance E(z^2) - (E z)^2, clamped at zero where roundoff
/// drives it negative.
SpaceTimeField variance_field(const SpaceTimeStochField& field, const CollocationGrid& grid);

/// Pointwise standard deviation, sqrt of variance_field.
SpaceTimeField std_field(const SpaceTimeStochField& field, const CollocationGrid& grid);

} // namespace riskpde
