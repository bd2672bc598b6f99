#include "riskpde/stochastic.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

#include "riskpde/errors.hpp"

namespace riskpde {

double RandomFieldModel::positivity_margin() const {
  double s = 0.0;
  for (double v : sigmas) s += std::abs(v);
  return a0 - s;
}

RandomFieldModel build_field_model(double a0, std::vector<double> sigmas) {
  RandomFieldModel m;
  m.a0 = a0;
  m.sigmas = std::move(sigmas);
  if (!(m.positivity_margin() > 0.0))
    throw PositivityViolation("field model: a0 - sum |sigma_k| = " +
                              std::to_string(m.positivity_margin()) +
                              " is not positive, coefficient may vanish");
  return m;
}

CollocationGrid::CollocationGrid(std::size_t dim, std::vector<double> nodes,
                                 std::vector<double> weights)
    : dim_(dim), nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("grid: needs at least one point");
  if (nodes_.size() != dim_ * weights_.size())
    throw std::invalid_argument("grid: node storage does not match dim * size");
}

std::span<const double> CollocationGrid::node(std::size_t q) const {
  return {nodes_.data() + q * dim_, dim_};
}

namespace {

// P_n(t) and P_n'(t) by the three-term recurrence; n >= 1.
void legendre_eval(std::size_t n, double t, double& p, double& dp) {
  double p0 = 1.0, p1 = t;
  for (std::size_t k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / static_cast<double>(k);
    p0 = p1;
    p1 = pk;
  }
  p = p1;
  dp = static_cast<double>(n) * (t * p1 - p0) / (t * t - 1.0);
}

} // namespace

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one point");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // root i counted from +1 downward; Chebyshev-like initial guess
    double t = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double p = 0.0, dp = 1.0;
    for (int iter = 0; iter < 64; ++iter) {
      legendre_eval(n, t, p, dp);
      const double dt = p / dp;
      t -= dt;
      if (std::abs(dt) <= 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    legendre_eval(n, t, p, dp);
    nodes[i] = -t;
    nodes[n - 1 - i] = t;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  // middle root of an odd rule is exactly zero; pin it so antisymmetry is exact
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

CollocationGrid build_collocation_grid(std::size_t n_modes, std::size_t points_per_dim) {
  if (n_modes == 0) return CollocationGrid(0, {}, {1.0});
  if (points_per_dim == 0)
    throw std::invalid_argument("grid: points_per_dim must be at least 1");

  std::vector<double> x1, w1;
  gauss_legendre(points_per_dim, x1, w1);

  std::size_t q_count = 1;
  for (std::size_t k = 0; k < n_modes; ++k) {
    if (q_count > 100000000 / points_per_dim)
      throw std::invalid_argument("grid: tensor rule exceeds 1e8 points");
    q_count *= points_per_dim;
  }

  std::vector<double> nodes(q_count * n_modes);
  std::vector<double> weights(q_count);
  for (std::size_t q = 0; q < q_count; ++q) {
    double w = 1.0;
    std::size_t rest = q;
    // dimension 0 varies slowest
    for (std::size_t k = n_modes; k-- > 0;) {
      const std::size_t digit = rest % points_per_dim;
      rest /= points_per_dim;
      nodes[q * n_modes + k] = x1[digit];
      w *= w1[digit] / 2.0; // per-dimension uniform density on [-1,1]
    }
    weights[q] = w;
  }
  return CollocationGrid(n_modes, std::move(nodes), std::move(weights));
}

std::vector<double> realize_coefficient(const RandomFieldModel& model, std::span<const double> xi,
                                        const SpatialMesh& mesh) {
  if (xi.size() != model.n_modes())
    throw std::invalid_argument("coefficient: expected one coordinate per mode");
  for (double c : xi)
    if (std::abs(c) > 1.0 + 1e-9)
      throw std::invalid_argument("coefficient: parameter coordinate outside [-1,1]");
  std::vector<double> a(mesh.n_elements);
  for (std::size_t e = 0; e < mesh.n_elements; ++e) {
    const double x = mesh.element_midpoint(e);
    double v = model.a0;
    for (std::size_t k = 0; k < model.n_modes(); ++k)
      v += model.sigmas[k] *
           std::cos(static_cast<double>(k + 1) * M_PI * x / mesh.length) * xi[k];
    a[e] = v;
  }
  return a;
}

SpaceTimeField expectation(const SpaceTimeStochField& field, const CollocationGrid& grid) {
  if (field.n_nodes() != grid.size())
    throw std::invalid_argument("expectation: field nodes do not match grid");
  SpaceTimeField out(field.n_steps(), field.n_space());
  auto o = out.values();
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const double w = grid.weight(q);
    const auto v = field.values();
    const std::size_t block = (field.n_steps() + 1) * field.n_space();
    for (std::size_t k = 0; k < block; ++k) o[k] += w * v[q * block + k];
  }
  return out;
}

SpaceTimeField variance_field(const SpaceTimeStochField& field, const CollocationGrid& grid) {
  if (field.n_nodes() != grid.size())
    throw std::invalid_argument("variance: field nodes do not match grid");
  const std::size_t block = (field.n_steps() + 1) * field.n_space();
  std::vector<double> mean(block, 0.0), mean_sq(block, 0.0);
  const auto v = field.values();
  for (std::size_t q = 0; q < grid.size(); ++q) {
    const double w = grid.weight(q);
    for (std::size_t k = 0; k < block; ++k) {
      const double z = v[q * block + k];
      mean[k] += w * z;
      mean_sq[k] += w * z * z;
    }
  }
  SpaceTimeField out(field.n_steps(), field.n_space());
  auto o = out.values();
  for (std::size_t k = 0; k < block; ++k)
    o[k] = std::max(0.0, mean_sq[k] - mean[k] * mean[k]);
  return out;
}

SpaceTimeField std_field(const SpaceTimeStochField& field, const CollocationGrid& grid) {
  SpaceTimeField out = variance_field(field, grid);
  for (double& v : out.values()) v = std::sqrt(v);
  return out;
}

} // namespace riskpde
