#include "riskpde/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace riskpde {

const char* to_string(FieldRole role) {
  switch (role) {
    case FieldRole::State: return "state";
    case FieldRole::Control: return "control";
    case FieldRole::Adjoint: return "adjoint";
    case FieldRole::TargetExpanded: return "target-expanded";
  }
  return "unknown";
}

SpaceTimeField::SpaceTimeField(std::size_t n_steps, std::size_t n_space)
    : n_steps_(n_steps), n_space_(n_space), v_((n_steps + 1) * n_space, 0.0) {}

std::span<double> SpaceTimeField::slice(std::size_t m) {
  return {v_.data() + m * n_space_, n_space_};
}

std::span<const double> SpaceTimeField::slice(std::size_t m) const {
  return {v_.data() + m * n_space_, n_space_};
}

SpaceTimeStochField::SpaceTimeStochField(FieldRole role, std::size_t n_nodes, std::size_t n_steps,
                                         std::size_t n_space)
    : role_(role), n_nodes_(n_nodes), n_steps_(n_steps), n_space_(n_space),
      v_(n_nodes * (n_steps + 1) * n_space, 0.0) {}

std::span<double> SpaceTimeStochField::slice(std::size_t q, std::size_t m) {
  return {v_.data() + (q * (n_steps_ + 1) + m) * n_space_, n_space_};
}

std::span<const double> SpaceTimeStochField::slice(std::size_t q, std::size_t m) const {
  return {v_.data() + (q * (n_steps_ + 1) + m) * n_space_, n_space_};
}

bool same_shape(const SpaceTimeStochField& a, const SpaceTimeStochField& b) {
  return a.n_nodes() == b.n_nodes() && a.n_steps() == b.n_steps() && a.n_space() == b.n_space();
}

void require_same_shape(const SpaceTimeStochField& a, const SpaceTimeStochField& b,
                        const char* what) {
  if (!same_shape(a, b))
    throw std::invalid_argument(std::string(what) + ": field shape mismatch");
}

SpaceTimeStochField broadcast(const SpaceTimeField& f, std::size_t n_nodes, FieldRole role) {
  SpaceTimeStochField out(role, n_nodes, f.n_steps(), f.n_space());
  for (std::size_t q = 0; q < n_nodes; ++q)
    for (std::size_t m = 0; m <= f.n_steps(); ++m) {
      auto dst = out.slice(q, m);
      auto src = f.slice(m);
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    }
  return out;
}

SpaceTimeStochField lin_comb(double a, const SpaceTimeStochField& x, double b,
                             const SpaceTimeStochField& y) {
  require_same_shape(x, y, "lin_comb");
  SpaceTimeStochField out(x.role(), x.n_nodes(), x.n_steps(), x.n_space());
  auto xo = x.values();
  auto yo = y.values();
  auto o = out.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = a * xo[k] + b * yo[k];
  return out;
}

void add_scaled(SpaceTimeStochField& y, double a, const SpaceTimeStochField& x) {
  require_same_shape(y, x, "add_scaled");
  auto yo = y.values();
  auto xo = x.values();
  for (std::size_t k = 0; k < yo.size(); ++k) yo[k] += a * xo[k];
}

void zero_time_slice(SpaceTimeStochField& f, std::size_t m) {
  for (std::size_t q = 0; q < f.n_nodes(); ++q)
    for (double& v : f.slice(q, m)) v = 0.0;
}

double max_abs(const SpaceTimeStochField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

} // namespace riskpde
