#include "riskpde/tridiag.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

#include "riskpde/errors.hpp"

namespace riskpde {

SpatialMesh build_mesh(std::size_t n_elements, double length) {
  if (n_elements < 2)
    throw std::invalid_argument("mesh: n_elements must be at least 2, got " +
                                std::to_string(n_elements));
  if (!(length > 0.0))
    throw std::invalid_argument("mesh: length must be positive");
  SpatialMesh m;
  m.n_elements = n_elements;
  m.length = length;
  m.h = length / static_cast<double>(n_elements);
  m.n_interior = n_elements - 1;
  return m;
}

void SymTridiag::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  assert(x.size() == n && y.size() == n);
  assert(x.data() != y.data());
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
}

SymTridiag add_scaled(const SymTridiag& a, double c, const SymTridiag& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("add_scaled: size mismatch");
  SymTridiag r = a;
  for (std::size_t i = 0; i < r.diag.size(); ++i) r.diag[i] += c * b.diag[i];
  for (std::size_t i = 0; i < r.off.size(); ++i) r.off[i] += c * b.off[i];
  return r;
}

double bilinear(const SymTridiag& a, std::span<const double> x, std::span<const double> y) {
  const std::size_t n = a.size();
  assert(x.size() == n && y.size() == n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a.diag[i] * x[i] * y[i];
  for (std::size_t i = 0; i + 1 < n; ++i) s += a.off[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
  return s;
}

double quad_form(const SymTridiag& a, std::span<const double> x) {
  const std::size_t n = a.size();
  assert(x.size() == n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a.diag[i] * x[i] * x[i];
  for (std::size_t i = 0; i + 1 < n; ++i) s += 2.0 * a.off[i] * x[i] * x[i + 1];
  return s;
}

double quad_form_diff(const SymTridiag& a, std::span<const double> x, std::span<const double> y) {
  const std::size_t n = a.size();
  assert(x.size() == n && y.size() == n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    s += a.diag[i] * d * d;
  }
  for (std::size_t i = 0; i + 1 < n; ++i)
    s += 2.0 * a.off[i] * (x[i] - y[i]) * (x[i + 1] - y[i + 1]);
  return s;
}

SymTridiag assemble_mass(const SpatialMesh& mesh) {
  const std::size_t n = mesh.n_interior;
  SymTridiag m;
  m.diag.assign(n, 2.0 * mesh.h / 3.0);
  m.off.assign(n > 0 ? n - 1 : 0, mesh.h / 6.0);
  return m;
}

SymTridiag assemble_stiffness(const SpatialMesh& mesh, std::span<const double> coeff_per_element) {
  if (coeff_per_element.size() != mesh.n_elements)
    throw std::invalid_argument("stiffness: expected one coefficient per element");
  for (std::size_t e = 0; e < coeff_per_element.size(); ++e)
    if (!(coeff_per_element[e] > 0.0))
      throw PositivityViolation("stiffness: coefficient value at element " + std::to_string(e) +
                                " is not positive");
  const std::size_t n = mesh.n_interior;
  SymTridiag k;
  k.diag.resize(n);
  k.off.resize(n > 0 ? n - 1 : 0);
  // interior node i (0-based) joins elements i and i+1
  for (std::size_t i = 0; i < n; ++i)
    k.diag[i] = (coeff_per_element[i] + coeff_per_element[i + 1]) / mesh.h;
  for (std::size_t i = 0; i + 1 < n; ++i) k.off[i] = -coeff_per_element[i + 1] / mesh.h;
  return k;
}

TridiagFactor::TridiagFactor(const SymTridiag& a) {
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("factor: empty matrix");
  d_.resize(n);
  l_.resize(n - 1);
  d_[0] = a.diag[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(d_[i] > 0.0))
      throw std::runtime_error("factor: nonpositive pivot, matrix is not positive definite");
    l_[i] = a.off[i] / d_[i];
    d_[i + 1] = a.diag[i + 1] - l_[i] * a.off[i];
  }
  if (!(d_[n - 1] > 0.0))
    throw std::runtime_error("factor: nonpositive pivot, matrix is not positive definite");
}

void TridiagFactor::solve_in_place(std::span<double> x) const {
  const std::size_t n = d_.size();
  assert(x.size() == n);
  for (std::size_t i = 1; i < n; ++i) x[i] -= l_[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= d_[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= l_[i] * x[i + 1];
}

void TridiagFactor::solve(std::span<const double> rhs, std::span<double> x) const {
  assert(rhs.size() == x.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) x[i] = rhs[i];
  solve_in_place(x);
}

} // namespace riskpde
