#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "riskpde/mesh.hpp"

namespace riskpde {

/// Symmetric tridiagonal matrix; both triangles share one off-diagonal array.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off; // off[i] couples rows i and i+1; size() - 1 entries

  std::size_t size() const { return diag.size(); }

  /// y = A x. Aliasing x and y is not allowed.
  void apply(std::span<const double> x, std::span<double> y) const;
};

/// a + c*b, entrywise; sizes must match.
SymTridiag add_scaled(const SymTridiag& a, double c, const SymTridiag& b);

/// x' A y.
double bilinear(const SymTridiag& a, std::span<const double> x, std::span<const double> y);

/// x' A x.
double quad_form(const SymTridiag& a, std::span<const double> x);

/// (x - y)' A (x - y) without forming the difference.
double quad_form_diff(const SymTridiag& a, std::span<const double> x, std::span<const double> y);

/// P1 mass matrix on the interior nodes: diagonal 2h/3, off-diagonal h/6.
SymTridiag assemble_mass(const SpatialMesh& mesh);

/// Stiffness matrix for an elementwise-constant coefficient (one value per
/// element): diagonal (a_e_left + a_e_right)/h, off-diagonal -a_shared/h.
/// Rejects non-positive coefficient values; they would break uniform
/// ellipticity and with it the solvability of every time step.
SymTridiag assemble_stiffness(const SpatialMesh& mesh, std::span<const double> coeff_per_element);

/// LDL^T factorization of a symmetric positive definite tridiagonal matrix.
/// Factors once, then solves in O(n) per right-hand side.
class TridiagFactor {
public:
  explicit TridiagFactor(const SymTridiag& a);

  void solve(std::span<const double> rhs, std::span<double> x) const;
  void solve_in_place(std::span<double> x) const;

private:
  std::vector<double> d_; // pivots, all positive for an SPD input
  std::vector<double> l_; // unit lower-bidiagonal multipliers
};

} // namespace riskpde
