#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace riskpde {

enum class FieldRole { State, Control, Adjoint, TargetExpanded };

const char* to_string(FieldRole role);

/// Deterministic space-time array: time slices m = 0..n_steps over the
/// interior nodes, stored contiguously with m varying slowest.
class SpaceTimeField {
public:
  SpaceTimeField() = default;
  SpaceTimeField(std::size_t n_steps, std::size_t n_space);

  std::size_t n_steps() const { return n_steps_; }
  std::size_t n_space() const { return n_space_; }

  double& at(std::size_t m, std::size_t i) { return v_[m * n_space_ + i]; }
  double at(std::size_t m, std::size_t i) const { return v_[m * n_space_ + i]; }

  std::span<double> slice(std::size_t m);
  std::span<const double> slice(std::size_t m) const;

  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }

private:
  std::size_t n_steps_ = 0;
  std::size_t n_space_ = 0;
  std::vector<double> v_;
};

/// Space-time field sampled at the collocation nodes, indexed
/// (node q, time step m = 0..n_steps, interior node i), q slowest.
/// The role tag travels with the data so mismatched uses fail loudly.
class SpaceTimeStochField {
public:
  SpaceTimeStochField() = default;
  SpaceTimeStochField(FieldRole role, std::size_t n_nodes, std::size_t n_steps, std::size_t n_space);

  FieldRole role() const { return role_; }
  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_steps() const { return n_steps_; }
  std::size_t n_space() const { return n_space_; }

  double& at(std::size_t q, std::size_t m, std::size_t i) {
    return v_[(q * (n_steps_ + 1) + m) * n_space_ + i];
  }
  double at(std::size_t q, std::size_t m, std::size_t i) const {
    return v_[(q * (n_steps_ + 1) + m) * n_space_ + i];
  }

  std::span<double> slice(std::size_t q, std::size_t m);
  std::span<const double> slice(std::size_t q, std::size_t m) const;

  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }

private:
  FieldRole role_ = FieldRole::State;
  std::size_t n_nodes_ = 0;
  std::size_t n_steps_ = 0;
  std::size_t n_space_ = 0;
  std::vector<double> v_;
};

bool same_shape(const SpaceTimeStochField& a, const SpaceTimeStochField& b);

/// Throws std::invalid_argument naming `what` when shapes differ.
void require_same_shape(const SpaceTimeStochField& a, const SpaceTimeStochField& b, const char* what);

/// Replicates a deterministic field across all collocation nodes.
SpaceTimeStochField broadcast(const SpaceTimeField& f, std::size_t n_nodes, FieldRole role);

/// a*x + b*y, shape-checked; the result carries x's role.
SpaceTimeStochField lin_comb(double a, const SpaceTimeStochField& x, double b, const SpaceTimeStochField& y);

/// y += a*x, shape-checked.
void add_scaled(SpaceTimeStochField& y, double a, const SpaceTimeStochField& x);

void zero_time_slice(SpaceTimeStochField& f, std::size_t m);

double max_abs(const SpaceTimeStochField& f);

} // namespace riskpde
