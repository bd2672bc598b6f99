#pragma once

#include "riskpde/fields.hpp"
#include "riskpde/mesh.hpp"
#include "riskpde/problem.hpp"
#include "riskpde/stochastic.hpp"

namespace riskpde {

/// Additive pieces of the cost. total is tracking + variance_raw + control,
/// summed in that order; each piece is nonnegative.
struct ObjectiveBreakdown {
  double tracking = 0.0;     // 1/2 ||y - y_d||^2 in the state norm
  double variance_raw = 0.0; // alpha/2 ||std y||^2
  double control = 0.0;      // beta/2 ||u||^2 in the control norm
  double total = 0.0;
};

/// Discrete control-space inner product
///   <f, g> = sum_q w_q dt sum_{m=1..n_steps} f_q^m' M g_q^m,
/// reduced in ascending (q, m) order so results are reproducible bitwise.
/// The m = 0 slices never enter.
double inner_product_U(const SpaceTimeStochField& f, const SpaceTimeStochField& g,
                       const ProblemSpec& spec, const SpatialMesh& mesh,
                       const CollocationGrid& grid);

double norm_U(const SpaceTimeStochField& f, const ProblemSpec& spec, const SpatialMesh& mesh,
              const CollocationGrid& grid);

/// Cost quadrature for an already-computed state. The variance piece is
/// evaluated by the centered sum over nodes and cross-checked against the
/// uncentered route E(y^2) - (E y)^2; disagreement beyond roundoff scale
/// means a broken reduction and throws.
ObjectiveBreakdown objective_from_state(const ProblemSpec& spec, const SpatialMesh& mesh,
                                        const CollocationGrid& grid, const SpaceTimeStochField& state,
                                        const SpaceTimeStochField& control);

/// J(u): forward solve plus cost quadrature.
ObjectiveBreakdown evaluate_objective(const ProblemSpec& spec, const SpatialMesh& mesh,
                                      const RandomFieldModel& model, const CollocationGrid& grid,
                                      const SpaceTimeStochField& control);

/// Riesz representative of J'(u) in the control space: g = beta u + lambda,
/// nodally. Exact for this discretization, not an approximation: the
/// variance cross terms cancel because the weighted node-mean of y - ybar
/// vanishes identically.
SpaceTimeStochField gradient_from_adjoint(const SpaceTimeStochField& control,
                                          const SpaceTimeStochField& adjoint,
                                          const ProblemSpec& spec);

/// The four directional-derivative pieces of J at u in direction v - u:
/// tracking <y_u - y_d, dy>, second_moment alpha <y_u, dy>, mean_square
/// alpha <E y_u, dy> (subtracted from second_moment by the caller), and
/// control beta <u, v - u>. dy is the state difference S(v) - S(u), exact
/// for this linear dynamics. Used by convexity and monotonicity tests.
struct DirectionalTerms {
  double tracking = 0.0;
  double second_moment = 0.0;
  double mean_square = 0.0;
  double control = 0.0;

  double total() const { return tracking + second_moment - mean_square + control; }
};

DirectionalTerms directional_derivative_terms(const ProblemSpec& spec, const SpatialMesh& mesh,
                                              const RandomFieldModel& model,
                                              const CollocationGrid& grid,
                                              const SpaceTimeStochField& u,
                                              const SpaceTimeStochField& v);

} // namespace riskpde
