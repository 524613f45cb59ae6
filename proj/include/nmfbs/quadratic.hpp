#pragma once

#include <cstdint>
#include <vector>

#include "nmfbs/composite.hpp"

namespace nmfbs {

/// Synthetic diagonal test problem
///   F(u) = 1/2 sum_i q_i (u_i - c_i)^2 + (sigma/2)||u||^2 + lambda ||u||_1
///          + indicator([ua, ub]^n),
/// with q_i > 0. The smooth part has Lipschitz gradient constant max_i q_i,
/// and the minimizer is available in closed form per coordinate, which makes
/// this the workhorse for the solver and theory-check tests.
struct QuadraticL1Problem {
  std::vector<double> q;
  std::vector<double> c;
  double sigma = 0.0;
  double lambda = 0.0;
  double ua = -ProxOperator::kInf;
  double ub = ProxOperator::kInf;

  std::size_t dim() const { return q.size(); }
  double lipschitz() const;

  /// Deterministic instance from a seed: q_i in [q_min, q_max],
  /// c_i in [-c_range, c_range].
  static QuadraticL1Problem random(std::size_t dim, std::uint64_t seed,
                                   double q_min, double q_max, double c_range,
                                   double sigma, double lambda, double ua,
                                   double ub);
};

/// Objective on a Euclidean (unit-weight) space unless another space with the
/// same dimension is supplied. The gradient formula is weight-independent for
/// diagonal spaces.
CompositeObjective make_quadratic_objective(const QuadraticL1Problem& prob,
                                            SpacePtr space = nullptr);

/// Coordinatewise soft-threshold-and-clamp minimizer:
/// argmin_v 1/2 q(v-c)^2 + (sigma/2)v^2 + lambda|v| over [ua, ub].
double quadratic_l1_minimizer_1d(double q, double c, double sigma,
                                 double lambda, double ua, double ub);

/// Closed-form global minimizer of the full problem.
HilbertVec quadratic_l1_minimizer(const QuadraticL1Problem& prob,
                                  SpacePtr space = nullptr);

}  // namespace nmfbs
