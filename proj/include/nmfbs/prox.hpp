#pragma once

#include <limits>

#include "nmfbs/hilbert.hpp"

namespace nmfbs {

enum class ProxVariant { Zero, BoxOnly, L1Box, L2L1Box };

/// Nonsmooth part phi(u) = (sigma/2)||u||^2 + lambda*||u||_L1 + indicator of
/// the box [ua, ub], together with its pointwise closed-form proximal map.
/// All four variants share one code path with C1 = 1 + sigma/alpha and
/// C2 = lambda/alpha; the prox output never depends on the space weights
/// (diagonal weights cancel componentwise).
class ProxOperator {
public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static ProxOperator zero(SpacePtr space);
  static ProxOperator box(SpacePtr space, double ua, double ub);
  static ProxOperator l1_box(SpacePtr space, double lambda, double ua,
                             double ub);
  static ProxOperator l2_l1_box(SpacePtr space, double sigma, double lambda,
                                double ua, double ub);

  ProxVariant variant() const { return variant_; }
  double sigma() const { return sigma_; }
  double lambda() const { return lambda_; }
  double lower() const { return ua_; }
  double upper() const { return ub_; }
  const SpacePtr& space() const { return space_; }

  /// prox_{(1/alpha) phi}(u) = argmin_v phi(v) + (alpha/2)||v - u||^2,
  /// evaluated componentwise: shrink then clamp.
  HilbertVec apply(double alpha, const HilbertVec& u) const;

  /// phi(u); +inf if any component violates the box. The L1 and L2 terms use
  /// the space weights (discrete L1/L2 norms).
  double value(const HilbertVec& u) const;

  /// Scalar prox applied to a single component value.
  double apply_scalar(double alpha, double x) const;

private:
  ProxOperator(ProxVariant variant, SpacePtr space, double sigma,
               double lambda, double ua, double ub);

  ProxVariant variant_;
  SpacePtr space_;
  double sigma_;
  double lambda_;
  double ua_;
  double ub_;
};

/// Slow 1-D validation oracle: minimizes the per-component objective
/// (sigma/2)v^2 + lambda|v| + (alpha/2)(v - x)^2 over the finite box [ua, ub]
/// by golden-section search to absolute tolerance 1e-10. Test use only.
double prox_oracle_1d(const ProxOperator& op, double alpha, double x);

}  // namespace nmfbs
