#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "nmfbs/hilbert.hpp"
#include "nmfbs/prox.hpp"

namespace nmfbs {

/// Smooth-part evaluation: f(u) together with its Riesz gradient in H.
/// For PDE objectives both come out of one state solve plus one adjoint
/// solve, so they are always produced together.
struct SmoothEval {
  double value = 0.0;
  HilbertVec grad;
};

/// Composite objective F = f + phi: a smooth part (value and gradient) paired
/// with a nonsmooth prox-friendly part. Immutable and shareable; any caches
/// behind the callables must be confined to one solver instance.
class CompositeObjective {
public:
  using ValueFn = std::function<double(const HilbertVec&)>;
  using ValueGradFn = std::function<SmoothEval(const HilbertVec&)>;

  CompositeObjective(SpacePtr space, ValueFn smooth_value,
                     ValueGradFn smooth_value_grad, ProxOperator nonsmooth,
                     std::optional<double> lipschitz_grad = std::nullopt);

  /// f(u). One "function evaluation" in the counting contract.
  double smooth_value(const HilbertVec& u) const { return value_(u); }

  /// f(u) and grad f(u). One "gradient-like evaluation".
  SmoothEval smooth_value_grad(const HilbertVec& u) const {
    return value_grad_(u);
  }

  const ProxOperator& nonsmooth() const { return nonsmooth_; }
  const SpacePtr& space() const { return space_; }
  std::optional<double> lipschitz_grad() const { return lipschitz_grad_; }

private:
  SpacePtr space_;
  ValueFn value_;
  ValueGradFn value_grad_;
  ProxOperator nonsmooth_;
  std::optional<double> lipschitz_grad_;
};

/// One prox-grad application: t = T_alpha(u), g = G_alpha(u) = alpha*(u - t),
/// with the gradient of f at u that produced it.
struct ProxGradResult {
  HilbertVec t;
  HilbertVec g;
  double alpha = 0.0;
  HilbertVec f_grad_at_u;
};

/// T_alpha(u) = prox_{(1/alpha) phi}(u - (1/alpha) grad f(u)). If grad_u is
/// supplied no new gradient evaluation happens (the counting contract relies
/// on this). Throws NumericError on a non-finite gradient.
ProxGradResult prox_grad(const CompositeObjective& obj, const HilbertVec& u,
                         double alpha, const HilbertVec* grad_u = nullptr);

/// Quadratic model around u:
/// Q_alpha(w, u) = f(u) + (grad f(u), w-u) + (alpha/2)||w-u||^2 + phi(w).
double model_value(const CompositeObjective& obj, const HilbertVec& w,
                   const HilbertVec& u, double alpha);

/// F(u) = f(u) + phi(u); +inf when u violates the box.
double objective_value(const CompositeObjective& obj, const HilbertVec& u);

}  // namespace nmfbs
