#include "nmfbs/composite.hpp"

#include <cmath>
#include <stdexcept>

#include "nmfbs/errors.hpp"

namespace nmfbs {

CompositeObjective::CompositeObjective(SpacePtr space, ValueFn smooth_value,
                                       ValueGradFn smooth_value_grad,
                                       ProxOperator nonsmooth,
                                       std::optional<double> lipschitz_grad)
    : space_(std::move(space)),
      value_(std::move(smooth_value)),
      value_grad_(std::move(smooth_value_grad)),
      nonsmooth_(std::move(nonsmooth)),
      lipschitz_grad_(lipschitz_grad) {
  if (!space_) throw std::invalid_argument("CompositeObjective: null space");
  if (!value_ || !value_grad_) {
    throw std::invalid_argument("CompositeObjective: missing smooth callbacks");
  }
  if (lipschitz_grad_ && !(*lipschitz_grad_ > 0.0)) {
    throw std::invalid_argument("CompositeObjective: lipschitz_grad must be > 0");
  }
}

ProxGradResult prox_grad(const CompositeObjective& obj, const HilbertVec& u,
                         double alpha, const HilbertVec* grad_u) {
  if (!(alpha > 0.0)) throw std::invalid_argument("prox_grad: alpha must be > 0");
  HilbertVec grad =
      grad_u ? copy(*grad_u) : obj.smooth_value_grad(u).grad;
  if (!grad.all_finite()) {
    throw NumericError("prox_grad: non-finite gradient");
  }
  // Forward point u - (1/alpha) grad, then the backward (prox) step.
  HilbertVec forward = axpy(-1.0 / alpha, grad, u);
  HilbertVec t = obj.nonsmooth().apply(alpha, forward);
  HilbertVec g = scale(alpha, sub(u, t));
  return ProxGradResult{std::move(t), std::move(g), alpha, std::move(grad)};
}

double model_value(const CompositeObjective& obj, const HilbertVec& w,
                   const HilbertVec& u, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("model_value: alpha must be > 0");
  const SmoothEval se = obj.smooth_value_grad(u);
  const HilbertVec d = sub(w, u);
  return se.value + inner(se.grad, d) + 0.5 * alpha * inner(d, d) +
         obj.nonsmooth().value(w);
}

double objective_value(const CompositeObjective& obj, const HilbertVec& u) {
  const double phi = obj.nonsmooth().value(u);
  if (std::isinf(phi)) return phi;
  return obj.smooth_value(u) + phi;
}

}  // namespace nmfbs
