#include "nmfbs/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace nmfbs {

ProxOperator::ProxOperator(ProxVariant variant, SpacePtr space, double sigma,
                           double lambda, double ua, double ub)
    : variant_(variant),
      space_(std::move(space)),
      sigma_(sigma),
      lambda_(lambda),
      ua_(ua),
      ub_(ub) {
  if (!space_) throw std::invalid_argument("ProxOperator: null space");
  if (sigma_ < 0.0 || lambda_ < 0.0) {
    throw std::invalid_argument("ProxOperator: sigma and lambda must be >= 0");
  }
  if (std::isnan(ua_) || std::isnan(ub_) || !(ua_ < ub_)) {
    throw std::invalid_argument("ProxOperator: requires ua < ub");
  }
}

ProxOperator ProxOperator::zero(SpacePtr space) {
  return ProxOperator(ProxVariant::Zero, std::move(space), 0.0, 0.0, -kInf,
                      kInf);
}

ProxOperator ProxOperator::box(SpacePtr space, double ua, double ub) {
  return ProxOperator(ProxVariant::BoxOnly, std::move(space), 0.0, 0.0, ua, ub);
}

ProxOperator ProxOperator::l1_box(SpacePtr space, double lambda, double ua,
                                  double ub) {
  return ProxOperator(ProxVariant::L1Box, std::move(space), 0.0, lambda, ua,
                      ub);
}

ProxOperator ProxOperator::l2_l1_box(SpacePtr space, double sigma,
                                     double lambda, double ua, double ub) {
  return ProxOperator(ProxVariant::L2L1Box, std::move(space), sigma, lambda,
                      ua, ub);
}

double ProxOperator::apply_scalar(double alpha, double x) const {
  if (variant_ == ProxVariant::Zero) return x;
  const double c1 = 1.0 + sigma_ / alpha;
  const double c2 = lambda_ / alpha;
  double s;
  if (x > c2) {
    s = (x - c2) / c1;
  } else if (x < -c2) {
    s = (x + c2) / c1;
  } else {
    s = 0.0;
  }
  return std::min(std::max(s, ua_), ub_);
}

HilbertVec ProxOperator::apply(double alpha, const HilbertVec& u) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("prox: alpha must be > 0");
  HilbertVec v(u.space(), u.coeffs());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = apply_scalar(alpha, v[i]);
  }
  return v;
}

double ProxOperator::value(const HilbertVec& u) const {
  if (variant_ == ProxVariant::Zero) return 0.0;
  const auto& w = space_->weights();
  double l1 = 0.0;
  double l2sq = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u[i];
    if (x < ua_ || x > ub_) return kInf;
    l1 += w[i] * std::abs(x);
    l2sq += w[i] * x * x;
  }
  return 0.5 * sigma_ * l2sq + lambda_ * l1;
}

double prox_oracle_1d(const ProxOperator& op, double alpha, double x) {
  if (!(alpha > 0.0)) throw std::invalid_argument("prox oracle: alpha <= 0");
  double a = op.lower();
  double b = op.upper();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("prox oracle: requires a finite box");
  }
  const double sigma = op.sigma();
  const double lambda = op.lambda();
  auto g = [&](double v) {
    return 0.5 * sigma * v * v + lambda * std::abs(v) +
           0.5 * alpha * (v - x) * (v - x);
  };
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > 1e-10) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - invphi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + invphi * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace nmfbs
