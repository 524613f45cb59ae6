#include "nmfbs/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nmfbs {

double QuadraticL1Problem::lipschitz() const {
  double L = 0.0;
  for (double qi : q) L = std::max(L, qi);
  return L;
}

QuadraticL1Problem QuadraticL1Problem::random(std::size_t dim,
                                              std::uint64_t seed, double q_min,
                                              double q_max, double c_range,
                                              double sigma, double lambda,
                                              double ua, double ub) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> qd(q_min, q_max);
  std::uniform_real_distribution<double> cd(-c_range, c_range);
  QuadraticL1Problem p;
  p.q.resize(dim);
  p.c.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) p.q[i] = qd(rng);
  for (std::size_t i = 0; i < dim; ++i) p.c[i] = cd(rng);
  p.sigma = sigma;
  p.lambda = lambda;
  p.ua = ua;
  p.ub = ub;
  return p;
}

CompositeObjective make_quadratic_objective(const QuadraticL1Problem& prob,
                                            SpacePtr space) {
  if (prob.q.size() != prob.c.size() || prob.q.empty()) {
    throw std::invalid_argument("quadratic problem: q and c sizes must match");
  }
  for (double qi : prob.q) {
    if (!(qi > 0.0)) throw std::invalid_argument("quadratic problem: q_i must be > 0");
  }
  if (!space) space = make_euclidean_space(prob.dim());
  if (space->dim() != prob.dim()) {
    throw std::invalid_argument("quadratic problem: space dim mismatch");
  }

  auto q = prob.q;
  auto c = prob.c;
  auto value = [q, c](const HilbertVec& u) {
    double s = 0.0;
    const auto& w = u.space()->weights();
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double d = u[i] - c[i];
      s += 0.5 * w[i] * q[i] * d * d;
    }
    return s;
  };
  auto value_grad = [q, c, value](const HilbertVec& u) {
    SmoothEval se;
    se.value = value(u);
    se.grad = HilbertVec(u.space());
    for (std::size_t i = 0; i < u.size(); ++i) {
      se.grad[i] = q[i] * (u[i] - c[i]);
    }
    return se;
  };

  ProxOperator phi =
      prob.sigma > 0.0
          ? ProxOperator::l2_l1_box(space, prob.sigma, prob.lambda, prob.ua,
                                    prob.ub)
          : (prob.lambda > 0.0
                 ? ProxOperator::l1_box(space, prob.lambda, prob.ua, prob.ub)
                 : (std::isinf(prob.ua) && std::isinf(prob.ub)
                        ? ProxOperator::zero(space)
                        : ProxOperator::box(space, prob.ua, prob.ub)));

  return CompositeObjective(space, value, value_grad, std::move(phi),
                            prob.lipschitz());
}

double quadratic_l1_minimizer_1d(double q, double c, double sigma,
                                 double lambda, double ua, double ub) {
  // Stationarity of the 1-D convex objective: q(v-c) + sigma v + lambda sgn(v)
  // has a sign-consistent root, else v = 0; clamping preserves optimality.
  const double denom = q + sigma;
  double v;
  if (q * c > lambda) {
    v = (q * c - lambda) / denom;
  } else if (q * c < -lambda) {
    v = (q * c + lambda) / denom;
  } else {
    v = 0.0;
  }
  return std::min(std::max(v, ua), ub);
}

HilbertVec quadratic_l1_minimizer(const QuadraticL1Problem& prob,
                                  SpacePtr space) {
  if (!space) space = make_euclidean_space(prob.dim());
  HilbertVec u(space);
  for (std::size_t i = 0; i < prob.dim(); ++i) {
    u[i] = quadratic_l1_minimizer_1d(prob.q[i], prob.c[i], prob.sigma,
                                     prob.lambda, prob.ua, prob.ub);
  }
  return u;
}

}  // namespace nmfbs
