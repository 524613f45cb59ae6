#include "nmfbs/pde/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nmfbs/errors.hpp"
#include "nmfbs/log.hpp"

namespace nmfbs {

namespace {
using Vec = Eigen::VectorXd;

Vec to_eigen(const HilbertVec& v) {
  return Eigen::Map<const Vec>(v.coeffs().data(),
                               static_cast<Eigen::Index>(v.size()));
}

HilbertVec from_eigen(const SpacePtr& space, const Vec& v) {
  return HilbertVec(space,
                    std::vector<double>(v.data(), v.data() + v.size()));
}
}  // namespace

HilbertVec default_elliptic_desired_state(const Grid2D& grid,
                                          const SpacePtr& space) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return grid.sample(
      [&](double x1, double x2) {
        return std::sin(two_pi * x1) * std::sin(two_pi * x2);
      },
      space);
}

EllipticProblem EllipticProblem::make(int n) {
  EllipticProblem p;
  p.grid = Grid2D::unit_square(n);
  p.y_d = default_elliptic_desired_state(p.grid, p.grid.make_space());
  p.validate();
  return p;
}

void EllipticProblem::validate() const {
  if (!(kappa > 0.0)) throw std::invalid_argument("elliptic: kappa must be > 0");
  if (sigma < 0.0 || lambda < 0.0) {
    throw std::invalid_argument("elliptic: sigma, lambda must be >= 0");
  }
  if (!(ua < 0.0 && 0.0 < ub)) {
    throw std::invalid_argument("elliptic: control bounds must satisfy ua < 0 < ub");
  }
  if (y_d.size() != grid.num_nodes()) {
    throw std::invalid_argument("elliptic: y_d size does not match the grid");
  }
}

EllipticSolver::EllipticSolver(EllipticProblem prob)
    : prob_(std::move(prob)),
      space_(prob_.y_d.space()),
      linear_(use_direct_solver(prob_.grid.n)) {
  prob_.validate();
  stiffness_ = prob_.grid.neg_laplacian() * prob_.kappa;
}

void EllipticSolver::factorize_jacobian(const HilbertVec& y) {
  if (have_factorization_ && same_space(cached_jac_y_, y) &&
      cached_jac_y_.coeffs() == y.coeffs()) {
    return;
  }
  Eigen::SparseMatrix<double> J = stiffness_;
  for (std::size_t i = 0; i < y.size(); ++i) {
    J.coeffRef(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +=
        std::exp(y[i]);
  }
  linear_.factorize(J);
  if (!linear_.ok()) throw NumericError("elliptic: Jacobian factorization failed");
  cached_jac_y_ = copy(y);
  have_factorization_ = true;
}

HilbertVec EllipticSolver::solve_state(const HilbertVec& u,
                                       const HilbertVec* warm_start) {
  const std::size_t N = prob_.grid.num_nodes();
  if (u.size() != N) throw std::invalid_argument("elliptic state: dim mismatch");

  HilbertVec y = warm_start ? copy(*warm_start)
                            : (have_cache_ ? copy(cached_state_)
                                           : HilbertVec(space_));
  const Vec ue = to_eigen(u);
  last_newton_residuals_.clear();

  auto residual = [&](const HilbertVec& yv, Vec& r_out) {
    const Vec ye = to_eigen(yv);
    r_out = stiffness_ * ye - ue;
    for (std::size_t i = 0; i < N; ++i) {
      r_out[static_cast<Eigen::Index>(i)] += std::exp(yv[i]);
    }
    HilbertVec rh = from_eigen(space_, r_out);
    return norm(rh);
  };

  Vec r;
  double rnorm = residual(y, r);
  last_newton_residuals_.push_back(rnorm);
  int it = 0;
  while (rnorm > prob_.newton.tol) {
    if (it >= prob_.newton.max_iter) {
      throw NumericError("elliptic state: Newton did not converge (residual " +
                         std::to_string(rnorm) + ")");
    }
    factorize_jacobian(y);
    const Vec delta = linear_.solve(-r);
    // Residual-monotone damping; full steps are the common case.
    double step = 1.0;
    HilbertVec y_try = copy(y);
    Vec r_try;
    double rnorm_try;
    for (int halvings = 0;; ++halvings) {
      for (std::size_t i = 0; i < N; ++i) {
        y_try[i] = y[i] + step * delta[static_cast<Eigen::Index>(i)];
      }
      rnorm_try = residual(y_try, r_try);
      if (rnorm_try < rnorm || halvings >= 30) break;
      step *= 0.5;
    }
    if (!std::isfinite(rnorm_try)) {
      throw NumericError("elliptic state: non-finite Newton residual");
    }
    y = std::move(y_try);
    r = std::move(r_try);
    rnorm = rnorm_try;
    last_newton_residuals_.push_back(rnorm);
    ++it;
  }
  last_newton_iters_ = it;
  NMFBS_LOG_DEBUG("elliptic state solve: " << it << " Newton steps, residual "
                                           << rnorm);
  cached_state_ = copy(y);
  have_cache_ = true;
  return y;
}

HilbertVec EllipticSolver::solve_adjoint(const HilbertVec& y,
                                         const HilbertVec& y_d) {
  factorize_jacobian(y);
  const Vec rhs = -(to_eigen(y) - to_eigen(y_d));
  return from_eigen(space_, linear_.solve(rhs));
}

SmoothEval EllipticSolver::reduced_gradient(const HilbertVec& u) {
  const HilbertVec y = solve_state(u);
  const HilbertVec diff = sub(y, prob_.y_d);
  SmoothEval se;
  se.value = 0.5 * inner(diff, diff);
  const HilbertVec p = solve_adjoint(y, prob_.y_d);
  se.grad = scale(negate_gradient_ ? 1.0 : -1.0, p);
  return se;
}

double EllipticSolver::cost(const HilbertVec& u) {
  const HilbertVec y = solve_state(u);
  const HilbertVec diff = sub(y, prob_.y_d);
  return 0.5 * inner(diff, diff);
}

double EllipticSolver::curvature_probe(const HilbertVec& u_star,
                                       const HilbertVec& h) {
  const HilbertVec y = solve_state(u_star);
  const HilbertVec p = solve_adjoint(y, prob_.y_d);
  factorize_jacobian(y);
  const HilbertVec yh = from_eigen(space_, linear_.solve(to_eigen(h)));
  double quad = inner(yh, yh);
  const auto& w = space_->weights();
  for (std::size_t i = 0; i < yh.size(); ++i) {
    quad += w[i] * p[i] * std::exp(y[i]) * yh[i] * yh[i];
  }
  return quad;
}

CompositeObjective make_elliptic_objective(
    std::shared_ptr<EllipticSolver> solver) {
  if (!solver) throw std::invalid_argument("make_elliptic_objective: null solver");
  const auto& prob = solver->problem();
  SpacePtr space = solver->space();
  ProxOperator phi = ProxOperator::l2_l1_box(space, prob.sigma, prob.lambda,
                                             prob.ua, prob.ub);
  auto value = [solver](const HilbertVec& u) { return solver->cost(u); };
  auto value_grad = [solver](const HilbertVec& u) {
    return solver->reduced_gradient(u);
  };
  return CompositeObjective(space, value, value_grad, std::move(phi));
}

}  // namespace nmfbs
