#include "nmfbs/pde/parabolic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nmfbs/errors.hpp"

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

Vec cube(const Vec& y) { return y.array().cube(); }
}  // namespace

std::vector<HilbertVec> default_parabolic_desired_state(const Grid2D& grid,
                                                        const SpacePtr& space,
                                                        double T, int nt) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<HilbertVec> out;
  out.reserve(nt);
  for (int m = 1; m <= nt; ++m) {
    const double t = T * m / nt;
    out.push_back(grid.sample(
        [&](double x1, double x2) {
          return std::sin(two_pi * x1) * std::sin(two_pi * x2) *
                 std::cos(two_pi * t / T);
        },
        space));
  }
  return out;
}

ParabolicProblem ParabolicProblem::make(int n, int nt) {
  ParabolicProblem p;
  p.grid = Grid2D::unit_square(n);
  p.nt = nt;
  SpacePtr spatial = p.grid.make_space();
  p.y0 = HilbertVec(spatial);
  p.y_d = default_parabolic_desired_state(p.grid, spatial, p.T, nt);
  p.validate();
  return p;
}

void ParabolicProblem::validate() const {
  if (nt < 2) throw std::invalid_argument("parabolic: nt must be >= 2");
  if (!(T > 0.0)) throw std::invalid_argument("parabolic: T must be > 0");
  if (!(kappa > 0.0)) throw std::invalid_argument("parabolic: kappa must be > 0");
  if (lambda < 0.0) throw std::invalid_argument("parabolic: lambda must be >= 0");
  if (!(ua < 0.0 && 0.0 < ub)) {
    throw std::invalid_argument("parabolic: control bounds must satisfy ua < 0 < ub");
  }
  if (y0.size() != grid.num_nodes()) {
    throw std::invalid_argument("parabolic: y0 size does not match the grid");
  }
  if (y_d.size() != static_cast<std::size_t>(nt)) {
    throw std::invalid_argument("parabolic: y_d must hold nt snapshots");
  }
  for (const auto& d : y_d) {
    if (d.size() != grid.num_nodes()) {
      throw std::invalid_argument("parabolic: y_d snapshot size mismatch");
    }
  }
  // Explicit treatment of the cubic: crude amplitude guard at construction;
  // blow-up is detected at run time as well.
  double amp = max_abs(y0);
  for (const auto& d : y_d) amp = std::max(amp, max_abs(d));
  if (dt() * 3.0 * amp * amp > 1.0) {
    throw std::invalid_argument(
        "parabolic: dt too large for the explicit cubic term");
  }
}

ParabolicSolver::ParabolicSolver(ParabolicProblem prob)
    : prob_(std::move(prob)), linear_(use_direct_solver(prob_.grid.n)) {
  prob_.validate();
  spatial_space_ = prob_.y0.space();
  const std::size_t N = prob_.grid.num_nodes();
  space_ = make_uniform_space(N * prob_.nt,
                              prob_.grid.h * prob_.grid.h * prob_.dt());

  Eigen::SparseMatrix<double> A = prob_.grid.neg_laplacian();
  Eigen::SparseMatrix<double> Id(A.rows(), A.cols());
  Id.setIdentity();
  const double idt = 1.0 / prob_.dt();
  lhs_ = Id * idt + A * (0.5 * prob_.kappa);
  rhs_ = Id * idt - A * (0.5 * prob_.kappa);
  lhs_.makeCompressed();
  rhs_.makeCompressed();
  linear_.factorize(lhs_);
}

std::vector<HilbertVec> ParabolicSolver::solve_state(const HilbertVec& u) {
  const std::size_t N = prob_.grid.num_nodes();
  const int M = prob_.nt;
  if (u.size() != N * static_cast<std::size_t>(M)) {
    throw std::invalid_argument("parabolic state: control dim mismatch");
  }

  std::vector<Vec> traj;
  traj.reserve(M + 1);
  traj.push_back(to_eigen(prob_.y0));
  Vec nl_prev;  // cubic term at y^{m-1}
  for (int m = 0; m < M; ++m) {
    const Vec nl = cube(traj.back());
    Vec forcing = Eigen::Map<const Vec>(u.coeffs().data() + m * N,
                                        static_cast<Eigen::Index>(N));
    Vec b = rhs_ * traj.back() + forcing;
    if (m == 0) {
      b -= nl;  // explicit Euler starter on the cubic
    } else {
      b -= 1.5 * nl - 0.5 * nl_prev;
    }
    Vec y_next = linear_.solve(b);
    if (!y_next.allFinite() || y_next.cwiseAbs().maxCoeff() > 1e8) {
      throw NumericError("parabolic state: blow-up at step " +
                         std::to_string(m + 1));
    }
    nl_prev = nl;
    traj.push_back(std::move(y_next));
  }

  std::vector<HilbertVec> out;
  out.reserve(M + 1);
  for (const auto& y : traj) out.push_back(from_eigen(spatial_space_, y));
  return out;
}

double ParabolicSolver::cost_of_trajectory(
    const std::vector<HilbertVec>& y) const {
  const double dt = prob_.dt();
  double s = 0.0;
  for (int m = 1; m <= prob_.nt; ++m) {
    const HilbertVec diff = sub(y[m], prob_.y_d[m - 1]);
    s += 0.5 * dt * inner(diff, diff);
  }
  return s;
}

double ParabolicSolver::cost(const HilbertVec& u) {
  return cost_of_trajectory(solve_state(u));
}

std::vector<HilbertVec> ParabolicSolver::solve_adjoint(
    const std::vector<HilbertVec>& y) {
  const std::size_t N = prob_.grid.num_nodes();
  const int M = prob_.nt;
  const double dt = prob_.dt();
  const double h2 = prob_.grid.h * prob_.grid.h;

  // Reverse sweep of the linearized forward recurrence. mu^j are Euclidean
  // multipliers of the step equations; the Riesz gradient divides the
  // space-time weight back out.
  std::vector<Vec> mu(M + 1);
  Vec mu_next;       // mu^{j+1}
  Vec mu_next2;      // mu^{j+2}
  for (int j = M; j >= 1; --j) {
    Vec b = dt * h2 * (to_eigen(y[j]) - to_eigen(prob_.y_d[j - 1]));
    if (j <= M - 1) {
      const Vec dj = 3.0 * to_eigen(y[j]).array().square().matrix();
      b += rhs_ * mu_next - 1.5 * dj.cwiseProduct(mu_next);
      if (j <= M - 2) {
        b += 0.5 * dj.cwiseProduct(mu_next2);
      }
    }
    Vec mj = linear_.solve(b);
    mu_next2 = std::move(mu_next);
    mu_next = mj;
    mu[j] = std::move(mj);
  }

  std::vector<HilbertVec> p;
  p.reserve(M);
  const double inv_w = 1.0 / (dt * h2);
  for (int m = 0; m < M; ++m) {
    p.push_back(from_eigen(spatial_space_, Vec(-inv_w * mu[m + 1])));
  }
  return p;
}

SmoothEval ParabolicSolver::reduced_gradient(const HilbertVec& u) {
  const std::vector<HilbertVec> y = solve_state(u);
  SmoothEval se;
  se.value = cost_of_trajectory(y);
  const std::vector<HilbertVec> p = solve_adjoint(y);
  se.grad = HilbertVec(space_);
  const std::size_t N = prob_.grid.num_nodes();
  const double sign = negate_gradient_ ? 1.0 : -1.0;
  for (int m = 0; m < prob_.nt; ++m) {
    for (std::size_t i = 0; i < N; ++i) {
      se.grad[m * N + i] = sign * p[m][i];
    }
  }
  return se;
}

CompositeObjective make_parabolic_objective(
    std::shared_ptr<ParabolicSolver> solver) {
  if (!solver) throw std::invalid_argument("make_parabolic_objective: null solver");
  const auto& prob = solver->problem();
  SpacePtr space = solver->space();
  ProxOperator phi =
      ProxOperator::l1_box(space, prob.lambda, prob.ua, prob.ub);
  auto value = [solver](const HilbertVec& u) { return solver->cost(u); };
  auto value_grad = [solver](const HilbertVec& u) {
    return solver->reduced_gradient(u);
  };
  return CompositeObjective(space, value, value_grad, std::move(phi));
}

}  // namespace nmfbs
