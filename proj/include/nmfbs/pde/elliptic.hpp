#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "nmfbs/composite.hpp"
#include "nmfbs/pde/grid.hpp"

namespace nmfbs {

struct NewtonOptions {
  double tol = 1e-10;  // residual in the discrete L2 norm
  int max_iter = 50;
};

/// Semilinear elliptic control problem on the unit square:
/// minimize 1/2 ||y - y_d||^2 + (sigma/2)||u||^2 + lambda ||u||_L1 over
/// ua <= u <= ub, subject to -kappa*Lap(y) + exp(y) = u with zero boundary.
struct EllipticProblem {
  Grid2D grid;
  double kappa = 1e-2;
  double sigma = 1e-4;
  double lambda = 1e-3;
  double ua = -3.0;
  double ub = 2.0;
  HilbertVec y_d;  // desired state on the grid space
  NewtonOptions newton;

  /// Problem with the built-in desired state sin(2*pi*x1)*sin(2*pi*x2).
  static EllipticProblem make(int n);

  void validate() const;
};

/// Default desired state sampled at the grid nodes.
HilbertVec default_elliptic_desired_state(const Grid2D& grid,
                                          const SpacePtr& space);

/// State, adjoint, reduced-gradient, and curvature computations for one
/// elliptic problem. Holds the assembled stencil, a warm-start state cache,
/// and the last Jacobian factorization; use one instance per solver thread.
class EllipticSolver {
public:
  explicit EllipticSolver(EllipticProblem prob);

  const EllipticProblem& problem() const { return prob_; }
  const SpacePtr& space() const { return space_; }

  /// Newton solve of the discrete state equation. Warm starts from the last
  /// converged state unless warm_start supplies an explicit initial guess.
  /// Throws NumericError when Newton fails to converge.
  HilbertVec solve_state(const HilbertVec& u,
                         const HilbertVec* warm_start = nullptr);

  /// Linear solve with the state Jacobian at y:
  /// (kappa*(-Lap_h) + diag(exp(y))) p = -(y - y_d).
  HilbertVec solve_adjoint(const HilbertVec& y, const HilbertVec& y_d);

  /// f(u) = 1/2 ||y(u) - y_d||^2 and grad f(u) = -p(u); one state solve plus
  /// one adjoint solve.
  SmoothEval reduced_gradient(const HilbertVec& u);

  /// f(u) alone; one state solve.
  double cost(const HilbertVec& u);

  /// Second-derivative quadratic form of the smooth part along h:
  /// solves the linearized state equation at u_star and returns
  /// ||y^h||^2 + sum_i w_i p*_i exp(y*_i) (y^h_i)^2.
  double curvature_probe(const HilbertVec& u_star, const HilbertVec& h);

  /// Newton iteration count of the most recent state solve.
  int last_newton_iters() const { return last_newton_iters_; }
  const std::vector<double>& last_newton_residuals() const {
    return last_newton_residuals_;
  }

  void clear_warm_start() { have_cache_ = false; }

  /// Test hook: negates the reduced gradient, breaking adjoint consistency.
  void set_negate_gradient(bool v) { negate_gradient_ = v; }

private:
  void factorize_jacobian(const HilbertVec& y);

  EllipticProblem prob_;
  SpacePtr space_;
  Eigen::SparseMatrix<double> stiffness_;  // kappa * (-Lap_h)
  SpdSolver linear_;
  HilbertVec cached_state_;   // last converged state (warm start)
  HilbertVec cached_jac_y_;   // state the cached factorization belongs to
  bool have_cache_ = false;
  bool have_factorization_ = false;
  int last_newton_iters_ = 0;
  std::vector<double> last_newton_residuals_;
  bool negate_gradient_ = false;
};

/// Composite objective F = f + phi for an elliptic problem. The returned
/// objective closes over the given solver instance (its warm-start cache),
/// so build one solver per concurrent optimization run.
CompositeObjective make_elliptic_objective(std::shared_ptr<EllipticSolver> solver);

}  // namespace nmfbs
