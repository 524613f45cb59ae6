#pragma once

#include <memory>
#include <vector>

#include "nmfbs/composite.hpp"
#include "nmfbs/pde/grid.hpp"

namespace nmfbs {

/// Semilinear parabolic control problem on (0,T) x unit square:
/// minimize 1/2 ||y - y_d||^2 + lambda ||u||_L1 over ua <= u <= ub, subject
/// to dy/dt - kappa*Lap(y) + y^3 = u, zero boundary, y(0) = y0. Controls are
/// piecewise constant on the nt time intervals; the space-time vector is
/// time-major with weights h^2 * dt.
struct ParabolicProblem {
  Grid2D grid;
  double T = 1.0;
  int nt = 20;
  double kappa = 1e-2;
  double lambda = 1e-2;
  double ua = -100.0;
  double ub = 100.0;
  HilbertVec y0;                  // initial state on the spatial space
  std::vector<HilbertVec> y_d;    // desired states at t_1 .. t_nt

  double dt() const { return T / nt; }

  /// Problem with y0 = 0 and the built-in desired state
  /// sin(2*pi*x1)*sin(2*pi*x2)*cos(2*pi*t/T).
  static ParabolicProblem make(int n, int nt);

  void validate() const;
};

std::vector<HilbertVec> default_parabolic_desired_state(const Grid2D& grid,
                                                        const SpacePtr& space,
                                                        double T, int nt);

/// Forward IMEX march (Crank-Nicolson diffusion, two-step Adams-Bashforth on
/// the cubic with an explicit Euler starter) and the exact transpose of its
/// linearization as the adjoint. One instance per optimization run.
class ParabolicSolver {
public:
  explicit ParabolicSolver(ParabolicProblem prob);

  const ParabolicProblem& problem() const { return prob_; }
  /// Space-time control space (dim n^2 * nt).
  const SpacePtr& space() const { return space_; }
  const SpacePtr& spatial_space() const { return spatial_space_; }

  /// Trajectory y^0..y^nt. Throws NumericError on blow-up.
  std::vector<HilbertVec> solve_state(const HilbertVec& u);

  /// Tracking cost 1/2 sum_m dt ||y^m - y_d^m||^2 from a trajectory.
  double cost_of_trajectory(const std::vector<HilbertVec>& y) const;

  double cost(const HilbertVec& u);
  SmoothEval reduced_gradient(const HilbertVec& u);

  /// Adjoint trajectory p^1..p^nt for a given forward trajectory; the
  /// space-time gradient is -p sampled on the control intervals.
  std::vector<HilbertVec> solve_adjoint(const std::vector<HilbertVec>& y);

  void set_negate_gradient(bool v) { negate_gradient_ = v; }

private:
  ParabolicProblem prob_;
  SpacePtr space_;
  SpacePtr spatial_space_;
  Eigen::SparseMatrix<double> lhs_;   // I/dt + (kappa/2)(-Lap_h)
  Eigen::SparseMatrix<double> rhs_;   // I/dt - (kappa/2)(-Lap_h)
  SpdSolver linear_;                  // factorization of the constant lhs
  bool negate_gradient_ = false;
};

CompositeObjective make_parabolic_objective(
    std::shared_ptr<ParabolicSolver> solver);

}  // namespace nmfbs
