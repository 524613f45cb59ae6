#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>

#include "nmfbs/hilbert.hpp"

namespace nmfbs {

/// Uniform grid on the unit square: n interior nodes per axis, spacing
/// h = 1/(n+1), homogeneous Dirichlet boundary, row-major interior ordering.
/// Lumped-mass weights are h^2 per node.
struct Grid2D {
  int n = 0;
  double h = 0.0;

  static Grid2D unit_square(int n);

  std::size_t num_nodes() const { return static_cast<std::size_t>(n) * n; }
  // Node idx = row * n + col, row/col in [0, n).
  double x1(std::size_t idx) const { return h * (static_cast<double>(idx % n) + 1.0); }
  double x2(std::size_t idx) const { return h * (static_cast<double>(idx / n) + 1.0); }

  SpacePtr make_space() const;

  /// Five-point stencil for -Laplace_h (no diffusion factor), SPD.
  Eigen::SparseMatrix<double> neg_laplacian() const;

  /// Samples f(x1, x2) at the interior nodes.
  template <typename F>
  HilbertVec sample(const F& f, const SpacePtr& space) const {
    HilbertVec v(space);
    for (std::size_t i = 0; i < num_nodes(); ++i) v[i] = f(x1(i), x2(i));
    return v;
  }
};

/// SPD solver over the grid operator kappa*(-Laplace_h) + diag(r): sparse
/// Cholesky for n <= 128, diagonally preconditioned CG (relative tolerance
/// 1e-12) beyond that. Deterministic either way.
class SpdSolver {
public:
  explicit SpdSolver(bool use_direct);

  void factorize(const Eigen::SparseMatrix<double>& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  bool ok() const { return ok_; }

private:
  bool use_direct_;
  bool analyzed_ = false;
  bool ok_ = false;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
  Eigen::SparseMatrix<double> mat_;  // kept for the CG path
};

bool use_direct_solver(int n);

}  // namespace nmfbs
