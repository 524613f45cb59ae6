#include "nmfbs/pde/grid.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <stdexcept>
#include <vector>

#include "nmfbs/errors.hpp"

namespace nmfbs {

Grid2D Grid2D::unit_square(int n) {
  if (n < 2) throw std::invalid_argument("Grid2D: n must be >= 2");
  Grid2D g;
  g.n = n;
  g.h = 1.0 / (n + 1);
  return g;
}

SpacePtr Grid2D::make_space() const {
  return make_uniform_space(num_nodes(), h * h);
}

Eigen::SparseMatrix<double> Grid2D::neg_laplacian() const {
  const int N = n * n;
  const double ih2 = 1.0 / (h * h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5) * N);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const int idx = row * n + col;
      trip.emplace_back(idx, idx, 4.0 * ih2);
      if (col > 0) trip.emplace_back(idx, idx - 1, -ih2);
      if (col < n - 1) trip.emplace_back(idx, idx + 1, -ih2);
      if (row > 0) trip.emplace_back(idx, idx - n, -ih2);
      if (row < n - 1) trip.emplace_back(idx, idx + n, -ih2);
    }
  }
  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

bool use_direct_solver(int n) { return n <= 128; }

SpdSolver::SpdSolver(bool use_direct) : use_direct_(use_direct) {}

void SpdSolver::factorize(const Eigen::SparseMatrix<double>& A) {
  if (use_direct_) {
    if (!analyzed_) {
      llt_.analyzePattern(A);
      analyzed_ = true;
    }
    llt_.factorize(A);
    ok_ = llt_.info() == Eigen::Success;
  } else {
    mat_ = A;
    ok_ = true;
  }
}

Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd& rhs) const {
  if (!ok_) throw NumericError("SpdSolver: factorization failed");
  if (use_direct_) {
    return llt_.solve(rhs);
  }
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                           Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(1e-12);
  cg.compute(mat_);
  Eigen::VectorXd x = cg.solve(rhs);
  if (cg.info() != Eigen::Success) {
    throw NumericError("SpdSolver: CG did not reach the requested tolerance");
  }
  return x;
}

}  // namespace nmfbs
