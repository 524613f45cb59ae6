#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nmfbs/composite.hpp"
#include "nmfbs/errors.hpp"
#include "nmfbs/pde/elliptic.hpp"
#include "nmfbs/solver.hpp"

using namespace nmfbs;

namespace {
HilbertVec random_feasible(const EllipticProblem& p, const SpacePtr& space,
                           std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.5 * p.ua, 0.5 * p.ub);
  HilbertVec u(space);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = d(rng);
  return u;
}
}  // namespace

TEST_CASE("stencil eigenpair identity") {
  // The sine mode is an exact eigenvector of the 5-point stencil with
  // eigenvalue (8/h^2) sin^2(pi h / 2); on a fine grid this approaches
  // the continuum value 2 pi^2.
  const Grid2D grid = Grid2D::unit_square(24);
  const auto A = grid.neg_laplacian();
  const double h = grid.h;
  Eigen::VectorXd v(grid.num_nodes());
  for (std::size_t i = 0; i < grid.num_nodes(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        std::sin(std::numbers::pi * grid.x1(i)) *
        std::sin(std::numbers::pi * grid.x2(i));
  }
  const double lam = 8.0 / (h * h) * std::pow(std::sin(std::numbers::pi * h / 2.0), 2);
  const Eigen::VectorXd Av = A * v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    CHECK(Av[i] == doctest::Approx(lam * v[i]).epsilon(1e-10));
  }
  CHECK(lam == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi)
                   .epsilon(2e-2));
}

TEST_CASE("state solve: constant control gives the zero state") {
  EllipticProblem p = EllipticProblem::make(12);
  EllipticSolver solver(p);
  HilbertVec u(solver.space());
  u.fill(1.0);
  const HilbertVec y = solver.solve_state(u);
  CHECK(max_abs(y) <= 1e-12);
  CHECK(solver.last_newton_iters() == 0);
}

TEST_CASE("state solve: manufactured discrete solution") {
  EllipticProblem p = EllipticProblem::make(16);
  EllipticSolver solver(p);
  const Grid2D& grid = p.grid;
  SpacePtr space = solver.space();

  HilbertVec ystar = grid.sample(
      [](double x1, double x2) {
        return std::sin(std::numbers::pi * x1) * std::sin(std::numbers::pi * x2);
      },
      space);
  // u := kappa*(-Lap_h) y* + exp(y*), evaluated with the same stencil.
  const auto A = grid.neg_laplacian();
  Eigen::Map<const Eigen::VectorXd> ye(ystar.coeffs().data(),
                                       static_cast<Eigen::Index>(ystar.size()));
  Eigen::VectorXd ue = p.kappa * (A * ye);
  for (Eigen::Index i = 0; i < ue.size(); ++i) ue[i] += std::exp(ye[i]);
  HilbertVec u(space, std::vector<double>(ue.data(), ue.data() + ue.size()));

  const HilbertVec y = solver.solve_state(u);
  CHECK(norm(sub(y, ystar)) <= 1e-9);

  // Quadratic tail of the Newton residuals (diagnostic, printed only).
  const auto& res = solver.last_newton_residuals();
  if (res.size() >= 3) {
    const double rk = res[res.size() - 2];
    const double rk1 = res.back();
    MESSAGE("newton tail: r_k=", rk, " r_{k+1}=", rk1);
  }
}

TEST_CASE("newton failure surfaces as NumericError") {
  EllipticProblem p = EllipticProblem::make(8);
  p.newton.max_iter = 1;
  EllipticSolver solver(p);
  HilbertVec u(solver.space());
  u.fill(-50.0);
  CHECK_THROWS_AS(solver.solve_state(u), NumericError);
}

TEST_CASE("adjoint solve against a dense oracle") {
  EllipticProblem p = EllipticProblem::make(8);
  EllipticSolver solver(p);
  SpacePtr space = solver.space();
  const std::size_t N = space->dim();

  // y = 0, arbitrary y_d: p solves (kappa*A + I) p = y_d.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  HilbertVec yd(space);
  for (std::size_t i = 0; i < N; ++i) yd[i] = d(rng);
  HilbertVec y0(space);

  const HilbertVec padj = solver.solve_adjoint(y0, yd);

  Eigen::MatrixXd Jd = Eigen::MatrixXd(p.grid.neg_laplacian()) * p.kappa;
  Jd += Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(N),
                                  static_cast<Eigen::Index>(N));
  Eigen::Map<const Eigen::VectorXd> yde(yd.coeffs().data(),
                                        static_cast<Eigen::Index>(N));
  const Eigen::VectorXd pe = Jd.fullPivLu().solve(yde.eval());
  for (std::size_t i = 0; i < N; ++i) {
    CHECK(padj[i] == doctest::Approx(pe[static_cast<Eigen::Index>(i)])
                         .epsilon(1e-10));
  }

  // Zero right-hand side.
  const HilbertVec pz = solver.solve_adjoint(y0, y0);
  CHECK(max_abs(pz) <= 1e-14);
}

TEST_CASE("solves with an SPD operator are self-adjoint") {
  EllipticProblem p = EllipticProblem::make(10);
  EllipticSolver solver(p);
  SpacePtr space = solver.space();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  HilbertVec y(space);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.3 * d(rng);

  for (int rep = 0; rep < 5; ++rep) {
    HilbertVec a(space), b(space);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = d(rng);
      b[i] = d(rng);
    }
    // solve_adjoint(y, y+v) applies (kappa A + diag(e^y))^{-1} to v.
    const HilbertVec Ainv_a = solver.solve_adjoint(y, axpy(1.0, a, y));
    const HilbertVec Ainv_b = solver.solve_adjoint(y, axpy(1.0, b, y));
    CHECK(inner(Ainv_a, b) ==
          doctest::Approx(inner(a, Ainv_b)).epsilon(1e-11));
  }
}

TEST_CASE("reduced gradient: exact cases") {
  EllipticProblem p = EllipticProblem::make(10);

  SUBCASE("u = 1, y_d = 0 gives zero cost and zero gradient") {
    p.y_d = HilbertVec(p.y_d.space());
    EllipticSolver solver(p);
    HilbertVec u(solver.space());
    u.fill(1.0);
    const SmoothEval se = solver.reduced_gradient(u);
    CHECK(se.value == doctest::Approx(0.0));
    CHECK(max_abs(se.grad) <= 1e-12);
  }

  SUBCASE("y_d = y(u) gives zero cost and gradient at u") {
    EllipticSolver pre(p);
    std::mt19937_64 rng(5);
    const HilbertVec u = random_feasible(p, pre.space(), rng);
    p.y_d = pre.solve_state(u);
    EllipticSolver solver(p);
    const SmoothEval se = solver.reduced_gradient(u);
    CHECK(se.value <= 1e-18);
    CHECK(max_abs(se.grad) <= 1e-10);
  }
}

TEST_CASE("adjoint gradient matches central differences") {
  EllipticProblem p = EllipticProblem::make(16);
  EllipticSolver solver(p);
  SpacePtr space = solver.space();
  std::mt19937_64 rng(31);
  const HilbertVec u = random_feasible(p, space, rng);
  const SmoothEval se = solver.reduced_gradient(u);

  std::normal_distribution<double> nd(0.0, 1.0);
  const double eps = 1e-5;
  for (int dir = 0; dir < 5; ++dir) {
    HilbertVec h(space);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = nd(rng);
    const double hn = norm(h);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] /= hn;

    const double fp = solver.cost(axpy(eps, h, u));
    const double fm = solver.cost(axpy(-eps, h, u));
    const double fd = (fp - fm) / (2.0 * eps);
    const double an = inner(se.grad, h);
    CHECK(std::abs(fd - an) / std::max(1.0, std::abs(an)) <= 1e-4);
  }
}

TEST_CASE("warm starting never takes more Newton steps than cold") {
  EllipticProblem p = EllipticProblem::make(12);
  auto warm = std::make_shared<EllipticSolver>(p);
  CompositeObjective obj = make_elliptic_objective(warm);

  SolverConfig cfg;
  cfg.rule = StepRule::BB1a;
  cfg.tol = 1e-4;
  cfg.max_iter = 12;
  cfg.record_snapshots = true;
  const SolverResult res = solve(obj, cfg, HilbertVec(warm->space()));

  EllipticSolver warm2(p);
  EllipticSolver cold(p);
  long warm_total = 0, cold_total = 0;
  for (const auto& snap : res.snapshots) {
    warm2.solve_state(snap);
    warm_total += warm2.last_newton_iters();
    HilbertVec zero(warm->space());
    cold.solve_state(snap, &zero);
    cold_total += cold.last_newton_iters();
  }
  CHECK(warm_total <= cold_total);
}

TEST_CASE("curvature probe") {
  EllipticProblem p = EllipticProblem::make(10);
  std::mt19937_64 rng(41);

  SUBCASE("zero direction") {
    EllipticSolver solver(p);
    HilbertVec h(solver.space());
    const HilbertVec u = random_feasible(p, solver.space(), rng);
    CHECK(solver.curvature_probe(u, h) == 0.0);
  }

  SUBCASE("vanishing adjoint leaves the positive tracking term") {
    EllipticSolver pre(p);
    const HilbertVec u = random_feasible(p, pre.space(), rng);
    p.y_d = pre.solve_state(u);
    EllipticSolver solver(p);
    HilbertVec h(solver.space());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = 1.0;
    CHECK(solver.curvature_probe(u, h) > 0.0);
  }

  SUBCASE("matches a second-order central difference of the cost") {
    EllipticSolver solver(p);
    const HilbertVec u = random_feasible(p, solver.space(), rng);
    std::normal_distribution<double> nd(0.0, 1.0);
    HilbertVec h(solver.space());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = nd(rng);
    const double hn = norm(h);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] /= hn;

    const double probe = solver.curvature_probe(u, h);
    const double eps = 1e-3;
    const double f0 = solver.cost(u);
    const double fp = solver.cost(axpy(eps, h, u));
    const double fm = solver.cost(axpy(-eps, h, u));
    const double fd = (fp - 2.0 * f0 + fm) / (eps * eps);
    CHECK(std::abs(probe - fd) <= 1e-3 * (1.0 + std::abs(probe)));
  }
}

TEST_CASE("elliptic objective satisfies the composite-module properties") {
  EllipticProblem p = EllipticProblem::make(8);
  auto solver = std::make_shared<EllipticSolver>(p);
  CompositeObjective obj = make_elliptic_objective(solver);
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> ld(std::log(1e-1), std::log(1e2));
  for (int rep = 0; rep < 10; ++rep) {
    const HilbertVec u = random_feasible(p, solver->space(), rng);
    const SmoothEval se = obj.smooth_value_grad(u);
    double l1 = std::exp(ld(rng)), l2 = std::exp(ld(rng));
    if (l1 < l2) std::swap(l1, l2);
    const HilbertVec g1 = prox_grad(obj, u, l1, &se.grad).g;
    const HilbertVec g2 = prox_grad(obj, u, l2, &se.grad).g;
    CHECK(norm(g1) / l1 <= (norm(g2) / l2) * (1.0 + 1e-10));
    CHECK(norm(g1) * (1.0 + 1e-10) >= norm(g2));

    // Minimizer inequality of the model.
    const double alpha = l2;
    const ProxGradResult r = prox_grad(obj, u, alpha, &se.grad);
    const double lhs = inner(se.grad, sub(r.t, u)) +
                       inner(r.g, r.g) / (2.0 * alpha) +
                       obj.nonsmooth().value(r.t);
    const double rhs = obj.nonsmooth().value(u);
    CHECK(lhs <= rhs + 1e-12 * (1.0 + std::abs(rhs)));
  }
}
