// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nmfbs/composite.hpp"
#include "nmfbs/pde/elliptic.hpp"
#include "nmfbs/pde/parabolic.hpp"
#include "nmfbs/prox.hpp"
#include "nmfbs/quadratic.hpp"
#include "nmfbs/solver.hpp"
#include "nmfbs/verify.hpp"

using namespace nmfbs;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Criterion {
  const char* name;
  double budget_s;
  Clock::time_point start = Clock::now();
  bool ok = true;
  std::string note;

  Criterion(const char* n, double budget) : name(n), budget_s(budget) {}

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note = what;
    ok = ok && cond;
  }

  void finish() {
    const double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > budget_s) {
      ok = false;
      note += (note.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("%s %-28s (%.1fs/%.0fs)%s%s\n", ok ? "PASS" : "FAIL", name,
                secs, budget_s, note.empty() ? "" : " - ", note.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
  }
};

SolverConfig bench_solver_config() {
  SolverConfig cfg;
  cfg.delta = 0.9;
  cfg.m_max = 8;
  cfg.eta = 8.0;
  cfg.alpha_lb = 1e-4;
  cfg.alpha_ub = 1e2;
  cfg.alpha0 = 10.0;
  cfg.tol = 1e-6;
  return cfg;
}

// --- 1. Prox closed form vs golden-section oracle --------------------------
void criterion_prox_oracle() {
  Criterion c("1 prox-oracle-equivalence", 5.0);
  auto space = make_euclidean_space(1);
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> la(std::log(1e-4), std::log(1e2));
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  std::uniform_real_distribution<double> sig(1e-6, 1.0);
  std::uniform_real_distribution<double> xs(-8.0, 8.0);
  std::bernoulli_distribution szero(0.5);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double alpha = std::exp(la(rng));
    const double sigma = szero(rng) ? 0.0 : sig(rng);
    auto op = ProxOperator::l2_l1_box(space, sigma, lam(rng), -3.0, 2.0);
    const double x = xs(rng);
    worst = std::max(worst,
                     std::abs(op.apply_scalar(alpha, x) -
                              prox_oracle_1d(op, alpha, x)));
  }
  c.expect(worst <= 1e-8, "worst deviation " + std::to_string(worst));
  c.finish();
}

// --- 2. Adjoint gradients vs central differences ---------------------------
template <typename CostFn>
double max_fd_error(const SpacePtr& space, const HilbertVec& grad,
                    const CostFn& cost, const HilbertVec& u, double eps,
                    std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  double worst = 0.0;
  for (int dir = 0; dir < 5; ++dir) {
    HilbertVec h(space);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = nd(rng);
    const double hn = norm(h);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] /= hn;
    const double fd = (cost(axpy(eps, h, u)) - cost(axpy(-eps, h, u))) /
                      (2.0 * eps);
    const double an = inner(grad, h);
    worst = std::max(worst,
                     std::abs(fd - an) / std::max(1.0, std::abs(an)));
  }
  return worst;
}

void criterion_adjoint_gradients() {
  Criterion c("2 adjoint-gradient-checks", 30.0);
  std::mt19937_64 rng(2002);
  {
    EllipticProblem p = EllipticProblem::make(16);
    EllipticSolver solver(p);
    std::uniform_real_distribution<double> d(-1.0, 0.8);
    HilbertVec u(solver.space());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = d(rng);
    const SmoothEval se = solver.reduced_gradient(u);
    const double worst = max_fd_error(
        solver.space(), se.grad,
        [&](const HilbertVec& v) { return solver.cost(v); }, u, 1e-5, rng);
    c.expect(worst <= 1e-4, "elliptic rel err " + std::to_string(worst));
  }
  {
    ParabolicProblem p = ParabolicProblem::make(8, 10);
    ParabolicSolver solver(p);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    HilbertVec u(solver.space());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = d(rng);
    const SmoothEval se = solver.reduced_gradient(u);
    const double worst = max_fd_error(
        solver.space(), se.grad,
        [&](const HilbertVec& v) { return solver.cost(v); }, u, 1e-4, rng);
    c.expect(worst <= 1e-4, "parabolic rel err " + std::to_string(worst));
  }
  c.finish();
}

// --- 3. Gradient-mapping properties ----------------------------------------
void criterion_gmap_properties() {
  Criterion c("3 gradient-mapping-props", 5.0);
  QuadraticL1Problem p = QuadraticL1Problem::random(15, 3003, 0.5, 4.0, 2.0,
                                                    0.0, 0.25, -3.0, 2.0);
  const double L = p.lipschitz();
  auto obj = make_quadratic_objective(p);
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> du(-2.0, 2.0);
  std::uniform_real_distribution<double> ld(std::log(1e-2), std::log(1e2));
  for (int rep = 0; rep < 200 && c.ok; ++rep) {
    HilbertVec u(obj.space()), v(obj.space());
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = du(rng);
      v[i] = du(rng);
    }
    double l1 = std::exp(ld(rng)), l2 = std::exp(ld(rng));
    if (l1 < l2) std::swap(l1, l2);
    const SmoothEval se = obj.smooth_value_grad(u);
    const HilbertVec g1 = prox_grad(obj, u, l1, &se.grad).g;
    const HilbertVec g2 = prox_grad(obj, u, l2, &se.grad).g;
    c.expect(norm(g1) / l1 <= (norm(g2) / l2) * (1.0 + 1e-10), "P1");
    c.expect(norm(g1) * (1.0 + 1e-10) >= norm(g2), "P2");

    const HilbertVec gv = prox_grad(obj, v, l2).g;
    c.expect(norm(sub(g2, gv)) <=
                 (2.0 * l2 + L) * norm(sub(u, v)) * (1.0 + 1e-10),
             "P3");

    const double alpha = l2;
    const ProxGradResult r = prox_grad(obj, u, alpha, &se.grad);
    const double lhs = inner(se.grad, sub(r.t, u)) +
                       inner(r.g, r.g) / (2.0 * alpha) +
                       obj.nonsmooth().value(r.t);
    const double rhs = obj.nonsmooth().value(u);
    c.expect(lhs <= rhs + 1e-12 * (1.0 + std::abs(rhs)), "model inequality");
  }
  c.finish();
}

// --- 4. Linesearch inequalities over the rule matrix -----------------------
void criterion_rule_matrix() {
  Criterion c("4 rule-matrix-inequalities", 240.0);
  const StepRule rules[] = {StepRule::Fixed, StepRule::BB1a, StepRule::BB2a,
                            StepRule::ABBa,  StepRule::BB1b, StepRule::BB2b,
                            StepRule::ABBb};

  QuadraticL1Problem qp = QuadraticL1Problem::random(40, 4004, 0.5, 4.0, 2.0,
                                                     0.0, 0.2, -3.0, 2.0);
  auto qobj = make_quadratic_objective(qp);

  EllipticProblem ep = EllipticProblem::make(32);

  for (StepRule rule : rules) {
    SolverConfig cfg = bench_solver_config();
    cfg.rule = rule;
    cfg.tol = 1e-8;
    cfg.max_iter = 3000;
    const SolverResult qres = solve(qobj, cfg, HilbertVec(qobj.space()));
    const CheckReport sd = check_sufficient_decrease(qres.trace, cfg);
    const CheckReport nu = check_nu_monotone(qres.trace, cfg);
    c.expect(sd.status == CheckStatus::Pass,
             "quadratic " + step_rule_name(rule) + " sufficient decrease");
    c.expect(nu.status != CheckStatus::Fail,
             "quadratic " + step_rule_name(rule) + " nu-monotone");

    SolverConfig ecfg = bench_solver_config();
    ecfg.rule = rule;
    ecfg.tol = 1e-6;
    ecfg.max_iter = 400;  // per-step inequalities, convergence not required
    auto esolver = std::make_shared<EllipticSolver>(ep);
    const CompositeObjective eobj = make_elliptic_objective(esolver);
    const SolverResult eres = solve(eobj, ecfg, HilbertVec(esolver->space()));
    const CheckReport esd = check_sufficient_decrease(eres.trace, ecfg);
    const CheckReport enu = check_nu_monotone(eres.trace, ecfg);
    c.expect(esd.status == CheckStatus::Pass,
             "elliptic " + step_rule_name(rule) + " sufficient decrease");
    c.expect(enu.status != CheckStatus::Fail,
             "elliptic " + step_rule_name(rule) + " nu-monotone");
  }
  c.finish();
}

// --- 5. Worst-case complexity bounds ----------------------------------------
void criterion_complexity() {
  Criterion c("5 complexity-bounds", 5.0);
  QuadraticL1Problem p;
  p.q = {1.0, 4.0};
  p.c = {1.8, -1.2};
  p.lambda = 0.3;
  p.ua = -3.0;
  p.ub = 2.0;
  auto obj = make_quadratic_objective(p);

  SolverConfig cfg = bench_solver_config();
  cfg.rule = StepRule::BB1b;
  cfg.tol = 1e-6;
  cfg.max_iter = 3000;
  cfg.record_snapshots = true;
  const SolverResult res = solve(obj, cfg, HilbertVec(obj.space()));
  c.expect(res.status == SolveStatus::Converged, "run did not converge");

  TheoryContext ctx;
  ctx.config = cfg;
  ctx.L = p.lipschitz();
  const HilbertVec ustar = quadratic_l1_minimizer(p);
  ctx.F_star = objective_value(obj, ustar);
  ctx.F_lower = ctx.F_star;
  const CheckReport rep =
      check_complexity(res.trace, ctx, &obj, &res.snapshots);
  c.expect(rep.status == CheckStatus::Pass, "complexity check: " + rep.details);
  c.finish();
}

// --- 6. Quasi-Fejer inequality ----------------------------------------------
void criterion_quasi_fejer() {
  Criterion c("6 quasi-fejer", 10.0);
  QuadraticL1Problem p = QuadraticL1Problem::random(25, 6006, 0.6, 4.0, 2.0,
                                                    0.0, 0.3, -3.0, 2.0);
  auto obj = make_quadratic_objective(p);
  SolverConfig cfg;
  cfg.delta = 0.5;
  cfg.m_max = 8;
  cfg.eta = 2.0;
  cfg.alpha_lb = 0.5;
  cfg.alpha_ub = 1e2;
  cfg.alpha0 = 1.0;
  cfg.tol = 1e-10;
  cfg.max_iter = 2000;
  cfg.rule = StepRule::BB1a;
  cfg.record_snapshots = true;
  const SolverResult res = solve(obj, cfg, HilbertVec(obj.space()));
  c.expect(res.status == SolveStatus::Converged, "run did not converge");

  TheoryContext ctx;
  ctx.config = cfg;
  ctx.L = p.lipschitz();
  ctx.u_star = quadratic_l1_minimizer(p);
  const CheckReport rep = check_quasi_fejer(res.trace, ctx, &res.snapshots);
  c.expect(rep.status == CheckStatus::Pass, "quasi-Fejer: " + rep.details);
  c.finish();
}

// --- 7. R-linear convergence under strong convexity -------------------------
void criterion_r_linear() {
  Criterion c("7 r-linear-rate", 10.0);
  QuadraticL1Problem p = QuadraticL1Problem::random(25, 7007, 1.0, 2.0, 2.0,
                                                    0.0, 0.2, -3.0, 2.0);
  auto obj = make_quadratic_objective(p);
  SolverConfig cfg;
  cfg.delta = 0.4;
  cfg.m_max = 0;
  cfg.eta = 2.0;
  cfg.alpha_lb = 1e-4;
  cfg.alpha_ub = 1e2;
  cfg.alpha0 = 2.0;
  cfg.tol = 1e-10;
  cfg.max_iter = 500;
  cfg.rule = StepRule::Fixed;
  const SolverResult res = solve(obj, cfg, HilbertVec(obj.space()));
  c.expect(res.status == SolveStatus::Converged,
           "no convergence to 1e-10 within 500 iterations");

  TheoryContext ctx;
  ctx.config = cfg;
  const HilbertVec ustar = quadratic_l1_minimizer(p);
  ctx.F_star = objective_value(obj, ustar);
  const RateEstimate est = estimate_rate(res.trace, ctx);
  c.expect(est.sigma_fit.has_value(), "rate undefined");
  if (est.sigma_fit) {
    c.expect(*est.sigma_fit < 1.0,
             "sigma_fit " + std::to_string(*est.sigma_fit));
    c.expect(est.r_squared >= 0.95,
             "r_squared " + std::to_string(est.r_squared));
  }
  c.finish();
}

// --- 8. Elliptic rule comparison (table analog) -----------------------------
void criterion_elliptic_comparison() {
  Criterion c("8 elliptic-comparison", 300.0);
  EllipticProblem p = EllipticProblem::make(32);

  struct Row {
    const char* label;
    StepRule rule;
    bool linesearch;
    int m_max;
    long max_iter;
    SolverResult result;
  };
  std::vector<Row> rows = {
      {"fixed", StepRule::Fixed, false, 8, 120000, {}},
      {"bb1a", StepRule::BB1a, false, 8, 20000, {}},
      {"bb2a", StepRule::BB2a, false, 8, 20000, {}},
      {"abba", StepRule::ABBa, false, 8, 20000, {}},
      {"bb1b", StepRule::BB1b, false, 8, 20000, {}},
      {"bb2b", StepRule::BB2b, false, 8, 20000, {}},
      {"abbb", StepRule::ABBb, false, 8, 20000, {}},
      {"nonmon-bb1b", StepRule::BB1b, true, 8, 20000, {}},
      {"mon-bb1b", StepRule::BB1b, true, 0, 20000, {}},
  };

  for (auto& row : rows) {
    SolverConfig cfg = bench_solver_config();
    cfg.rule = row.rule;
    cfg.linesearch_enabled = row.linesearch;
    cfg.m_max = row.m_max;
    cfg.tol = 1e-6;
    cfg.max_iter = row.max_iter;
    auto solver = std::make_shared<EllipticSolver>(p);
    const CompositeObjective obj = make_elliptic_objective(solver);
    row.result = solve(obj, cfg, HilbertVec(solver->space()));
    std::printf("  %-12s grad=%ld f=%ld status=%s\n", row.label,
                row.result.trace.back().cum_grad_evals,
                row.result.trace.back().cum_f_evals,
                solve_status_name(row.result.status).c_str());
    std::fflush(stdout);
  }

  long best_bb = LONG_MAX;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    c.expect(row.result.status == SolveStatus::Converged,
             std::string(row.label) + " did not converge");
    if (i <= 6) {
      best_bb = std::min(best_bb, row.result.trace.back().cum_grad_evals);
    }
    if (row.linesearch) {
      const auto& last = row.result.trace.back();
      c.expect(last.cum_f_evals >= last.cum_grad_evals - 1,
               std::string(row.label) + " f-eval contract");
    } else {
      c.expect(row.result.trace.back().cum_f_evals == 0,
               std::string(row.label) + " should report 0 f-evals");
    }
  }
  const long fixed_evals = rows[0].result.trace.back().cum_grad_evals;
  c.expect(rows[0].result.trace.back().cum_f_evals == 0,
           "fixed baseline f-evals");
  c.expect(fixed_evals >= 20 * best_bb,
           "fixed " + std::to_string(fixed_evals) + " vs best BB " +
               std::to_string(best_bb));
  c.finish();
}

// --- 9. Parabolic desk run with sparsity ------------------------------------
void criterion_parabolic_run() {
  Criterion c("9 parabolic-sparsity", 300.0);
  ParabolicProblem p = ParabolicProblem::make(16, 20);
  auto solver = std::make_shared<ParabolicSolver>(p);
  const CompositeObjective obj = make_parabolic_objective(solver);

  SolverConfig cfg;
  cfg.delta = 0.8;
  cfg.m_max = 4;
  cfg.eta = 4.0;
  cfg.alpha_lb = 1e-4;
  cfg.alpha_ub = 1e2;
  cfg.alpha0 = 10.0;
  cfg.tol = 1e-6;
  cfg.max_iter = 20000;
  cfg.rule = StepRule::ABBb;
  cfg.linesearch_enabled = true;
  const SolverResult res = solve(obj, cfg, HilbertVec(solver->space()));
  c.expect(res.status == SolveStatus::Converged, "run did not converge");

  std::size_t zeros = 0;
  for (std::size_t i = 0; i < res.u_final.size(); ++i) {
    if (res.u_final[i] == 0.0) ++zeros;
  }
  const double frac = static_cast<double>(zeros) /
                      static_cast<double>(res.u_final.size());
  std::printf("  parabolic: grad=%ld zeros=%.1f%%\n",
              res.trace.back().cum_grad_evals, 100.0 * frac);
  c.expect(frac >= 0.10,
           "only " + std::to_string(100.0 * frac) + "% exact zeros");
  c.finish();
}

// --- 10. Negative controls ---------------------------------------------------
void criterion_negative_controls() {
  Criterion c("10 negative-controls", 60.0);

  // Corrupted trace must fail the sufficient-decrease check.
  QuadraticL1Problem p = QuadraticL1Problem::random(20, 1010, 0.5, 4.0, 2.0,
                                                    0.0, 0.2, -3.0, 2.0);
  auto obj = make_quadratic_objective(p);
  SolverConfig cfg = bench_solver_config();
  cfg.rule = StepRule::BB1b;
  cfg.tol = 1e-8;
  cfg.max_iter = 2000;
  SolverResult res = solve(obj, cfg, HilbertVec(obj.space()));
  auto corrupted = res.trace;
  corrupted[corrupted.size() / 2].f_value += 1.0;
  c.expect(check_sufficient_decrease(corrupted, cfg).status ==
               CheckStatus::Fail,
           "corrupted trace not flagged");

  // Sign-flipped adjoint must fail the gradient check.
  EllipticProblem ep = EllipticProblem::make(12);
  auto esolver = std::make_shared<EllipticSolver>(ep);
  esolver->set_negate_gradient(true);
  const CompositeObjective eobj = make_elliptic_objective(esolver);
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> d(-1.0, 0.8);
  HilbertVec u(esolver->space());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = d(rng);
  const SmoothEval se = eobj.smooth_value_grad(u);
  const double worst = max_fd_error(
      esolver->space(), se.grad,
      [&](const HilbertVec& v) { return eobj.smooth_value(v); }, u, 1e-5, rng);
  c.expect(worst > 1e-4, "sign flip not detected");
  c.finish();
}

}  // namespace

int main() {
  criterion_prox_oracle();
  criterion_adjoint_gradients();
  criterion_gmap_properties();
  criterion_rule_matrix();
  criterion_complexity();
  criterion_quasi_fejer();
  criterion_r_linear();
  criterion_elliptic_comparison();
  criterion_parabolic_run();
  criterion_negative_controls();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
