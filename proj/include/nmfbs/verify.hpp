#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nmfbs/composite.hpp"
#include "nmfbs/solver.hpp"

namespace nmfbs {

/// Problem-side knowledge a trace check may need. Every check declares what
/// it requires and reports "skipped" when that is absent.
struct TheoryContext {
  std::optional<double> L;        // Lipschitz constant of grad f
  std::optional<double> F_lower;  // lower bound on F
  std::optional<double> F_star;   // optimal value
  std::optional<HilbertVec> u_star;
  SolverConfig config;
};

/// Worst-case constants derived from config and L.
struct ComplexityConstants {
  double alpha_bar = 0.0;   // max{eta*L/(2(1-delta)), alpha_ub}
  double c_g = 0.0;         // (3*alpha_bar + L)/alpha_lb
  double n1 = 0.0;          // floor(|log_eta(eta*L/(2*alpha_lb*(1-delta)))|)
  double gamma_decr = 0.0;  // min{delta/alpha_ub, 2(1-delta)delta/(n1*eta*L)}
  double gamma_comp_f = 0.0;
  double gamma_comp_g = 0.0;

  double k_max_f(double f0_minus_lower, double eps) const;
  double k_max_g(double f0_minus_lower, double eps) const;
};

ComplexityConstants compute_complexity_constants(const SolverConfig& config,
                                                 double L);

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckReport {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double worst_slack = 0.0;  // most negative slack seen (>= 0 means pass)
  std::string details;
};

std::string check_status_name(CheckStatus s);
std::string reports_to_json(const std::vector<CheckReport>& reports);

/// Per-step acceptance inequality replayed from the trace:
/// F(u_{k+1}) <= F(u_{ell(k)}) - (delta/alpha_k)||G_{alpha_k}(u_k)||^2,
/// with slack tolerance 1e-12*(1+|F(u_{k+1})|). Skipped when the trace was
/// produced without the linesearch.
CheckReport check_sufficient_decrease(const std::vector<IterationRecord>& trace,
                                      const SolverConfig& config);

/// Monotone decrease along the nu subsequence:
/// F(u_{nu(k)}) <= F(u_{nu(k-1)}) - (delta/alpha_{nu(k)-1}) * gmap^2.
CheckReport check_nu_monotone(const std::vector<IterationRecord>& trace,
                              const SolverConfig& config);

/// Worst-case bound on min_i ||G_{alpha_lb}(u_i)|| for every k >= 1, plus the
/// evaluation-count bounds at the first eps-stationary iterate. Needs ctx.L,
/// ctx.F_lower, iterate snapshots, and the objective (extra prox
/// applications only; nothing is counted).
CheckReport check_complexity(const std::vector<IterationRecord>& trace,
                             const TheoryContext& ctx,
                             const CompositeObjective* obj,
                             const std::vector<HilbertVec>* snapshots);

/// Quasi-Fejer inequality against the known minimizer:
/// 1/2||u_{k+1}-u*||^2 - 1/2||u_k-u*||^2 <= (L/(4 alpha_lb^3)) * gmap_k^2,
/// tolerance 1e-10*(1+||u_k-u*||^2). Needs ctx.u_star, ctx.L, snapshots.
CheckReport check_quasi_fejer(const std::vector<IterationRecord>& trace,
                              const TheoryContext& ctx,
                              const std::vector<HilbertVec>* snapshots);

struct RateEstimate {
  std::optional<double> sigma_fit;  // exp(slope) of the log-linear fit
  double r_squared = 0.0;
  long window_begin = 0;  // first and last trace index used
  long window_end = -1;
  long points = 0;
};

/// Least-squares fit of log(F(u_k) - F*) against k over the points with
/// F - F* > 1e-13. Undefined below 10 qualifying points.
RateEstimate estimate_rate(const std::vector<IterationRecord>& trace,
                           const TheoryContext& ctx);

/// Bounded-sequence proxy for the sublinear O(1/k) bound: with
/// q_k = k*(F(u_k)-F*) over qualifying points, every q in the tail (second
/// half) must stay below 10x the median of all qualifying q.
CheckReport check_sublinear(const std::vector<IterationRecord>& trace,
                            const TheoryContext& ctx);

}  // namespace nmfbs
