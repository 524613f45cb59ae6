#pragma once

#include <span>
#include <string>
#include <vector>

#include "nmfbs/composite.hpp"
#include "nmfbs/stepsize.hpp"

namespace nmfbs {

/// Parameters of the nonmonotone splitting loop.
struct SolverConfig {
  double delta = 0.9;       // sufficient-decrease factor, in (0,1)
  int m_max = 8;            // nonmonotone memory upper bound
  double eta = 8.0;         // backtracking growth factor, > 1
  double alpha_lb = 1e-4;
  double alpha_ub = 1e2;
  double alpha0 = 10.0;     // initial step parameter (inverse step length)
  double tol = 1e-6;        // stopping threshold on ||G_alpha(u)||
  long max_iter = 100000;
  StepRule rule = StepRule::ABBb;
  bool linesearch_enabled = true;
  int max_backtracks = 60;  // hard cap on i_k; eta=8 spans ~54 decades
  bool record_snapshots = false;

  void validate() const;  // throws std::invalid_argument
};

struct IterationRecord {
  long k = 0;
  double f_value = 0.0;    // F(u_k)
  double gmap_norm = 0.0;  // ||G_{alpha_k}(u_k)||_H at the accepted alpha_k
  double alpha = 0.0;      // accepted alpha_k
  int backtracks = 0;      // i_k
  long cum_f_evals = 0;    // linesearch trials so far
  long cum_grad_evals = 0; // gradient-like evaluations so far (= k+1)
  double wall_ms = 0.0;
};

enum class SolveStatus { Converged, MaxIter, BacktrackExhausted, NumericError };

std::string solve_status_name(SolveStatus s);

struct SolverResult {
  HilbertVec u_final;
  SolveStatus status = SolveStatus::NumericError;
  std::vector<IterationRecord> trace;
  std::vector<double> memory_window;    // last m_max+1 accepted F values
  std::vector<HilbertVec> snapshots;    // iterates u_0..u_K (opt-in)
  bool initial_projected = false;
  std::string message;
};

/// Window length m(k) = min(k, m_max).
int memory_len(long k, int m_max);

/// Acceptance test: F_candidate <= max(window) - (delta/alpha)*gmap_norm_sq.
/// +inf candidates are always rejected. The window holds the last m(k)+1
/// accepted objective values.
bool nonmonotone_accept(std::span<const double> window, double F_candidate,
                        double delta, double alpha, double gmap_norm_sq);

struct BacktrackResult {
  double alpha = 0.0;      // accepted alpha_k = alpha_init * eta^i_k
  int backtracks = 0;      // i_k
  ProxGradResult step;     // prox-grad data at the accepted alpha
  double f_new = 0.0;      // F(T_{alpha_k}(u_k)) from the accepted trial
  long f_evals = 0;        // trials performed (i_k + 1)
};

/// Backtracking loop of Algorithm step 4: smallest i_k >= 0 such that the
/// nonmonotone inequality holds for alpha = alpha_init * eta^{i_k}. Each
/// trial reuses grad_u (no gradient evaluations) and spends one smooth-part
/// evaluation. Throws BacktrackExhaustedError past config.max_backtracks.
BacktrackResult backtrack(const CompositeObjective& obj, const HilbertVec& u,
                          const HilbertVec& grad_u, double alpha_init,
                          const SolverConfig& config,
                          std::span<const double> window);

/// Nonmonotone forward-backward splitting loop. Deterministic: identical
/// configs and inputs produce identical traces. u0 is projected once through
/// the prox (with alpha0) if it violates the box; this costs no evaluations.
SolverResult solve(const CompositeObjective& obj, const SolverConfig& config,
                   const HilbertVec& u0);

/// Memory bookkeeping replayed from a trace of F values:
/// ell[k] = k - argmax_{0<=j<=m(k)} F(u_{k-j})   (ties: smallest j), and
/// nu[k] = ell(k*(m_max+1)) wherever that index lies inside the trace.
struct EllNuIndices {
  std::vector<long> ell;
  std::vector<long> nu;
};

EllNuIndices ell_nu_indices(std::span<const double> f_values, int m_max);

}  // namespace nmfbs
