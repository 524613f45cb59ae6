#include "nmfbs/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "nmfbs/errors.hpp"
#include "nmfbs/log.hpp"

namespace nmfbs {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}
}  // namespace

void SolverConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("solver config: delta must be in (0,1)");
  if (m_max < 0)
    throw std::invalid_argument("solver config: m_max must be >= 0");
  if (!(eta > 1.0))
    throw std::invalid_argument("solver config: eta must be > 1");
  if (!(alpha_lb > 0.0) || !(alpha_lb < alpha_ub))
    throw std::invalid_argument(
        "solver config: requires 0 < alpha_lb < alpha_ub");
  if (!(alpha0 > 0.0))
    throw std::invalid_argument("solver config: alpha0 must be > 0");
  if (!(tol > 0.0))
    throw std::invalid_argument("solver config: tol must be > 0");
  if (max_iter < 1)
    throw std::invalid_argument("solver config: max_iter must be >= 1");
  if (max_backtracks < 1)
    throw std::invalid_argument("solver config: max_backtracks must be >= 1");
}

std::string solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::BacktrackExhausted: return "BacktrackExhausted";
    case SolveStatus::NumericError: return "NumericError";
  }
  return "?";
}

int memory_len(long k, int m_max) {
  return static_cast<int>(std::min<long>(k, m_max));
}

bool nonmonotone_accept(std::span<const double> window, double F_candidate,
                        double delta, double alpha, double gmap_norm_sq) {
  if (window.empty())
    throw std::invalid_argument("nonmonotone_accept: empty window");
  if (!(F_candidate < std::numeric_limits<double>::infinity())) return false;
  const double wmax = *std::max_element(window.begin(), window.end());
  return F_candidate <= wmax - (delta / alpha) * gmap_norm_sq;
}

BacktrackResult backtrack(const CompositeObjective& obj, const HilbertVec& u,
                          const HilbertVec& grad_u, double alpha_init,
                          const SolverConfig& config,
                          std::span<const double> window) {
  BacktrackResult r;
  double alpha = alpha_init;
  for (int i = 0; i <= config.max_backtracks; ++i) {
    ProxGradResult pg = prox_grad(obj, u, alpha, &grad_u);
    const double F_trial =
        obj.smooth_value(pg.t) + obj.nonsmooth().value(pg.t);
    ++r.f_evals;
    const double gsq = inner(pg.g, pg.g);
    if (nonmonotone_accept(window, F_trial, config.delta, alpha, gsq)) {
      r.alpha = alpha;
      r.backtracks = i;
      r.step = std::move(pg);
      r.f_new = F_trial;
      return r;
    }
    alpha *= config.eta;
  }
  throw BacktrackExhaustedError("linesearch exhausted after " +
                                std::to_string(config.max_backtracks + 1) +
                                " trials");
}

SolverResult solve(const CompositeObjective& obj, const SolverConfig& config,
                   const HilbertVec& u0) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  SolverResult res;
  HilbertVec u = copy(u0);

  // Algorithm iterates live in dom(phi); a violating start is projected once
  // through the prox (zero evaluations, logged).
  if (std::isinf(obj.nonsmooth().value(u))) {
    u = obj.nonsmooth().apply(config.alpha0, u);
    res.initial_projected = true;
    NMFBS_LOG_INFO("solve: u0 outside dom(phi), projected through prox");
  }

  long f_evals = 0;
  long grad_evals = 0;
  std::deque<double> window;
  StepHistory hist;
  bool have_hist = false;
  double fallback_alpha = config.alpha0;
  double f_from_linesearch = kNaN;

  for (long k = 0;; ++k) {
    SmoothEval se;
    try {
      se = obj.smooth_value_grad(u);
      ++grad_evals;
      if (!std::isfinite(se.value) || !se.grad.all_finite()) {
        throw NumericError("non-finite smooth value or gradient");
      }
    } catch (const NumericError& e) {
      res.status = SolveStatus::NumericError;
      res.message = "iteration " + std::to_string(k) + ": " + e.what();
      res.u_final = std::move(u);
      res.memory_window.assign(window.begin(), window.end());
      return res;
    }

    const double F_k = std::isnan(f_from_linesearch)
                           ? se.value + obj.nonsmooth().value(u)
                           : f_from_linesearch;
    window.push_back(F_k);
    if (window.size() > static_cast<std::size_t>(config.m_max) + 1) {
      window.pop_front();
    }

    // Initial step parameter: clamp(alpha0) at k=0 and for the fixed rule,
    // else the BB quotient with the previous accepted alpha as fallback.
    double alpha_init;
    if (k == 0 || config.rule == StepRule::Fixed || !have_hist) {
      alpha_init = clamp_initial(std::nullopt, config.alpha0, config.alpha_lb,
                                 config.alpha_ub);
    } else {
      auto gmap_at_uk = [&]() {
        return prox_grad(obj, u, hist.prev_alpha, &se.grad).g;
      };
      const auto cand = bb_candidate(config.rule, hist, u, se.grad, gmap_at_uk);
      alpha_init = clamp_initial(cand, fallback_alpha, config.alpha_lb,
                                 config.alpha_ub);
    }

    double alpha_k;
    int i_k = 0;
    ProxGradResult pg;
    double f_next = kNaN;
    if (config.linesearch_enabled) {
      const std::vector<double> win(window.begin(), window.end());
      try {
        BacktrackResult bt = backtrack(obj, u, se.grad, alpha_init, config, win);
        alpha_k = bt.alpha;
        i_k = bt.backtracks;
        pg = std::move(bt.step);
        f_next = bt.f_new;
        f_evals += bt.f_evals;
      } catch (const BacktrackExhaustedError& e) {
        res.status = SolveStatus::BacktrackExhausted;
        res.message = "iteration " + std::to_string(k) + ": " + e.what();
        res.u_final = std::move(u);
        res.memory_window.assign(window.begin(), window.end());
        return res;
      } catch (const NumericError& e) {
        res.status = SolveStatus::NumericError;
        res.message = "iteration " + std::to_string(k) + ": " + e.what();
        res.u_final = std::move(u);
        res.memory_window.assign(window.begin(), window.end());
        return res;
      }
    } else {
      alpha_k = alpha_init;
      pg = prox_grad(obj, u, alpha_k, &se.grad);
    }

    const double gnorm = norm(pg.g);
    res.trace.push_back(IterationRecord{k, F_k, gnorm, alpha_k, i_k, f_evals,
                                        grad_evals, elapsed_ms(t0)});
    if (config.record_snapshots) res.snapshots.push_back(copy(u));

    if (!std::isfinite(gnorm) || !pg.t.all_finite()) {
      res.status = SolveStatus::NumericError;
      res.message = "iteration " + std::to_string(k) + ": non-finite iterate";
      res.u_final = std::move(u);
      res.memory_window.assign(window.begin(), window.end());
      return res;
    }

    if (gnorm <= config.tol) {
      res.status = SolveStatus::Converged;
      res.u_final = std::move(u);
      res.memory_window.assign(window.begin(), window.end());
      return res;
    }
    if (k == config.max_iter) {
      res.status = SolveStatus::MaxIter;
      res.u_final = std::move(u);
      res.memory_window.assign(window.begin(), window.end());
      return res;
    }

    hist = StepHistory{std::move(u), std::move(se.grad), copy(pg.g), alpha_k, k + 1};
    have_hist = true;
    fallback_alpha = alpha_k;
    u = std::move(pg.t);
    f_from_linesearch = f_next;
  }
}

EllNuIndices ell_nu_indices(std::span<const double> f_values, int m_max) {
  EllNuIndices out;
  const long K = static_cast<long>(f_values.size());
  out.ell.reserve(f_values.size());
  for (long k = 0; k < K; ++k) {
    const int mk = memory_len(k, m_max);
    // argmax over j in [0, m(k)]; ties resolved to the smallest j.
    int jbest = 0;
    double fbest = f_values[k];
    for (int j = 1; j <= mk; ++j) {
      if (f_values[k - j] > fbest) {
        fbest = f_values[k - j];
        jbest = j;
      }
    }
    out.ell.push_back(k - jbest);
  }
  for (long k = 0; k * (static_cast<long>(m_max) + 1) < K; ++k) {
    out.nu.push_back(out.ell[k * (static_cast<long>(m_max) + 1)]);
  }
  return out;
}

}  // namespace nmfbs
