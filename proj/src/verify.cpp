#include "nmfbs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace nmfbs {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> trace_f_values(const std::vector<IterationRecord>& trace) {
  std::vector<double> f;
  f.reserve(trace.size());
  for (const auto& r : trace) f.push_back(r.f_value);
  return f;
}
}  // namespace

double ComplexityConstants::k_max_f(double f0_minus_lower, double eps) const {
  const double v = gamma_comp_f * f0_minus_lower / (eps * eps);
  return std::isfinite(v) ? std::floor(v) : kInf;
}

double ComplexityConstants::k_max_g(double f0_minus_lower, double eps) const {
  const double v = gamma_comp_g * f0_minus_lower / (eps * eps);
  return std::isfinite(v) ? std::floor(v) : kInf;
}

ComplexityConstants compute_complexity_constants(const SolverConfig& config,
                                                 double L) {
  ComplexityConstants c;
  const double delta = config.delta;
  const double eta = config.eta;
  c.alpha_bar = std::max(eta * L / (2.0 * (1.0 - delta)), config.alpha_ub);
  c.c_g = (3.0 * c.alpha_bar + L) / config.alpha_lb;
  c.n1 = std::floor(std::abs(
      std::log(eta * L / (2.0 * config.alpha_lb * (1.0 - delta))) /
      std::log(eta)));
  c.gamma_decr = std::min(delta / config.alpha_ub,
                          2.0 * (1.0 - delta) * delta / (c.n1 * eta * L));
  const double cg_pow = std::pow(c.c_g, 2.0 * config.m_max);
  c.gamma_comp_f = (config.m_max + 1) * cg_pow / c.gamma_decr;
  c.gamma_comp_g = (config.m_max + 1) * c.alpha_bar * cg_pow / delta;
  return c;
}

std::string check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

std::string reports_to_json(const std::vector<CheckReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back({{"name", r.name},
                   {"status", check_status_name(r.status)},
                   {"worst_slack", r.worst_slack},
                   {"details", r.details}});
  }
  return arr.dump(2);
}

CheckReport check_sufficient_decrease(const std::vector<IterationRecord>& trace,
                                      const SolverConfig& config) {
  CheckReport rep{"sufficient_decrease", CheckStatus::Skipped, 0.0, ""};
  if (!config.linesearch_enabled) {
    rep.details = "linesearch disabled; inequality not enforced";
    return rep;
  }
  if (trace.size() < 2) {
    rep.details = "trace too short";
    return rep;
  }
  const std::vector<double> f = trace_f_values(trace);
  const EllNuIndices idx = ell_nu_indices(f, config.m_max);
  rep.status = CheckStatus::Pass;
  rep.worst_slack = kInf;
  long violations = 0;
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const double bound = f[idx.ell[k]] -
                         (config.delta / trace[k].alpha) *
                             trace[k].gmap_norm * trace[k].gmap_norm;
    const double slack = bound - f[k + 1];
    rep.worst_slack = std::min(rep.worst_slack, slack);
    if (slack < -1e-12 * (1.0 + std::abs(f[k + 1]))) {
      rep.status = CheckStatus::Fail;
      ++violations;
      if (violations == 1) {
        rep.details = "first violation at k=" + std::to_string(k);
      }
    }
  }
  if (rep.status == CheckStatus::Pass) {
    rep.details = std::to_string(trace.size() - 1) + " steps checked";
  } else {
    rep.details += ", " + std::to_string(violations) + " violations";
  }
  return rep;
}

CheckReport check_nu_monotone(const std::vector<IterationRecord>& trace,
                              const SolverConfig& config) {
  CheckReport rep{"nu_monotone", CheckStatus::Skipped, 0.0, ""};
  if (!config.linesearch_enabled) {
    rep.details = "linesearch disabled; inequality not enforced";
    return rep;
  }
  if (trace.size() < static_cast<std::size_t>(config.m_max) + 2) {
    rep.details = "trace shorter than m_max + 2";
    return rep;
  }
  const std::vector<double> f = trace_f_values(trace);
  const EllNuIndices idx = ell_nu_indices(f, config.m_max);
  rep.status = CheckStatus::Pass;
  rep.worst_slack = kInf;
  long violations = 0;
  for (std::size_t k = 1; k < idx.nu.size(); ++k) {
    const long j = idx.nu[k] - 1;  // nu(k) >= 1 for k >= 1
    if (j < 0) continue;
    const double bound = f[idx.nu[k - 1]] -
                         (config.delta / trace[j].alpha) *
                             trace[j].gmap_norm * trace[j].gmap_norm;
    const double slack = bound - f[idx.nu[k]];
    rep.worst_slack = std::min(rep.worst_slack, slack);
    if (slack < -1e-12 * (1.0 + std::abs(f[idx.nu[k]]))) {
      rep.status = CheckStatus::Fail;
      ++violations;
      if (violations == 1) {
        rep.details = "first violation at nu-index k=" + std::to_string(k);
      }
    }
  }
  if (rep.status == CheckStatus::Pass) {
    rep.details = std::to_string(idx.nu.size()) + " subsequence points checked";
  } else {
    rep.details += ", " + std::to_string(violations) + " violations";
  }
  return rep;
}

CheckReport check_complexity(const std::vector<IterationRecord>& trace,
                             const TheoryContext& ctx,
                             const CompositeObjective* obj,
                             const std::vector<HilbertVec>* snapshots) {
  CheckReport rep{"complexity", CheckStatus::Skipped, 0.0, ""};
  if (!ctx.L) {
    rep.details = "L unknown";
    return rep;
  }
  if (!obj || !snapshots || snapshots->size() != trace.size()) {
    rep.details = "needs the objective and iterate snapshots";
    return rep;
  }
  if (trace.size() < 2) {
    rep.details = "trace too short";
    return rep;
  }
  const ComplexityConstants c =
      compute_complexity_constants(ctx.config, *ctx.L);
  const SolverConfig& cfg = ctx.config;

  // Recomputed ||G_{alpha_lb}(u_i)||: verification only, not counted.
  std::vector<double> g_lb(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const ProxGradResult pg = prox_grad(*obj, (*snapshots)[i], cfg.alpha_lb);
    g_lb[i] = norm(pg.g);
    // Cross-consistency with the gradient-mapping monotonicity (P2).
    if (trace[i].alpha >= cfg.alpha_lb &&
        g_lb[i] > trace[i].gmap_norm * (1.0 + 1e-10) + 1e-300) {
      rep.status = CheckStatus::Fail;
      rep.details = "P2 cross-consistency failed at i=" + std::to_string(i);
      return rep;
    }
  }

  rep.status = CheckStatus::Pass;
  rep.worst_slack = kInf;
  const double f0 = trace.front().f_value;
  const double cg_mmax = std::pow(c.c_g, cfg.m_max);
  double running_min = kInf;
  for (std::size_t k = 1; k < trace.size(); ++k) {
    running_min = std::min(running_min, g_lb[k - 1]);
    const double lhs = std::min(running_min, g_lb[k]);
    const double decrease = f0 - trace[k].f_value;
    const double bound =
        cg_mmax * std::sqrt(c.alpha_bar * (cfg.m_max + 1) *
                            std::max(decrease, 0.0) / (k * cfg.delta));
    const double slack = bound - lhs;
    rep.worst_slack = std::min(rep.worst_slack, slack);
    if (slack < -1e-12 * (1.0 + bound)) {
      rep.status = CheckStatus::Fail;
      rep.details = "bound violated at k=" + std::to_string(k);
      return rep;
    }
  }

  // Evaluation-count bounds at the first eps-stationary iterate.
  if (ctx.F_lower) {
    const double eps = cfg.tol;
    for (const auto& r : trace) {
      if (r.gmap_norm <= eps) {
        const double gap = f0 - *ctx.F_lower;
        const double kf = c.k_max_f(gap, eps);
        const double kg = c.k_max_g(gap, eps);
        if (static_cast<double>(r.cum_f_evals) > kf ||
            static_cast<double>(r.cum_grad_evals) > kg) {
          rep.status = CheckStatus::Fail;
          rep.details = "evaluation counts exceed the worst-case bounds";
          return rep;
        }
        std::ostringstream os;
        os << "k=" << r.k << ": f_evals=" << r.cum_f_evals << " <= " << kf
           << ", grad_evals=" << r.cum_grad_evals << " <= " << kg;
        rep.details = os.str();
        break;
      }
    }
  }
  if (rep.details.empty()) {
    rep.details = std::to_string(trace.size() - 1) + " bounds checked";
  }
  return rep;
}

CheckReport check_quasi_fejer(const std::vector<IterationRecord>& trace,
                              const TheoryContext& ctx,
                              const std::vector<HilbertVec>* snapshots) {
  CheckReport rep{"quasi_fejer", CheckStatus::Skipped, 0.0, ""};
  if (!ctx.u_star) {
    rep.details = "u_star unknown";
    return rep;
  }
  if (!ctx.L) {
    rep.details = "L unknown";
    return rep;
  }
  if (!snapshots || snapshots->size() != trace.size() || trace.size() < 2) {
    rep.details = "needs iterate snapshots";
    return rep;
  }
  const double coef =
      *ctx.L / (4.0 * std::pow(ctx.config.alpha_lb, 3.0));
  rep.status = CheckStatus::Pass;
  rep.worst_slack = kInf;
  long violations = 0;
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const HilbertVec dk = sub((*snapshots)[k], *ctx.u_star);
    const HilbertVec dk1 = sub((*snapshots)[k + 1], *ctx.u_star);
    const double lhs = 0.5 * inner(dk1, dk1) - 0.5 * inner(dk, dk);
    const double rhs =
        coef * trace[k].gmap_norm * trace[k].gmap_norm;
    const double slack = rhs - lhs + 1e-10 * (1.0 + inner(dk, dk));
    rep.worst_slack = std::min(rep.worst_slack, slack);
    if (slack < 0.0) {
      rep.status = CheckStatus::Fail;
      ++violations;
      if (violations == 1) {
        rep.details = "first violation at k=" + std::to_string(k);
      }
    }
  }
  if (rep.status == CheckStatus::Pass) {
    rep.details = std::to_string(trace.size() - 1) + " steps checked";
  } else {
    rep.details += ", " + std::to_string(violations) + " violations";
  }
  return rep;
}

RateEstimate estimate_rate(const std::vector<IterationRecord>& trace,
                           const TheoryContext& ctx) {
  RateEstimate est;
  if (!ctx.F_star) return est;
  std::vector<double> xs, ys;
  for (const auto& r : trace) {
    const double gap = r.f_value - *ctx.F_star;
    if (gap > 1e-13 && std::isfinite(gap)) {
      if (xs.empty()) est.window_begin = r.k;
      est.window_end = r.k;
      xs.push_back(static_cast<double>(r.k));
      ys.push_back(std::log(gap));
    }
  }
  est.points = static_cast<long>(xs.size());
  if (est.points < 10) return est;

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return est;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = intercept + slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  est.sigma_fit = std::exp(slope);
  est.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return est;
}

CheckReport check_sublinear(const std::vector<IterationRecord>& trace,
                            const TheoryContext& ctx) {
  CheckReport rep{"sublinear", CheckStatus::Skipped, 0.0, ""};
  if (!ctx.F_star) {
    rep.details = "F_star unknown";
    return rep;
  }
  std::vector<double> q;
  for (const auto& r : trace) {
    if (r.k < 1) continue;
    const double gap = r.f_value - *ctx.F_star;
    if (gap > 1e-13 && std::isfinite(gap)) {
      q.push_back(static_cast<double>(r.k) * gap);
    }
  }
  if (q.size() < 10) {
    rep.details = "fewer than 10 qualifying points";
    return rep;
  }
  std::vector<double> sorted = q;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double threshold = 10.0 * median;
  rep.status = CheckStatus::Pass;
  rep.worst_slack = kInf;
  for (std::size_t i = q.size() / 2; i < q.size(); ++i) {
    const double slack = threshold - q[i];
    rep.worst_slack = std::min(rep.worst_slack, slack);
    if (slack < 0.0) {
      rep.status = CheckStatus::Fail;
      rep.details = "tail value " + std::to_string(q[i]) +
                    " exceeds 10x median " + std::to_string(median);
      return rep;
    }
  }
  rep.details = std::to_string(q.size()) + " qualifying points, median " +
                std::to_string(median);
  return rep;
}

}  // namespace nmfbs
