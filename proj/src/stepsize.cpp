#include "nmfbs/stepsize.hpp"

#include <cmath>
#include <stdexcept>

namespace nmfbs {

std::optional<StepRule> parse_step_rule(std::string_view name) {
  if (name == "fixed") return StepRule::Fixed;
  if (name == "bb1a") return StepRule::BB1a;
  if (name == "bb2a") return StepRule::BB2a;
  if (name == "abba") return StepRule::ABBa;
  if (name == "bb1b") return StepRule::BB1b;
  if (name == "bb2b") return StepRule::BB2b;
  if (name == "abbb") return StepRule::ABBb;
  return std::nullopt;
}

std::string step_rule_name(StepRule rule) {
  switch (rule) {
    case StepRule::Fixed: return "fixed";
    case StepRule::BB1a: return "bb1a";
    case StepRule::BB2a: return "bb2a";
    case StepRule::ABBa: return "abba";
    case StepRule::BB1b: return "bb1b";
    case StepRule::BB2b: return "bb2b";
    case StepRule::ABBb: return "abbb";
  }
  return "?";
}

std::optional<double> bb_candidate(
    StepRule rule, const StepHistory& hist, const HilbertVec& u_k,
    const HilbertVec& grad_k, const std::function<HilbertVec()>& gmap_at_uk) {
  if (rule == StepRule::Fixed) return std::nullopt;

  const bool use_gmap = rule == StepRule::BB1b || rule == StepRule::BB2b ||
                        rule == StepRule::ABBb;
  int which;  // 1 or 2
  switch (rule) {
    case StepRule::BB1a:
    case StepRule::BB1b:
      which = 1;
      break;
    case StepRule::BB2a:
    case StepRule::BB2b:
      which = 2;
      break;
    default:
      // Alternating: "1" for even k, "2" for odd k.
      which = (hist.iter_index % 2 == 0) ? 1 : 2;
      break;
  }

  const HilbertVec s = sub(u_k, hist.prev_u);
  HilbertVec d = use_gmap ? sub(gmap_at_uk(), hist.prev_gmap)
                          : sub(grad_k, hist.prev_grad);

  double num, den;
  if (which == 1) {
    num = inner(s, d);
    den = inner(s, s);
  } else {
    num = inner(d, d);
    den = inner(s, d);
  }
  if (!(std::abs(den) > 1e-300)) return std::nullopt;
  const double a = num / den;
  if (!std::isfinite(a) || !(a > 0.0)) return std::nullopt;
  return a;
}

double clamp_initial(std::optional<double> candidate, double fallback,
                     double alpha_lb, double alpha_ub) {
  if (!(alpha_lb > 0.0) || !(alpha_lb < alpha_ub)) {
    throw std::invalid_argument("clamp_initial: requires 0 < alpha_lb < alpha_ub");
  }
  const double a = candidate.value_or(fallback);
  return std::max(alpha_lb, std::min(alpha_ub, a));
}

}  // namespace nmfbs
