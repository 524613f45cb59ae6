#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "nmfbs/hilbert.hpp"

namespace nmfbs {

/// Initial step-size rules. "a" rules build the Rayleigh quotients from
/// gradient differences, "b" rules from gradient-mapping differences, and the
/// alternating rules pick "1" for even iterations and "2" for odd ones.
enum class StepRule { Fixed, BB1a, BB2a, ABBa, BB1b, BB2b, ABBb };

std::optional<StepRule> parse_step_rule(std::string_view name);
std::string step_rule_name(StepRule rule);

/// Data carried from iteration k-1 into the BB quotients at iteration k.
/// prev_gmap is G_{alpha_{k-1}}(u_{k-1}) at the accepted step parameter.
struct StepHistory {
  HilbertVec prev_u;
  HilbertVec prev_grad;
  HilbertVec prev_gmap;
  double prev_alpha = 0.0;
  long iter_index = 0;  // current iteration k (>= 1)
};

/// BB quotient for the chosen rule, or nullopt when the quotient is
/// degenerate (|denominator| <= 1e-300), nonpositive, or non-finite.
/// gmap_at_uk lazily provides G_{alpha_{k-1}}(u_k); it is invoked only for
/// the "b" rules and must not trigger a new gradient evaluation.
std::optional<double> bb_candidate(
    StepRule rule, const StepHistory& hist, const HilbertVec& u_k,
    const HilbertVec& grad_k, const std::function<HilbertVec()>& gmap_at_uk);

/// alpha_init = max(alpha_lb, min(alpha_ub, candidate-or-fallback)).
double clamp_initial(std::optional<double> candidate, double fallback,
                     double alpha_lb, double alpha_ub);

}  // namespace nmfbs
