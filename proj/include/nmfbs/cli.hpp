#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nmfbs/composite.hpp"
#include "nmfbs/solver.hpp"

namespace nmfbs::cli {

// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitMaxIter = 2;
inline constexpr int kExitNumericError = 3;
inline constexpr int kExitCheckFailed = 4;

/// A problem assembled from a run config. make_objective builds a fresh
/// objective (own warm-start caches) per call; negate_gradient is the
/// gradcheck negative-control hook.
struct BuiltProblem {
  std::string kind;
  SpacePtr space;
  HilbertVec u0;
  std::function<CompositeObjective(bool negate_gradient)> make_objective;
  std::optional<double> lipschitz;
  std::optional<double> f_star;
  std::optional<HilbertVec> u_star;
};

struct RunConfig {
  BuiltProblem problem;
  SolverConfig solver;
  std::string trace_path = "trace.csv";
  std::optional<std::string> summary_path;
  std::optional<std::string> snapshots_path;
  bool snapshots = false;
  std::uint64_t seed = 0;
};

/// Parses and validates a config file. Unknown keys are rejected; JSON syntax
/// errors are reported with line/column. Throws std::runtime_error with a
/// diagnostic message.
RunConfig load_run_config(const std::string& path);

int cmd_run(const std::string& config_path, bool demo_nonconvergence,
            const std::optional<std::string>& out_override,
            std::optional<bool> snapshots_override);
int cmd_compare(const std::string& config_path,
                const std::vector<std::string>& rules, int threads,
                const std::string& out_path);
int cmd_gradcheck(const std::string& config_path, bool break_adjoint);
int cmd_verify(const std::string& trace_path, const std::string& ctx_path,
               const std::optional<std::string>& out_path);

int run_cli(int argc, const char* const* argv);

}  // namespace nmfbs::cli
