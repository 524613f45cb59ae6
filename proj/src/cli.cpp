#include "nmfbs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "nmfbs/errors.hpp"
#include "nmfbs/log.hpp"
#include "nmfbs/pde/elliptic.hpp"
#include "nmfbs/pde/parabolic.hpp"
#include "nmfbs/quadratic.hpp"
#include "nmfbs/trace_io.hpp"
#include "nmfbs/verify.hpp"

namespace nmfbs::cli {

namespace {
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Parse JSON, translating byte offsets of syntax errors into line/column.
json parse_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min(e.byte, text.size());
    for (std::size_t i = 0; i + 1 <= upto && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::runtime_error(path + ":" + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + e.what());
  }
}

void reject_unknown_keys(const json& obj,
                         const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw std::runtime_error("unknown key '" + it.key() + "' in " + where);
    }
  }
}

double get_num(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw std::runtime_error("key '" + key + "' must be a number");
  }
  return obj[key].get<double>();
}

long get_int(const json& obj, const std::string& key, long fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw std::runtime_error("key '" + key + "' must be an integer");
  }
  return obj[key].get<long>();
}

std::vector<double> load_grid_values(const std::string& path,
                                     std::string format, std::size_t expect) {
  if (format.empty()) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".bin") {
      format = "bin";
    } else {
      format = "csv";
    }
  }
  std::vector<double> vals;
  if (format == "bin") {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    vals.resize(expect);
    f.read(reinterpret_cast<char*>(vals.data()),
           static_cast<std::streamsize>(expect * sizeof(double)));
    if (!f) throw std::runtime_error(path + ": expected " +
                                     std::to_string(expect) + " doubles");
  } else if (format == "csv") {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::string tok;
    while (f >> tok) {
      while (!tok.empty() && tok.back() == ',') tok.pop_back();
      std::size_t pos = 0;
      while (pos < tok.size()) {
        const std::size_t comma = tok.find(',', pos);
        const std::string piece = tok.substr(pos, comma - pos);
        if (!piece.empty()) vals.push_back(std::stod(piece));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    }
    if (vals.size() != expect) {
      throw std::runtime_error(path + ": expected " + std::to_string(expect) +
                               " values, got " + std::to_string(vals.size()));
    }
  } else {
    throw std::runtime_error("unknown grid file format '" + format + "'");
  }
  return vals;
}

HilbertVec make_u0(const json& prob, const SpacePtr& space,
                   const std::string& where) {
  HilbertVec u0(space);
  if (prob.contains("u0")) {
    const auto& j = prob["u0"];
    if (j.is_number()) {
      u0.fill(j.get<double>());
    } else if (j.is_array()) {
      if (j.size() != space->dim()) {
        throw std::runtime_error(where + ": u0 array has wrong length");
      }
      for (std::size_t i = 0; i < u0.size(); ++i) u0[i] = j[i].get<double>();
    } else {
      throw std::runtime_error(where + ": u0 must be a number or array");
    }
  }
  return u0;
}

BuiltProblem build_problem(const json& prob, std::uint64_t seed) {
  if (!prob.contains("kind") || !prob["kind"].is_string()) {
    throw std::runtime_error("problem.kind must be a string");
  }
  const std::string kind = prob["kind"].get<std::string>();
  BuiltProblem bp;
  bp.kind = kind;

  if (kind == "elliptic") {
    reject_unknown_keys(prob,
                        {"kind", "n", "kappa", "sigma", "lambda", "ua", "ub",
                         "y_d", "newton_tol", "newton_max_iter", "u0"},
                        "problem");
    EllipticProblem p;
    p.grid = Grid2D::unit_square(static_cast<int>(get_int(prob, "n", 32)));
    p.kappa = get_num(prob, "kappa", 1e-2);
    p.sigma = get_num(prob, "sigma", 1e-4);
    p.lambda = get_num(prob, "lambda", 1e-3);
    p.ua = get_num(prob, "ua", -3.0);
    p.ub = get_num(prob, "ub", 2.0);
    p.newton.tol = get_num(prob, "newton_tol", 1e-10);
    p.newton.max_iter = static_cast<int>(get_int(prob, "newton_max_iter", 50));
    SpacePtr space = p.grid.make_space();
    if (prob.contains("y_d")) {
      const auto& yd = prob["y_d"];
      reject_unknown_keys(yd, {"path", "format"}, "problem.y_d");
      auto vals = load_grid_values(yd.at("path").get<std::string>(),
                                   yd.value("format", ""), p.grid.num_nodes());
      p.y_d = HilbertVec(space, std::move(vals));
    } else {
      p.y_d = default_elliptic_desired_state(p.grid, space);
    }
    p.validate();
    bp.space = space;
    bp.u0 = make_u0(prob, space, "elliptic");
    bp.make_objective = [p](bool negate) {
      auto solver = std::make_shared<EllipticSolver>(p);
      solver->set_negate_gradient(negate);
      return make_elliptic_objective(solver);
    };
  } else if (kind == "parabolic") {
    reject_unknown_keys(
        prob, {"kind", "n", "nt", "T", "kappa", "lambda", "ua", "ub", "y_d",
               "y0", "u0"},
        "problem");
    ParabolicProblem p;
    p.grid = Grid2D::unit_square(static_cast<int>(get_int(prob, "n", 16)));
    p.nt = static_cast<int>(get_int(prob, "nt", 20));
    p.T = get_num(prob, "T", 1.0);
    p.kappa = get_num(prob, "kappa", 1e-2);
    p.lambda = get_num(prob, "lambda", 1e-2);
    p.ua = get_num(prob, "ua", -100.0);
    p.ub = get_num(prob, "ub", 100.0);
    SpacePtr spatial = p.grid.make_space();
    p.y0 = HilbertVec(spatial);
    if (prob.contains("y0")) {
      if (!prob["y0"].is_number()) {
        throw std::runtime_error("parabolic: y0 must be a constant number");
      }
      p.y0.fill(prob["y0"].get<double>());
    }
    if (prob.contains("y_d")) {
      const auto& yd = prob["y_d"];
      reject_unknown_keys(yd, {"path", "format"}, "problem.y_d");
      auto vals =
          load_grid_values(yd.at("path").get<std::string>(),
                           yd.value("format", ""),
                           p.grid.num_nodes() * static_cast<std::size_t>(p.nt));
      p.y_d.clear();
      for (int m = 0; m < p.nt; ++m) {
        std::vector<double> snap(vals.begin() + m * p.grid.num_nodes(),
                                 vals.begin() + (m + 1) * p.grid.num_nodes());
        p.y_d.emplace_back(spatial, std::move(snap));
      }
    } else {
      p.y_d = default_parabolic_desired_state(p.grid, spatial, p.T, p.nt);
    }
    p.validate();
    auto probe = std::make_shared<ParabolicSolver>(p);
    bp.space = probe->space();
    bp.u0 = make_u0(prob, bp.space, "parabolic");
    bp.make_objective = [p](bool negate) {
      auto solver = std::make_shared<ParabolicSolver>(p);
      solver->set_negate_gradient(negate);
      return make_parabolic_objective(solver);
    };
  } else if (kind == "quadratic_l1") {
    reject_unknown_keys(prob,
                        {"kind", "dim", "q_min", "q_max", "c_range", "sigma",
                         "lambda", "ua", "ub", "q", "c", "u0"},
                        "problem");
    QuadraticL1Problem p;
    if (prob.contains("q") || prob.contains("c")) {
      p.q = prob.at("q").get<std::vector<double>>();
      p.c = prob.at("c").get<std::vector<double>>();
      p.sigma = get_num(prob, "sigma", 0.0);
      p.lambda = get_num(prob, "lambda", 0.0);
      p.ua = get_num(prob, "ua", -ProxOperator::kInf);
      p.ub = get_num(prob, "ub", ProxOperator::kInf);
    } else {
      p = QuadraticL1Problem::random(
          static_cast<std::size_t>(get_int(prob, "dim", 50)), seed,
          get_num(prob, "q_min", 0.5), get_num(prob, "q_max", 4.0),
          get_num(prob, "c_range", 2.0), get_num(prob, "sigma", 0.0),
          get_num(prob, "lambda", 0.1), get_num(prob, "ua", -3.0),
          get_num(prob, "ub", 2.0));
    }
    bp.space = make_euclidean_space(p.dim());
    bp.u0 = make_u0(prob, bp.space, "quadratic_l1");
    bp.lipschitz = p.lipschitz();
    bp.u_star = quadratic_l1_minimizer(p, bp.space);
    CompositeObjective tmp = make_quadratic_objective(p, bp.space);
    bp.f_star = objective_value(tmp, *bp.u_star);
    bp.make_objective = [p](bool negate) {
      CompositeObjective obj = make_quadratic_objective(p);
      if (!negate) return obj;
      auto vg = [obj](const HilbertVec& u) {
        SmoothEval se = obj.smooth_value_grad(u);
        se.grad = scale(-1.0, se.grad);
        return se;
      };
      auto v = [obj](const HilbertVec& u) { return obj.smooth_value(u); };
      return CompositeObjective(obj.space(), v, vg, obj.nonsmooth(),
                                obj.lipschitz_grad());
    };
  } else {
    throw std::runtime_error("unknown problem kind '" + kind + "'");
  }
  return bp;
}

SolverConfig parse_solver_config(const json& j) {
  reject_unknown_keys(j,
                      {"rule", "delta", "m_max", "eta", "alpha_lb", "alpha_ub",
                       "alpha0", "tol", "max_iter", "linesearch",
                       "max_backtracks"},
                      "solver");
  SolverConfig cfg;
  if (j.contains("rule")) {
    const auto rule = parse_step_rule(j["rule"].get<std::string>());
    if (!rule) {
      throw std::runtime_error("unknown step rule '" +
                               j["rule"].get<std::string>() + "'");
    }
    cfg.rule = *rule;
  }
  cfg.delta = get_num(j, "delta", cfg.delta);
  cfg.m_max = static_cast<int>(get_int(j, "m_max", cfg.m_max));
  cfg.eta = get_num(j, "eta", cfg.eta);
  cfg.alpha_lb = get_num(j, "alpha_lb", cfg.alpha_lb);
  cfg.alpha_ub = get_num(j, "alpha_ub", cfg.alpha_ub);
  cfg.alpha0 = get_num(j, "alpha0", cfg.alpha0);
  cfg.tol = get_num(j, "tol", cfg.tol);
  cfg.max_iter = get_int(j, "max_iter", cfg.max_iter);
  if (j.contains("linesearch")) {
    cfg.linesearch_enabled = j["linesearch"].get<bool>();
  }
  cfg.max_backtracks =
      static_cast<int>(get_int(j, "max_backtracks", cfg.max_backtracks));
  cfg.validate();
  return cfg;
}
}  // namespace

RunConfig load_run_config(const std::string& path) {
  const json root = parse_json_file(path);
  if (!root.is_object()) throw std::runtime_error(path + ": not a JSON object");
  reject_unknown_keys(root, {"problem", "solver", "output", "seed"}, "config");
  RunConfig rc;
  rc.seed = root.contains("seed")
                ? root["seed"].get<std::uint64_t>()
                : 0;
  if (!root.contains("problem")) {
    throw std::runtime_error(path + ": missing 'problem'");
  }
  rc.problem = build_problem(root["problem"], rc.seed);
  if (root.contains("solver")) rc.solver = parse_solver_config(root["solver"]);
  if (root.contains("output")) {
    const auto& out = root["output"];
    reject_unknown_keys(
        out, {"trace_path", "snapshots", "snapshots_path", "summary_path"},
        "output");
    if (out.contains("trace_path")) {
      rc.trace_path = out["trace_path"].get<std::string>();
    }
    if (out.contains("snapshots")) rc.snapshots = out["snapshots"].get<bool>();
    if (out.contains("snapshots_path")) {
      rc.snapshots_path = out["snapshots_path"].get<std::string>();
    }
    if (out.contains("summary_path")) {
      rc.summary_path = out["summary_path"].get<std::string>();
    }
  }
  return rc;
}

namespace {
json summary_json(const SolverResult& res) {
  return json{{"status", solve_status_name(res.status)},
              {"iterations",
               res.trace.empty() ? 0 : res.trace.back().k},
              {"f_evals",
               res.trace.empty() ? 0 : res.trace.back().cum_f_evals},
              {"grad_evals",
               res.trace.empty() ? 0 : res.trace.back().cum_grad_evals},
              {"final_gmap_norm",
               res.trace.empty() ? 0.0 : res.trace.back().gmap_norm},
              {"wall_ms", res.trace.empty() ? 0.0 : res.trace.back().wall_ms}};
}

int status_exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return kExitOk;
    case SolveStatus::MaxIter: return kExitMaxIter;
    default: return kExitNumericError;
  }
}
}  // namespace

int cmd_run(const std::string& config_path, bool demo_nonconvergence,
            const std::optional<std::string>& out_override,
            std::optional<bool> snapshots_override) {
  RunConfig rc;
  try {
    rc = load_run_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (out_override) rc.trace_path = *out_override;
  if (snapshots_override) rc.snapshots = *snapshots_override;
  if (demo_nonconvergence) {
    // Pure BB iteration from a deliberately bad starting step parameter;
    // the outcome is reported, nothing is asserted.
    rc.solver.alpha0 = 1.0;
    rc.solver.linesearch_enabled = false;
    if (rc.solver.rule == StepRule::Fixed) rc.solver.rule = StepRule::BB1a;
    NMFBS_LOG_INFO("demo-nonconvergence: alpha0=1, linesearch off, rule "
                   << step_rule_name(rc.solver.rule));
  }

  rc.solver.record_snapshots = rc.snapshots;
  SolverResult res;
  try {
    const CompositeObjective obj = rc.problem.make_objective(false);
    res = solve(obj, rc.solver, rc.problem.u0);
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitNumericError;
  }

  try {
    write_trace_csv(rc.trace_path, res.trace);
    if (rc.snapshots) {
      const std::string spath =
          rc.snapshots_path.value_or(rc.trace_path + ".snapshots.bin");
      write_snapshots(spath, res.snapshots);
    }
    const json summary = summary_json(res);
    const std::string spath =
        rc.summary_path.value_or(rc.trace_path + ".summary.json");
    std::ofstream sf(spath);
    sf << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (!res.message.empty()) {
    NMFBS_LOG_WARN("solver: " << res.message);
  }
  return status_exit_code(res.status);
}

namespace {
struct CompareRow {
  std::string label;
  SolverConfig config;
  SolverResult result;
  bool ran = false;
  std::string error;
};

SolverConfig config_for_token(const std::string& token, SolverConfig base) {
  std::string rule_name = token;
  if (token.rfind("nonmon-", 0) == 0) {
    rule_name = token.substr(7);
    base.linesearch_enabled = true;
  } else if (token.rfind("mon-", 0) == 0) {
    rule_name = token.substr(4);
    base.linesearch_enabled = true;
    base.m_max = 0;
  } else {
    // Bare rule tokens reproduce the pure step-size iteration.
    base.linesearch_enabled = false;
  }
  const auto rule = parse_step_rule(rule_name);
  if (!rule) throw std::runtime_error("unknown rule token '" + token + "'");
  base.rule = *rule;
  return base;
}
}  // namespace

int cmd_compare(const std::string& config_path,
                const std::vector<std::string>& rules, int threads,
                const std::string& out_path) {
  RunConfig rc;
  std::vector<CompareRow> rows;
  try {
    rc = load_run_config(config_path);
    std::vector<std::string> tokens = rules;
    if (tokens.empty()) {
      tokens = {"fixed", "bb1a", "bb2a",        "abba",    "bb1b",
                "bb2b",  "abbb", "nonmon-bb1b", "mon-bb1b"};
    }
    for (const auto& t : tokens) {
      rows.push_back(CompareRow{t, config_for_token(t, rc.solver), {}, false, ""});
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  const auto run_row = [&](CompareRow& row) {
    try {
      const CompositeObjective obj = rc.problem.make_objective(false);
      row.result = solve(obj, row.config, rc.problem.u0);
      row.ran = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  if (threads <= 1) {
    for (auto& row : rows) run_row(row);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    while (next < rows.size()) {
      const std::size_t batch =
          std::min<std::size_t>(threads, rows.size() - next);
      pool.clear();
      for (std::size_t i = 0; i < batch; ++i) {
        pool.emplace_back(run_row, std::ref(rows[next + i]));
      }
      for (auto& t : pool) t.join();
      next += batch;
    }
  }

  std::string csv = "rule,grad_evals,f_evals,wall_ms,status\n";
  bool all_converged = true;
  for (const auto& row : rows) {
    csv += row.label;
    csv += ',';
    if (row.ran) {
      const auto& tr = row.result.trace;
      csv += std::to_string(tr.empty() ? 0 : tr.back().cum_grad_evals);
      csv += ',';
      csv += std::to_string(tr.empty() ? 0 : tr.back().cum_f_evals);
      csv += ',';
      csv += format_double(tr.empty() ? 0.0 : tr.back().wall_ms);
      csv += ',';
      csv += solve_status_name(row.result.status);
      all_converged &= row.result.status == SolveStatus::Converged;
    } else {
      csv += "0,0,0,NumericError";
      all_converged = false;
      NMFBS_LOG_WARN("compare: " << row.label << " failed: " << row.error);
    }
    csv += '\n';
  }
  try {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + out_path);
    f << csv;
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kExitConfigError;
  }
  std::cout << csv;
  return all_converged ? kExitOk : kExitNumericError;
}

int cmd_gradcheck(const std::string& config_path, bool break_adjoint) {
  RunConfig rc;
  try {
    rc = load_run_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (rc.problem.kind != "elliptic" && rc.problem.kind != "parabolic") {
    std::cerr << "gradcheck: requires a PDE problem kind\n";
    return kExitConfigError;
  }
  const double eps = rc.problem.kind == "elliptic" ? 1e-5 : 1e-4;

  try {
    const CompositeObjective obj = rc.problem.make_objective(break_adjoint);
    std::mt19937_64 rng(rc.seed + 17);
    std::uniform_real_distribution<double> base_dist(-0.5, 0.5);
    std::normal_distribution<double> dir_dist(0.0, 1.0);

    HilbertVec u(rc.problem.space);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = base_dist(rng);
    const SmoothEval se = obj.smooth_value_grad(u);

    bool all_ok = true;
    for (int d = 0; d < 5; ++d) {
      HilbertVec h(rc.problem.space);
      for (std::size_t i = 0; i < h.size(); ++i) h[i] = dir_dist(rng);
      const double hn = norm(h);
      for (std::size_t i = 0; i < h.size(); ++i) h[i] /= hn;

      const double fp = obj.smooth_value(axpy(eps, h, u));
      const double fm = obj.smooth_value(axpy(-eps, h, u));
      const double fd = (fp - fm) / (2.0 * eps);
      const double an = inner(se.grad, h);
      const double rel =
          std::abs(fd - an) / std::max(1.0, std::abs(an));
      const bool ok = rel <= 1e-4;
      all_ok &= ok;
      std::cout << "direction " << d << ": fd=" << format_double(fd)
                << " adjoint=" << format_double(an)
                << " rel_err=" << format_double(rel)
                << (ok ? "  ok" : "  FAIL") << "\n";
    }
    return all_ok ? kExitOk : kExitCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "gradcheck error: " << e.what() << "\n";
    return kExitNumericError;
  }
}

int cmd_verify(const std::string& trace_path, const std::string& ctx_path,
               const std::optional<std::string>& out_path) {
  std::vector<IterationRecord> trace;
  TheoryContext ctx;
  std::optional<BuiltProblem> problem;
  std::vector<HilbertVec> snapshots;
  bool have_snapshots = false;

  try {
    trace = read_trace_csv(trace_path);
    const json j = parse_json_file(ctx_path);
    reject_unknown_keys(j,
                        {"config", "L", "F_star", "F_lower", "u_star",
                         "problem", "snapshots_path", "seed"},
                        "ctx");
    if (j.contains("config")) ctx.config = parse_solver_config(j["config"]);
    if (j.contains("L")) ctx.L = j["L"].get<double>();
    if (j.contains("F_star")) ctx.F_star = j["F_star"].get<double>();
    if (j.contains("F_lower")) ctx.F_lower = j["F_lower"].get<double>();
    const std::uint64_t seed =
        j.contains("seed") ? j["seed"].get<std::uint64_t>() : 0;
    if (j.contains("problem")) {
      problem = build_problem(j["problem"], seed);
      if (!ctx.L && problem->lipschitz) ctx.L = problem->lipschitz;
      if (!ctx.F_star && problem->f_star) ctx.F_star = problem->f_star;
      if (!ctx.u_star && problem->u_star) ctx.u_star = problem->u_star;
    }
    if (j.contains("u_star")) {
      const auto arr = j["u_star"].get<std::vector<double>>();
      SpacePtr space =
          problem ? problem->space : make_euclidean_space(arr.size());
      ctx.u_star = HilbertVec(space, arr);
    }
    if (j.contains("snapshots_path")) {
      const auto rows = read_snapshots(j["snapshots_path"].get<std::string>());
      SpacePtr space = problem ? problem->space
                               : (rows.empty() ? nullptr
                                               : make_euclidean_space(
                                                     rows.front().size()));
      for (const auto& r : rows) snapshots.emplace_back(space, r);
      have_snapshots = true;
    }
  } catch (const std::exception& e) {
    std::cerr << "verify input error: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::vector<CheckReport> reports;
  reports.push_back(check_sufficient_decrease(trace, ctx.config));
  reports.push_back(check_nu_monotone(trace, ctx.config));
  std::optional<CompositeObjective> obj;
  if (problem) obj = problem->make_objective(false);
  reports.push_back(check_complexity(trace, ctx, obj ? &*obj : nullptr,
                                     have_snapshots ? &snapshots : nullptr));
  reports.push_back(
      check_quasi_fejer(trace, ctx, have_snapshots ? &snapshots : nullptr));
  reports.push_back(check_sublinear(trace, ctx));
  const RateEstimate rate = estimate_rate(trace, ctx);

  json out;
  out["checks"] = json::parse(reports_to_json(reports));
  if (rate.sigma_fit) {
    out["rate_estimate"] = {{"sigma_fit", *rate.sigma_fit},
                            {"r_squared", rate.r_squared},
                            {"points", rate.points},
                            {"window", {rate.window_begin, rate.window_end}}};
  } else {
    out["rate_estimate"] = nullptr;
  }
  const std::string text = out.dump(2);
  std::cout << text << "\n";
  if (out_path) {
    std::ofstream f(*out_path);
    f << text << "\n";
  }
  for (const auto& r : reports) {
    if (r.status == CheckStatus::Fail) return kExitCheckFailed;
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Nonmonotone forward-backward splitting solver and "
               "verification harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "compare.csv";
  std::optional<std::string> run_out;
  std::vector<std::string> rules;
  int threads = 1;
  bool snapshots_flag = false;
  bool demo_nonconvergence = false;
  bool break_adjoint = false;
  std::string trace_path, ctx_path;
  std::optional<std::string> verify_out;

  auto* run = app.add_subcommand("run", "run a single solve from a config");
  run->add_option("--config", config_path, "JSON run config")->required();
  std::string run_out_str;
  auto* run_out_opt = run->add_option("--out", run_out_str, "trace CSV path");
  run->add_flag("--snapshots", snapshots_flag, "record iterate snapshots");
  run->add_flag("--demo-nonconvergence", demo_nonconvergence,
                "rerun the divergence illustration (alpha0=1, no linesearch)");

  auto* cmp = app.add_subcommand("compare", "compare step-size rules");
  cmp->add_option("--config", config_path, "JSON run config")->required();
  cmp->add_option("--rules", rules,
                  "rule tokens (fixed, bb1a, ..., nonmon-bb1b, mon-bb1b)")
      ->delimiter(',');
  cmp->add_option("--threads", threads, "concurrent runs");
  cmp->add_option("--out", out_path, "comparison CSV path");

  auto* gc = app.add_subcommand("gradcheck", "finite-difference gradient check");
  gc->add_option("--config", config_path, "JSON run config")->required();
  gc->add_flag("--break-adjoint", break_adjoint,
               "negate the adjoint gradient (negative control)");

  auto* vf = app.add_subcommand("verify", "replay theory checks on a trace");
  vf->add_option("--trace", trace_path, "trace CSV from run")->required();
  vf->add_option("--ctx", ctx_path, "theory context JSON")->required();
  std::string verify_out_str;
  auto* vf_out_opt = vf->add_option("--out", verify_out_str, "report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  if (*run_out_opt) run_out = run_out_str;
  if (*vf_out_opt) verify_out = verify_out_str;

  if (run->parsed()) {
    return cmd_run(config_path, demo_nonconvergence, run_out,
                   snapshots_flag ? std::optional<bool>(true) : std::nullopt);
  }
  if (cmp->parsed()) {
    return cmd_compare(config_path, rules, threads, out_path);
  }
  if (gc->parsed()) {
    return cmd_gradcheck(config_path, break_adjoint);
  }
  if (vf->parsed()) {
    return cmd_verify(trace_path, ctx_path, verify_out);
  }
  return kExitConfigError;
}

}  // namespace nmfbs::cli
