// Copyright 2026 The fracgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fracgame/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "fracgame/errors.hpp"
#include "fracgame/game.hpp"
#include "fracgame/report.hpp"
#include "fracgame/util.hpp"
#include "fracgame/viscosity.hpp"

namespace fracgame {
namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string digest_of(const nlohmann::json& inputs) {
  return hex64(fnv1a64(inputs.dump()));
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  const auto end = text.begin() +
                   static_cast<std::ptrdiff_t>(std::min(offset, text.size()));
  return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

// Best-effort anchor: the line of the first occurrence of "key" in the raw
// document, 0 when the key cannot be located.
std::size_t line_of_key(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  const std::size_t pos = text.find(needle);
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

[[noreturn]] void fail_config(const std::string& origin,
                              const std::string& text, const std::string& key,
                              const std::string& what) {
  const std::size_t line = line_of_key(text, key);
  std::string where = origin;
  if (line > 0) where += ":" + std::to_string(line);
  throw ConfigError(where + ": " + what);
}

double get_number(const nlohmann::json& obj, const char* key, double fallback,
                  const std::string& origin, const std::string& text) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    fail_config(origin, text, key,
                std::string("key \"") + key + "\" must be a number");
  }
  return obj[key].get<double>();
}

std::size_t get_count(const nlohmann::json& obj, const char* key,
                      std::size_t fallback, const std::string& origin,
                      const std::string& text) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer() || obj[key].get<double>() < 0) {
    fail_config(origin, text, key,
                std::string("key \"") + key +
                    "\" must be a non-negative integer");
  }
  return obj[key].get<std::size_t>();
}

std::string get_string(const nlohmann::json& obj, const char* key,
                       const std::string& fallback, const std::string& origin,
                       const std::string& text) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) {
    fail_config(origin, text, key,
                std::string("key \"") + key + "\" must be a string");
  }
  return obj[key].get<std::string>();
}

std::vector<double> get_number_list(const nlohmann::json& obj, const char* key,
                                    std::vector<double> fallback,
                                    const std::string& origin,
                                    const std::string& text) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_array() || obj[key].empty()) {
    fail_config(origin, text, key,
                std::string("key \"") + key +
                    "\" must be a non-empty array of numbers");
  }
  std::vector<double> values;
  for (const nlohmann::json& v : obj[key]) {
    if (!v.is_number()) {
      fail_config(origin, text, key,
                  std::string("key \"") + key +
                      "\" must be a non-empty array of numbers");
    }
    values.push_back(v.get<double>());
  }
  return values;
}

void reject_unknown_keys(const nlohmann::json& obj,
                         const std::set<std::string>& known,
                         const std::string& origin, const std::string& text) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (known.find(it.key()) == known.end()) {
      fail_config(origin, text, it.key(),
                  "unknown key \"" + it.key() + "\"");
    }
  }
}

// ---------------------------------------------------------------------------
// Suite plumbing.

struct SuiteContext {
  ScenarioConfig cfg;
  std::shared_ptr<const Grid> grid;
  GameDynamics dyn;
  NuParams params;
  std::vector<SampledPath> library;
  std::vector<double> times;
};

struct SuiteOutput {
  std::vector<CheckReport> reports;
  nlohmann::json extras = nlohmann::json::object();
  std::string trace;
};

SuiteContext make_context(const ScenarioConfig& cfg) {
  SuiteContext ctx{cfg,
                   cfg.make_grid(),
                   cfg.make_dynamics(),
                   cfg.make_nu_params(),
                   {},
                   {}};
  ctx.library =
      build_path_library(cfg.alpha, ctx.grid, ctx.dyn.dim(), cfg.library_k,
                         ctx.dyn.c_star(), cfg.library_count, cfg.seed);
  const std::size_t stride = std::max<std::size_t>(1, cfg.fine_cells / 8);
  for (std::size_t i = 0; i < ctx.grid->num_nodes(); i += stride) {
    ctx.times.push_back(ctx.grid->node(i));
  }
  if (ctx.times.back() != ctx.grid->T()) ctx.times.push_back(ctx.grid->T());
  return ctx;
}

std::string library_trace(const std::vector<SampledPath>& library) {
  const Grid& g = library.front().grid();
  const std::size_t n = library.front().dim();
  std::string out = "tau,path_index";
  for (std::size_t i = 0; i < n; ++i) out += ",x" + std::to_string(i);
  out += "\n";
  for (std::size_t idx = 0; idx < library.size(); ++idx) {
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
      out += fmt_double(g.node(i)) + "," + std::to_string(idx);
      for (double c : library[idx].state(i)) out += "," + fmt_double(c);
      out += "\n";
    }
  }
  return out;
}

SampleSpec make_sample_spec(const SuiteContext& ctx) {
  SampleSpec spec;
  spec.count = 200;
  spec.t_max = ctx.cfg.T;
  spec.path_cells = ctx.cfg.fine_cells;
  spec.alpha = ctx.cfg.alpha;
  spec.seed = ctx.cfg.seed;
  return spec;
}

SuiteOutput suite_validate(const SuiteContext& ctx) {
  SuiteOutput out;
  const SampleSpec spec = make_sample_spec(ctx);
  out.reports = validate_assumptions(ctx.dyn, spec);
  for (CheckReport& r : hamiltonian_properties(ctx.dyn, spec)) {
    out.reports.push_back(std::move(r));
  }
  out.extras["catalog_id"] = ctx.dyn.catalog_id();
  out.extras["separable"] = ctx.dyn.separable();
  out.extras["c_star"] = ctx.dyn.c_star();
  out.extras["lambda_star"] = ctx.dyn.lambda_star();
  out.trace = library_trace(ctx.library);
  return out;
}

SuiteOutput suite_simulate(const SuiteContext& ctx) {
  SuiteOutput out;
  const ScenarioConfig& cfg = ctx.cfg;
  const Grid& g = *ctx.grid;

  // One trajectory under a seed-drawn schedule on the decision partition.
  ControlSchedule sched;
  const std::size_t run = cfg.fine_cells / cfg.decision_steps;
  for (std::size_t k = 0; k <= cfg.decision_steps; ++k) {
    sched.decision_times.push_back(g.node(k * run));
  }
  TrialRng rng(cfg.seed, "simulate", 0);
  for (std::size_t k = 0; k < cfg.decision_steps; ++k) {
    sched.u.push_back(cfg.p_grid[rng.uniform_index(cfg.p_grid.size())]);
    sched.v.push_back(cfg.q_grid[rng.uniform_index(cfg.q_grid.size())]);
  }
  const SampledPath traj =
      simulate(ctx.dyn, ctx.library.front(), 0.0, sched, ctx.grid);
  out.trace = trajectory_csv(traj);
  out.extras["cost"] = cost(ctx.dyn, traj, 0.0, sched);
  out.extras["terminal_state"] =
      std::vector<double>(traj.state(g.num_nodes() - 1).begin(),
                          traj.state(g.num_nodes() - 1).end());

  // Linear-rate benchmark: the explicit scheme against the series solution.
  const double exact =
      mittag_leffler(cfg.alpha, std::pow(cfg.T, cfg.alpha), 1e-12);
  const std::vector<std::size_t> sizes = {128, 256, 512, 1024};
  std::vector<double> errors;
  nlohmann::json table = nlohmann::json::object();
  for (std::size_t n : sizes) {
    const double y = caputo_linear_euler(cfg.alpha, 1.0, 1.0, n, cfg.T);
    errors.push_back(std::abs(y - exact) / std::abs(exact));
    table[std::to_string(n)] = errors.back();
  }
  out.extras["euler_relative_errors"] = table;
  out.reports.push_back(CheckReport::inequality(
      "euler_vs_mittag_leffler",
      digest_of({cfg.alpha, cfg.T, sizes.back()}), errors.back(), 0.05,
      0.0));
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    out.reports.push_back(CheckReport::inequality(
        "euler_error_decreasing", digest_of({cfg.alpha, cfg.T, sizes[i]}),
        errors[i], errors[i - 1], 0.0));
  }
  return out;
}

SuiteOutput suite_value(const SuiteContext& ctx) {
  SuiteOutput out;
  const ScenarioConfig& cfg = ctx.cfg;
  const Grid& g = *ctx.grid;
  const std::size_t K = cfg.decision_steps;

  nlohmann::json values = nlohmann::json::array();
  for (std::size_t idx = 0; idx < ctx.library.size(); ++idx) {
    const SampledPath& path = ctx.library[idx];
    const std::string dg = digest_of({idx, cfg.alpha, K});
    const ValueTree tree = value(ctx.dyn, path, 0.0, K, Commitment::kUpper);
    if (ctx.dyn.separable()) {
      out.reports.push_back(CheckReport::identity(
          "value_isaacs_gap", dg, tree.upper_value, tree.lower_value, 1e-9));
    }
    out.reports.push_back(CheckReport::identity(
        "value_dpp", dg, dpp_residual(ctx.dyn, path, 0.0, K), 0.0, 1e-12));

    // Tail replacement beyond the evaluation time must not move the value.
    const std::size_t mid = g.num_cells() / 2;
    const double tmid = g.node(mid);
    const std::size_t remaining = g.num_cells() - mid;
    std::size_t steps = std::min(K, remaining);
    while (remaining % steps != 0) --steps;
    TrialRng tail_rng(cfg.seed, "value_tail", idx);
    std::vector<double> tail(remaining * path.dim());
    for (double& s : tail) s = tail_rng.uniform(-1.0, 1.0);
    const SampledPath swapped = extend(path, tmid, tail);
    const double v1 =
        value(ctx.dyn, path, tmid, steps, Commitment::kUpper).upper_value;
    const double v2 =
        value(ctx.dyn, swapped, tmid, steps, Commitment::kUpper).upper_value;
    out.reports.push_back(
        CheckReport::identity("value_nonanticipative", dg, v1, v2, 1e-12));

    values.push_back({{"upper", tree.upper_value},
                      {"lower", tree.lower_value},
                      {"sigma_freeze", ctx.dyn.sigma(freeze(path, 0.0))}});
  }

  const CandidateFunctional phi = CandidateFunctional::from_value_tree(
      "value", ctx.dyn, K, Commitment::kUpper);
  out.reports.push_back(CheckReport::identity(
      "value_boundary", digest_of({cfg.alpha, K}),
      boundary_residual(phi, ctx.dyn, ctx.library), 0.0, 1e-12));
  out.reports.push_back(
      lipschitz_L_check(phi, ctx.library, ctx.times, 64, cfg.seed));

  out.extras["values"] = values;
  out.trace = library_trace(ctx.library);
  return out;
}

SuiteOutput suite_lemmas(const SuiteContext& ctx, std::size_t workers) {
  SuiteOutput out;
  const ScenarioConfig& cfg = ctx.cfg;
  const std::size_t trials = cfg.trials;

  std::vector<std::vector<CheckReport>> buckets(trials);
  auto run_trial = [&](std::size_t trial) {
    buckets[trial] =
        lemma_trial(ctx.params, ctx.library, cfg.theta, trial, cfg.seed);
  };
  if (workers <= 1 || trials <= 1) {
    for (std::size_t trial = 0; trial < trials; ++trial) run_trial(trial);
  } else {
    const std::size_t pool = std::min(workers, trials);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(pool);
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (std::size_t w = 0; w < pool; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (;;) {
            const std::size_t trial = next.fetch_add(1);
            if (trial >= trials) break;
            run_trial(trial);
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (std::thread& t : threads) t.join();
    for (const std::exception_ptr& e : failures) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (std::vector<CheckReport>& bucket : buckets) {
    for (CheckReport& r : bucket) out.reports.push_back(std::move(r));
  }
  out.extras["trials"] = trials;
  out.extras["theta"] = cfg.theta;
  out.trace = library_trace(ctx.library);
  return out;
}

SuiteOutput suite_viscosity(const SuiteContext& ctx) {
  SuiteOutput out;
  const ScenarioConfig& cfg = ctx.cfg;
  const CandidateFunctional phi = CandidateFunctional::from_value_tree(
      "value", ctx.dyn, cfg.decision_steps, Commitment::kUpper);

  const std::size_t probes = std::max<std::size_t>(1, cfg.trials / 5);
  for (std::size_t trial = 0; trial < probes; ++trial) {
    TrialRng rng(cfg.seed, "viscosity_probe", trial);
    const SampledPath& y_star =
        ctx.library[rng.uniform_index(ctx.library.size())];
    const double tau_star = ctx.times[rng.uniform_index(ctx.times.size())];
    const double offset = rng.uniform(-1.0, 1.0);
    const double scale = (trial % 2 == 0 ? 1.0 : -1.0) * 0.5;
    TestFunctional psi{ctx.params, tau_star, y_star, offset, 0.0, scale};
    out.reports.push_back(
        vplus_check(phi, psi, ctx.dyn, ctx.library, ctx.times));
    out.reports.push_back(
        vminus_check(phi, psi, ctx.dyn, ctx.library, ctx.times));
  }
  out.reports.push_back(CheckReport::identity(
      "value_boundary", digest_of({cfg.alpha, cfg.decision_steps}),
      boundary_residual(phi, ctx.dyn, ctx.library), 0.0, 1e-12));
  out.reports.push_back(
      lipschitz_L_check(phi, ctx.library, ctx.times, 64, cfg.seed));
  out.extras["probes"] = probes;
  out.trace = library_trace(ctx.library);
  return out;
}

SuiteOutput suite_doubling(const SuiteContext& ctx) {
  SuiteOutput out;
  const ScenarioConfig& cfg = ctx.cfg;
  const CandidateFunctional phi2 = CandidateFunctional::from_value_tree(
      "value", ctx.dyn, cfg.decision_steps, Commitment::kUpper);

  const DoublingReport same = doubling_diagnostic(
      phi2, phi2, ctx.dyn, ctx.params, ctx.library, ctx.times, cfg.eps_list);
  out.reports.push_back(CheckReport::identity(
      "doubling_identical_kappa", digest_of({cfg.alpha, cfg.decision_steps}),
      same.kappa, 0.0, 1e-12));

  // Same boundary data, interior bump growing away from the horizon: the
  // sampled gap is positive and the maximizers stay interior, so the full
  // bound chain runs.
  const double delta = 0.02;
  const CandidateFunctional phi1 = CandidateFunctional::from_hook(
      "value_plus_ramp", [phi2, delta](double t, const SampledPath& p) {
        return phi2(t, p) + delta * (p.grid().T() - t);
      });
  const DoublingReport rep = doubling_diagnostic(
      phi1, phi2, ctx.dyn, ctx.params, ctx.library, ctx.times, cfg.eps_list);
  for (const DoublingMaximizer& m : rep.per_eps) {
    const std::string dg = digest_of({m.eps, cfg.alpha});
    out.reports.push_back(CheckReport::inequality(
        "doubling_gap_bound", dg, m.gap_sq,
        rep.k1 * std::pow(m.eps, 3.0 / cfg.alpha), 1e-12));
    out.reports.push_back(CheckReport::inequality(
        "doubling_nu_bound", dg, m.nu_lhs, rep.k3 * m.eps, 1e-12));
    if (m.k5_checked) {
      out.reports.push_back(CheckReport::inequality(
          "doubling_gradient_bound", dg, m.grad_over_eps, m.k5_bound,
          1e-12));
    }
  }
  out.extras["identical"] = same.to_json();
  out.extras["perturbed"] = rep.to_json();
  out.trace = doubling_trace_csv(phi1, phi2, ctx.params, ctx.library,
                                 ctx.times, rep.zeta, cfg.eps_list.front());
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigError("cannot open output file " + path.string());
  }
  out << body;
  if (!out.good()) {
    throw ConfigError("failed writing output file " + path.string());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ScenarioConfig.

double ScenarioConfig::beta_or_default() const {
  if (beta >= 0.0) return beta;
  return 0.5 * std::min(1.0 - alpha, 0.5 * alpha);
}

std::shared_ptr<const Grid> ScenarioConfig::make_grid() const {
  return std::make_shared<const Grid>(Grid::uniform(fine_cells, T));
}

GameDynamics ScenarioConfig::make_dynamics() const {
  const SigmaKind kind =
      sigma == "norm" ? SigmaKind::kNorm : SigmaKind::kCoordinate;
  if (catalog_id == "pursuit_1d") {
    return GameDynamics::pursuit_1d(p_grid, q_grid);
  }
  if (catalog_id == "linear_scalar") {
    return GameDynamics::linear_scalar(dyn_a, dyn_b, dyn_c, dyn_d, dyn_e_u,
                                       dyn_e_v, kind, p_grid, q_grid);
  }
  if (catalog_id == "decoupled_2d") {
    // Both components share the configured scalar coefficients.
    return GameDynamics::decoupled_2d({dyn_a, dyn_a}, {dyn_b, dyn_b},
                                      {dyn_c, dyn_c}, kind, p_grid, q_grid);
  }
  throw ConfigError("unknown catalog_id \"" + catalog_id + "\"");
}

NuParams ScenarioConfig::make_nu_params() const {
  return NuParams::make(epsilon, alpha, beta_or_default(), T);
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json j;
  j["T"] = T;
  j["alpha"] = alpha;
  j["beta"] = beta_or_default();
  j["catalog_id"] = catalog_id;
  j["decision_steps"] = decision_steps;
  j["dynamics"] = {{"a", dyn_a},   {"b", dyn_b},     {"c", dyn_c},
                   {"d", dyn_d},   {"e_u", dyn_e_u}, {"e_v", dyn_e_v}};
  j["eps_list"] = eps_list;
  j["epsilon"] = epsilon;
  j["fine_cells"] = fine_cells;
  j["library"] = {{"count", library_count}, {"k", library_k}};
  j["out_dir"] = out_dir;
  j["p_grid"] = p_grid;
  j["q_grid"] = q_grid;
  j["seed"] = seed;
  j["sigma"] = sigma;
  j["theta"] = theta;
  j["trials"] = trials;
  return j;
}

std::string ScenarioConfig::digest() const {
  nlohmann::json j = to_json();
  j.erase("out_dir");
  return hex64(fnv1a64(j.dump()));
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text,
                                              const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t line =
        line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError(origin + ":1: top level must be a JSON object");
  }

  static const std::set<std::string> kTopKeys = {
      "T",         "alpha",    "beta",       "catalog_id", "decision_steps",
      "dynamics",  "eps_list", "epsilon",    "fine_cells", "library",
      "out_dir",   "p_grid",   "q_grid",     "seed",       "sigma",
      "theta",     "trials"};
  reject_unknown_keys(doc, kTopKeys, origin, text);
  if (!doc.contains("T")) {
    throw ConfigError(origin + ": missing required key \"T\"");
  }

  ScenarioConfig cfg;
  cfg.T = get_number(doc, "T", cfg.T, origin, text);
  cfg.alpha = get_number(doc, "alpha", cfg.alpha, origin, text);
  cfg.beta = get_number(doc, "beta", cfg.beta, origin, text);
  cfg.epsilon = get_number(doc, "epsilon", cfg.epsilon, origin, text);
  cfg.fine_cells =
      get_count(doc, "fine_cells", cfg.fine_cells, origin, text);
  cfg.decision_steps =
      get_count(doc, "decision_steps", cfg.decision_steps, origin, text);
  cfg.catalog_id =
      get_string(doc, "catalog_id", cfg.catalog_id, origin, text);
  cfg.sigma = get_string(doc, "sigma", cfg.sigma, origin, text);
  cfg.p_grid = get_number_list(doc, "p_grid", cfg.p_grid, origin, text);
  cfg.q_grid = get_number_list(doc, "q_grid", cfg.q_grid, origin, text);
  cfg.eps_list = get_number_list(doc, "eps_list", cfg.eps_list, origin, text);
  cfg.theta = get_number(doc, "theta", cfg.theta, origin, text);
  cfg.trials = get_count(doc, "trials", cfg.trials, origin, text);
  cfg.out_dir = get_string(doc, "out_dir", cfg.out_dir, origin, text);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      fail_config(origin, text, "seed",
                  "key \"seed\" must be an unsigned integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("dynamics")) {
    const nlohmann::json& dj = doc["dynamics"];
    if (!dj.is_object()) {
      fail_config(origin, text, "dynamics",
                  "key \"dynamics\" must be an object");
    }
    static const std::set<std::string> kDynKeys = {"a", "b",   "c",
                                                   "d", "e_u", "e_v"};
    reject_unknown_keys(dj, kDynKeys, origin, text);
    cfg.dyn_a = get_number(dj, "a", cfg.dyn_a, origin, text);
    cfg.dyn_b = get_number(dj, "b", cfg.dyn_b, origin, text);
    cfg.dyn_c = get_number(dj, "c", cfg.dyn_c, origin, text);
    cfg.dyn_d = get_number(dj, "d", cfg.dyn_d, origin, text);
    cfg.dyn_e_u = get_number(dj, "e_u", cfg.dyn_e_u, origin, text);
    cfg.dyn_e_v = get_number(dj, "e_v", cfg.dyn_e_v, origin, text);
  }
  if (doc.contains("library")) {
    const nlohmann::json& lj = doc["library"];
    if (!lj.is_object()) {
      fail_config(origin, text, "library",
                  "key \"library\" must be an object");
    }
    static const std::set<std::string> kLibKeys = {"count", "k"};
    reject_unknown_keys(lj, kLibKeys, origin, text);
    cfg.library_count =
        get_count(lj, "count", cfg.library_count, origin, text);
    cfg.library_k = get_number(lj, "k", cfg.library_k, origin, text);
  }

  // Window validation, before any computation runs.
  if (!(std::isfinite(cfg.T) && cfg.T > 0.0)) {
    fail_config(origin, text, "T", "key \"T\" must be a positive real");
  }
  if (cfg.fine_cells < 2) {
    fail_config(origin, text, "fine_cells", "need at least two fine cells");
  }
  if (cfg.decision_steps < 1) {
    fail_config(origin, text, "decision_steps",
                "need at least one decision step");
  }
  if (cfg.fine_cells % cfg.decision_steps != 0) {
    fail_config(origin, text, "decision_steps",
                "decision_steps must divide fine_cells evenly");
  }
  if (cfg.sigma != "coordinate" && cfg.sigma != "norm") {
    fail_config(origin, text, "sigma",
                "key \"sigma\" must be \"coordinate\" or \"norm\"");
  }
  if (!(cfg.theta > 0.0 && cfg.theta < cfg.T)) {
    fail_config(origin, text, "theta",
                "key \"theta\" must lie strictly between 0 and T");
  }
  if (cfg.trials < 1) {
    fail_config(origin, text, "trials", "need at least one trial");
  }
  if (cfg.library_count < 1) {
    fail_config(origin, text, "library",
                "library count must be at least one");
  }
  if (!(cfg.library_k > 0.0)) {
    fail_config(origin, text, "library", "library k must be positive");
  }
  try {
    const NuParams base = cfg.make_nu_params();
    for (double e : cfg.eps_list) (void)base.with_eps(e);
  } catch (const Error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  try {
    (void)cfg.make_dynamics();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot read config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), path);
}

// ---------------------------------------------------------------------------
// Linear-rate benchmark integrator.

double caputo_linear_euler(double alpha, double lambda, double y0,
                           std::size_t cells, double T) {
  if (cells < 1) {
    throw DomainError("caputo_linear_euler: need at least one cell");
  }
  const Grid g = Grid::uniform(cells, T);
  const ConvolutionWeights w(g, alpha);
  std::vector<double> f(cells, 0.0);
  double y = y0;
  for (std::size_t i = 0; i < cells; ++i) {
    f[i] = lambda * y;  // derivative frozen at the left node of cell i
    y = y0;
    const std::vector<double>& row = w.row(i + 1);
    for (std::size_t j = 0; j <= i; ++j) y += row[j] * f[j];
    if (!std::isfinite(y)) {
      throw DivergenceError("caputo_linear_euler: trajectory diverged");
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// Runner.

int run_scenario(const std::string& subcommand, const ScenarioConfig& config,
                 const std::string& out_dir, std::size_t workers) {
  const SuiteContext ctx = make_context(config);
  SuiteOutput out;
  if (subcommand == "validate") {
    out = suite_validate(ctx);
  } else if (subcommand == "simulate") {
    out = suite_simulate(ctx);
  } else if (subcommand == "value") {
    out = suite_value(ctx);
  } else if (subcommand == "lemmas") {
    out = suite_lemmas(ctx, workers);
  } else if (subcommand == "viscosity") {
    out = suite_viscosity(ctx);
  } else if (subcommand == "doubling") {
    out = suite_doubling(ctx);
  } else {
    throw ConfigError("unknown subcommand \"" + subcommand +
                      "\" (expected validate | simulate | value | lemmas | "
                      "viscosity | doubling)");
  }

  const std::string dg = config.digest();
  std::size_t failures = 0;
  std::string lines;
  for (CheckReport& r : out.reports) {
    r.scenario = r.scenario.empty() ? dg : dg + "/" + r.scenario;
    if (!r.pass) ++failures;
    lines += r.to_json().dump();
    lines += "\n";
  }

  nlohmann::json summary;
  summary["subcommand"] = subcommand;
  summary["config"] = config.to_json();
  summary["digest"] = dg;
  summary["reports"] = out.reports.size();
  summary["failures"] = failures;
  for (auto it = out.extras.begin(); it != out.extras.end(); ++it) {
    summary[it.key()] = it.value();
  }

  const std::filesystem::path dir =
      out_dir.empty() ? config.out_dir : out_dir;
  std::filesystem::create_directories(dir);
  write_file(dir / "reports.jsonl", lines);
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_file(dir / "trace.csv", out.trace);
  return failures == 0 ? 0 : 1;
}

int run_suite_exit(const std::string& subcommand,
                   const std::string& config_path, const std::string& out_dir,
                   const std::uint64_t* seed_override, std::size_t workers,
                   std::string* message) {
  try {
    ScenarioConfig cfg = ScenarioConfig::from_file(config_path);
    if (seed_override != nullptr) cfg.seed = *seed_override;
    return run_scenario(subcommand, cfg, out_dir, workers);
  } catch (const ConfigError& e) {
    if (message) *message = e.what();
    return 2;
  } catch (const DomainError& e) {
    if (message) *message = e.what();
    return 2;
  } catch (const AlignmentError& e) {
    if (message) *message = e.what();
    return 2;
  } catch (const Error& e) {
    if (message) *message = e.what();
    return 3;
  } catch (const std::exception& e) {
    if (message) *message = e.what();
    return 3;
  }
}

}  // namespace fracgame
