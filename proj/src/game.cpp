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

#include "fracgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "fracgame/errors.hpp"
#include "fracgame/util.hpp"

namespace fracgame {
namespace {

constexpr double kOverflowGuard = 1e6;
constexpr double kBranchBudget = 1e7;

void require_control(const std::vector<double>& grid, double value,
                     const char* who) {
  if (std::find(grid.begin(), grid.end(), value) == grid.end()) {
    throw DomainError(std::string(who) +
                      ": control value is not a point of the control grid");
  }
}

void check_schedule_shape(const ControlSchedule& sched, const char* who) {
  if (sched.decision_times.size() < 2) {
    throw DomainError(std::string(who) +
                      ": schedule needs at least one decision cell");
  }
  const std::size_t K = sched.decision_times.size() - 1;
  if (sched.u.size() != K || sched.v.size() != K) {
    throw DomainError(std::string(who) +
                      ": one control choice per decision cell required");
  }
  for (std::size_t k = 0; k + 1 < sched.decision_times.size(); ++k) {
    if (!(sched.decision_times[k] < sched.decision_times[k + 1])) {
      throw DomainError(std::string(who) +
                        ": decision times must be strictly increasing");
    }
  }
}

// Marching state shared by simulation and tree search: the derivative samples
// and node states live in flat buffers that branches overwrite depth-first,
// so a scenario tree reuses every common prefix without copying.
class Simulator {
 public:
  Simulator(const GameDynamics& dyn, const SampledPath& base, double t,
            const std::shared_ptr<const Grid>& fine_grid)
      : dyn_(&dyn),
        grid_(fine_grid),
        n_(base.dim()),
        alpha_(base.alpha()),
        weights_(*fine_grid, base.alpha()),
        x0_(base.x0().begin(), base.x0().end()) {
    if (base.dim() != dyn.dim()) {
      throw DomainError("simulate: path and dynamics dimension mismatch");
    }
    start_node_ = grid_->index_of(t);
    if (!(base.grid() == *grid_)) {
      // The prefix is resampled cell by cell; that is exact only when every
      // base breakpoint up to t is also a node of the fine grid.
      for (double node : base.grid().nodes()) {
        if (node > t) break;
        grid_->index_of(node);  // throws AlignmentError when missing
      }
    }
    caputo_.assign(grid_->num_cells() * n_, 0.0);
    states_.assign(grid_->num_nodes() * n_, 0.0);
    for (std::size_t j = 0; j < start_node_; ++j) {
      const std::vector<double> f = base.caputo_at(grid_->node(j));
      std::copy(f.begin(), f.end(), caputo_.begin() + j * n_);
    }
    for (std::size_t i = 0; i <= start_node_; ++i) compute_state(i);
  }

  const Grid& grid() const { return *grid_; }
  std::size_t start_node() const { return start_node_; }
  std::span<const double> state(std::size_t i) const {
    return {states_.data() + i * n_, n_};
  }
  const std::vector<double>& caputo() const { return caputo_; }

  // Fills the derivative on cell j from the current state at node j and
  // advances the state to node j + 1.
  void march_cell(std::size_t j, double u, double v) {
    dyn_->f(grid_->node(j), state(j), u, v, {caputo_.data() + j * n_, n_});
    compute_state(j + 1);
  }

  // Trapezoid of the running cost over cells [a, b) under fixed controls,
  // marching the trajectory along the way.
  double march_stage(std::size_t a, std::size_t b, double u, double v) {
    double acc = 0.0;
    for (std::size_t j = a; j < b; ++j) {
      const double chi_left = dyn_->chi(grid_->node(j), state(j), u, v);
      march_cell(j, u, v);
      const double chi_right = dyn_->chi(grid_->node(j + 1), state(j + 1), u, v);
      acc += 0.5 * (grid_->node(j + 1) - grid_->node(j)) *
             (chi_left + chi_right);
    }
    return acc;
  }

  SampledPath to_path() const {
    return SampledPath(alpha_, x0_, grid_, caputo_);
  }

 private:
  void compute_state(std::size_t i) {
    double* y = states_.data() + i * n_;
    std::copy(x0_.begin(), x0_.end(), y);
    for (std::size_t j = 0; j < i; ++j) {
      const double w = weights_.weight(i, j);
      const double* f = caputo_.data() + j * n_;
      for (std::size_t k = 0; k < n_; ++k) y[k] += w * f[k];
    }
    if (vec_norm({y, n_}) >= kOverflowGuard) {
      throw DivergenceError("trajectory norm reached the overflow guard at "
                            "tau = " +
                            std::to_string(grid_->node(i)));
    }
  }

  const GameDynamics* dyn_;
  std::shared_ptr<const Grid> grid_;
  std::size_t n_;
  double alpha_;
  ConvolutionWeights weights_;
  std::vector<double> x0_;
  std::vector<double> caputo_;
  std::vector<double> states_;
  std::size_t start_node_ = 0;
};

// Same trapezoid as Simulator::march_stage, over the precomputed states of a
// finished trajectory.
double stage_cost(const GameDynamics& dyn, const SampledPath& traj,
                  std::size_t a, std::size_t b, double u, double v) {
  const Grid& grid = traj.grid();
  double acc = 0.0;
  for (std::size_t j = a; j < b; ++j) {
    const double chi_left = dyn.chi(grid.node(j), traj.state(j), u, v);
    const double chi_right =
        dyn.chi(grid.node(j + 1), traj.state(j + 1), u, v);
    acc += 0.5 * (grid.node(j + 1) - grid.node(j)) * (chi_left + chi_right);
  }
  return acc;
}

// Exhaustive evaluation over the decision tree; returns (upper, lower) of
// the subtree below decision step k given the running cost accumulated so
// far.  The simulator holds the trajectory prefix for the current branch.
class TreeEval {
 public:
  TreeEval(Simulator& sim, const std::vector<std::size_t>& decision_nodes,
           const GameDynamics& dyn)
      : sim_(sim), nodes_(decision_nodes), dyn_(dyn) {}

  std::pair<double, double> rec(std::size_t k, double acc) {
    if (k + 1 == nodes_.size()) {
      const double total = acc + dyn_.sigma_terminal(sim_.state(nodes_.back()));
      return {total, total};
    }
    const std::vector<double>& P = dyn_.p_grid();
    const std::vector<double>& Q = dyn_.q_grid();
    // One fresh buffer per recursion level: the recursive calls below fill
    // their own children, so a shared buffer would be clobbered.
    std::vector<std::pair<double, double>> child(P.size() * Q.size());
    fill_children(k, acc, child);
    return reduce(child, P.size(), Q.size());
  }

  // Child subtree values for every first-step control pair, row-major in
  // (u index, v index).
  void fill_children(std::size_t k, double acc,
                     std::vector<std::pair<double, double>>& out) {
    const std::vector<double>& P = dyn_.p_grid();
    const std::vector<double>& Q = dyn_.q_grid();
    for (std::size_t i = 0; i < P.size(); ++i) {
      for (std::size_t j = 0; j < Q.size(); ++j) {
        const double stage =
            sim_.march_stage(nodes_[k], nodes_[k + 1], P[i], Q[j]);
        out[i * Q.size() + j] = rec(k + 1, acc + stage);
      }
    }
  }

  static std::pair<double, double> reduce(
      const std::vector<std::pair<double, double>>& child, std::size_t np,
      std::size_t nq) {
    double upper = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
      double row_max = child[i * nq].first;
      for (std::size_t j = 1; j < nq; ++j) {
        row_max = std::max(row_max, child[i * nq + j].first);
      }
      if (i == 0 || row_max < upper) upper = row_max;
    }
    double lower = 0.0;
    for (std::size_t j = 0; j < nq; ++j) {
      double col_min = child[j].second;
      for (std::size_t i = 1; i < np; ++i) {
        col_min = std::min(col_min, child[i * nq + j].second);
      }
      if (j == 0 || col_min > lower) lower = col_min;
    }
    return {upper, lower};
  }

 private:
  Simulator& sim_;
  const std::vector<std::size_t>& nodes_;
  const GameDynamics& dyn_;
};

}  // namespace

SampledPath simulate(const GameDynamics& dyn, const SampledPath& base,
                     double t, const ControlSchedule& sched,
                     const std::shared_ptr<const Grid>& fine_grid) {
  check_schedule_shape(sched, "simulate");
  const std::size_t idx_t = fine_grid->index_of(t);
  if (fine_grid->index_of(sched.decision_times.front()) != idx_t) {
    throw AlignmentError("simulate: schedule must start at t");
  }
  Simulator sim(dyn, base, t, fine_grid);
  for (std::size_t k = 0; k + 1 < sched.decision_times.size(); ++k) {
    require_control(dyn.p_grid(), sched.u[k], "simulate");
    require_control(dyn.q_grid(), sched.v[k], "simulate");
    const std::size_t a = fine_grid->index_of(sched.decision_times[k]);
    const std::size_t b = fine_grid->index_of(sched.decision_times[k + 1]);
    for (std::size_t j = a; j < b; ++j) sim.march_cell(j, sched.u[k], sched.v[k]);
  }
  return sim.to_path();
}

double cost(const GameDynamics& dyn, const SampledPath& traj, double t,
            const ControlSchedule& sched) {
  check_schedule_shape(sched, "cost");
  const Grid& grid = traj.grid();
  if (grid.index_of(sched.decision_times.front()) != grid.index_of(t)) {
    throw AlignmentError("cost: schedule must start at t");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < sched.decision_times.size(); ++k) {
    const std::size_t a = grid.index_of(sched.decision_times[k]);
    const std::size_t b = grid.index_of(sched.decision_times[k + 1]);
    acc += stage_cost(dyn, traj, a, b, sched.u[k], sched.v[k]);
  }
  const std::size_t last = grid.num_nodes() - 1;
  return acc + dyn.sigma_terminal(traj.state(last));
}

ValueTree value(const GameDynamics& dyn, const SampledPath& base, double t,
                std::size_t K, Commitment mode) {
  const std::shared_ptr<const Grid>& grid = base.grid_ptr();
  const std::size_t idx_t = grid->index_of(t);
  const std::size_t cells = grid->num_cells();

  ValueTree tree;
  tree.fine_grid = grid;
  tree.mode = mode;
  if (idx_t == cells) {  // t = T: the unique trajectory is the path itself
    const double v = dyn.sigma_terminal(base.state(cells));
    tree.decision_times = {grid->T()};
    tree.upper_value = tree.lower_value = v;
    tree.upper_witness.decision_times = {grid->T()};
    tree.lower_witness.decision_times = {grid->T()};
    tree.leaf_count = 1;
    return tree;
  }

  if (K == 0) throw DomainError("value: need at least one decision step");
  if ((cells - idx_t) % K != 0) {
    throw DomainError("value: the " + std::to_string(cells - idx_t) +
                      " fine cells after t do not split into " +
                      std::to_string(K) + " equal decision steps");
  }
  const double pairs = double(dyn.p_grid().size()) * double(dyn.q_grid().size());
  const double branches = std::pow(pairs, double(K));
  if (branches > kBranchBudget) {
    throw BudgetError("value: tree would have " + std::to_string(branches) +
                      " branches; the budget is " +
                      std::to_string(kBranchBudget) +
                      " (shrink K or the control grids)");
  }

  const std::size_t run = (cells - idx_t) / K;
  std::vector<std::size_t> decision_nodes(K + 1);
  for (std::size_t k = 0; k <= K; ++k) decision_nodes[k] = idx_t + run * k;
  tree.decision_times.resize(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    tree.decision_times[k] = grid->node(decision_nodes[k]);
  }

  Simulator sim(dyn, base, t, grid);
  TreeEval eval(sim, decision_nodes, dyn);
  const std::pair<double, double> values = eval.rec(0, 0.0);
  tree.upper_value = values.first;
  tree.lower_value = values.second;
  tree.leaf_count = std::size_t(std::llround(branches));

  // Witness replay: walk the optimal branch for each commitment order,
  // recomputing the child values a step at a time from the shared prefix.
  const std::vector<double>& P = dyn.p_grid();
  const std::vector<double>& Q = dyn.q_grid();
  for (Commitment which : {Commitment::kUpper, Commitment::kLower}) {
    ControlSchedule& witness = which == Commitment::kUpper
                                   ? tree.upper_witness
                                   : tree.lower_witness;
    witness.decision_times = tree.decision_times;
    double acc = 0.0;
    std::vector<std::pair<double, double>> child;
    for (std::size_t k = 0; k < K; ++k) {
      child.assign(P.size() * Q.size(), {0.0, 0.0});
      eval.fill_children(k, acc, child);
      std::size_t best_i = 0, best_j = 0;
      if (which == Commitment::kUpper) {
        double best_row = 0.0;
        for (std::size_t i = 0; i < P.size(); ++i) {
          double row_max = child[i * Q.size()].first;
          std::size_t arg_j = 0;
          for (std::size_t j = 1; j < Q.size(); ++j) {
            if (child[i * Q.size() + j].first > row_max) {
              row_max = child[i * Q.size() + j].first;
              arg_j = j;
            }
          }
          if (i == 0 || row_max < best_row) {
            best_row = row_max;
            best_i = i;
            best_j = arg_j;
          }
        }
      } else {
        double best_col = 0.0;
        for (std::size_t j = 0; j < Q.size(); ++j) {
          double col_min = child[j].second;
          std::size_t arg_i = 0;
          for (std::size_t i = 1; i < P.size(); ++i) {
            if (child[i * Q.size() + j].second < col_min) {
              col_min = child[i * Q.size() + j].second;
              arg_i = i;
            }
          }
          if (j == 0 || col_min > best_col) {
            best_col = col_min;
            best_j = j;
            best_i = arg_i;
          }
        }
      }
      witness.u.push_back(P[best_i]);
      witness.v.push_back(Q[best_j]);
      acc += sim.march_stage(decision_nodes[k], decision_nodes[k + 1],
                             P[best_i], Q[best_j]);
    }
  }
  return tree;
}

double dpp_residual(const GameDynamics& dyn, const SampledPath& base, double t,
                    std::size_t K) {
  const std::shared_ptr<const Grid>& grid = base.grid_ptr();
  const std::size_t idx_t = grid->index_of(t);
  if (idx_t == grid->num_cells()) {
    throw DomainError("dpp_residual: t must lie before the horizon");
  }
  const ValueTree tree = value(dyn, base, t, K, Commitment::kUpper);
  const double t1 = tree.decision_times[1];

  const std::vector<double>& P = dyn.p_grid();
  const std::vector<double>& Q = dyn.q_grid();
  const std::size_t a = grid->index_of(t);
  const std::size_t b = grid->index_of(t1);
  std::vector<std::pair<double, double>> child(P.size() * Q.size());
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t j = 0; j < Q.size(); ++j) {
      ControlSchedule first_step;
      first_step.decision_times = {t, t1};
      first_step.u = {P[i]};
      first_step.v = {Q[j]};
      const SampledPath traj = simulate(dyn, base, t, first_step, grid);
      const double stage = stage_cost(dyn, traj, a, b, P[i], Q[j]);
      const ValueTree cont =
          value(dyn, traj, t1, K - 1, Commitment::kUpper);
      child[i * Q.size() + j] = {stage + cont.upper_value,
                                 stage + cont.lower_value};
    }
  }
  const std::pair<double, double> recomposed =
      TreeEval::reduce(child, P.size(), Q.size());
  return std::max(std::abs(tree.upper_value - recomposed.first),
                  std::abs(tree.lower_value - recomposed.second));
}

WitnessResult minimax_witness(const GameDynamics& dyn,
                              const PathFunctional& phi, double t,
                              const SampledPath& base,
                              std::span<const double> s, MinimaxSign sign) {
  if (!phi) throw ConfigError("minimax_witness: functional is empty");
  const std::shared_ptr<const Grid>& grid = base.grid_ptr();
  const std::size_t n = base.dim();
  if (n != dyn.dim() || s.size() != n) {
    throw DomainError("minimax_witness: dimension mismatch");
  }
  const std::size_t idx_t = grid->index_of(t);
  const std::size_t cells = grid->num_cells();

  // Start from the frozen continuation of the history.
  std::vector<double> caputo(cells * n, 0.0);
  for (std::size_t j = 0; j < idx_t; ++j) {
    const std::vector<double> f = base.caputo_at(grid->node(j));
    std::copy(f.begin(), f.end(), caputo.begin() + j * n);
  }
  const std::vector<double> x0(base.x0().begin(), base.x0().end());
  SampledPath current(base.alpha(), x0, grid, caputo);
  const double phi0 = phi(t, current);
  if (idx_t == cells) return {std::move(current), 0.0};

  const double plus_sign = sign == MinimaxSign::kPlus ? 1.0 : -1.0;
  double integral = 0.0;   // Int_t^tau (<s, dy> - H(xi, y, s)) dxi so far
  double worst = 0.0;      // worst violation over the visited nodes
  for (std::size_t j = idx_t; j < cells; ++j) {
    const double tau = grid->node(j);
    const double h = grid->node(j + 1) - tau;
    const std::span<const double> y = current.state(j);
    const double h_left = hamiltonian(dyn, tau, y, s).value;
    const double bound = dyn.c_star() * (1.0 + vec_norm(y));

    // Candidate derivatives: realized dynamics over the control grids, plus
    // rest, all inside the admissible ball.
    std::vector<std::vector<double>> candidates;
    std::vector<double> g(n);
    for (double u : dyn.p_grid()) {
      for (double v : dyn.q_grid()) {
        dyn.f(tau, y, u, v, g);
        const double norm = vec_norm(g);
        if (norm > bound) {
          const double scale = bound / norm;
          for (double& c : g) c *= scale;
        }
        candidates.push_back(g);
      }
    }
    candidates.emplace_back(n, 0.0);
    if (candidates.empty()) {
      throw ConfigError("minimax_witness: empty candidate set");
    }

    bool have_best = false;
    double best_score = 0.0, best_integral = 0.0;
    std::vector<double> best_caputo;
    for (const std::vector<double>& cand : candidates) {
      std::copy(cand.begin(), cand.end(), caputo.begin() + j * n);
      SampledPath trial(base.alpha(), x0, grid, caputo);
      const double h_right =
          hamiltonian(dyn, grid->node(j + 1), trial.state(j + 1), s).value;
      const double trial_integral = integral + h * vec_dot(s, cand) -
                                    0.5 * h * (h_left + h_right);
      const double score = phi(grid->node(j + 1), trial) - trial_integral;
      // For the descent witness smaller scores are better; the ascent case
      // mirrors through the sign.
      if (!have_best || plus_sign * score < plus_sign * best_score) {
        have_best = true;
        best_score = score;
        best_integral = trial_integral;
        best_caputo = cand;
      }
    }
    std::copy(best_caputo.begin(), best_caputo.end(), caputo.begin() + j * n);
    current = SampledPath(base.alpha(), x0, grid, caputo);
    integral = best_integral;
    worst = std::max(worst, plus_sign * (best_score - phi0));
  }
  return {std::move(current), worst};
}

nlohmann::json ValueTree::to_json() const {
  nlohmann::json j;
  j["decision_times"] = decision_times;
  j["mode"] = mode == Commitment::kUpper ? "upper" : "lower";
  j["upper_value"] = upper_value;
  j["lower_value"] = lower_value;
  j["bracket"] = upper_value - lower_value;
  j["leaf_count"] = leaf_count;
  j["fine_cells"] = fine_grid ? fine_grid->num_cells() : 0;
  j["upper_witness"] = {{"u", upper_witness.u}, {"v", upper_witness.v}};
  j["lower_witness"] = {{"u", lower_witness.u}, {"v", lower_witness.v}};
  return j;
}

std::string trajectory_csv(const SampledPath& path) {
  const std::size_t n = path.dim();
  std::string out = "time";
  for (std::size_t k = 0; k < n; ++k) {
    out += ",x" + std::to_string(k);
  }
  for (std::size_t k = 0; k < n; ++k) {
    out += ",caputo" + std::to_string(k);
  }
  out += "\n";
  char buf[40];
  const std::size_t cells = path.grid().num_cells();
  for (std::size_t i = 0; i < path.grid().num_nodes(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", path.grid().node(i));
    out += buf;
    for (std::size_t k = 0; k < n; ++k) {
      std::snprintf(buf, sizeof(buf), ",%.17g", path.state(i)[k]);
      out += buf;
    }
    const std::size_t cell = std::min(i, cells - 1);
    for (std::size_t k = 0; k < n; ++k) {
      std::snprintf(buf, sizeof(buf), ",%.17g", path.caputo_cell(cell)[k]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace fracgame
