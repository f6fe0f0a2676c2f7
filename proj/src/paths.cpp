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

#include "fracgame/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracgame/errors.hpp"

namespace fracgame {

SampledPath::SampledPath(double alpha, std::vector<double> x0,
                         std::shared_ptr<const Grid> grid,
                         std::vector<double> caputo)
    : alpha_(alpha),
      x0_(std::move(x0)),
      grid_(std::move(grid)),
      caputo_(std::move(caputo)) {
  if (!(alpha_ > 0.0) || alpha_ > 1.0) {
    throw DomainError("SampledPath: order must lie in (0, 1]");
  }
  if (x0_.empty()) throw DomainError("SampledPath: empty initial state");
  if (!grid_) throw DomainError("SampledPath: null grid");
  if (caputo_.size() != grid_->num_cells() * x0_.size()) {
    throw DomainError(
        "SampledPath: derivative sample count must be cells x dim, got " +
        std::to_string(caputo_.size()));
  }
  compute_states();
}

void SampledPath::compute_states() {
  const std::size_t cells = grid_->num_cells();
  const std::size_t n = dim();
  states_.resize((cells + 1) * n);
  for (std::size_t i = 0; i <= cells; ++i) {
    std::copy(x0_.begin(), x0_.end(), states_.begin() + i * n);
  }
  const double inv_gamma = 1.0 / gamma_fn(alpha_ + 1.0);
  if (grid_->is_uniform()) {
    // Translation-invariant cell moments: one pow pair per lag instead of
    // one per (node, cell) pair.
    const double h = grid_->cell_width();
    std::vector<double> lag(cells + 1, 0.0);
    for (std::size_t m = 1; m <= cells; ++m) {
      lag[m] = pow_diff(static_cast<double>(m) * h,
                        static_cast<double>(m - 1) * h, alpha_) *
               inv_gamma;
    }
    for (std::size_t i = 1; i <= cells; ++i) {
      double* row = states_.data() + i * n;
      for (std::size_t j = 0; j < i; ++j) {
        const double w = lag[i - j];
        const double* f = caputo_.data() + j * n;
        for (std::size_t c = 0; c < n; ++c) row[c] += w * f[c];
      }
    }
  } else {
    for (std::size_t i = 1; i <= cells; ++i) {
      double* row = states_.data() + i * n;
      const double ti = grid_->node(i);
      for (std::size_t j = 0; j < i; ++j) {
        const double w =
            pow_diff(ti - grid_->node(j), ti - grid_->node(j + 1), alpha_) *
            inv_gamma;
        const double* f = caputo_.data() + j * n;
        for (std::size_t c = 0; c < n; ++c) row[c] += w * f[c];
      }
    }
  }
}

std::vector<double> SampledPath::eval(double tau) const {
  if (!(tau >= 0.0) || tau > grid_->T()) {
    throw DomainError("SampledPath::eval: time outside [0, T]");
  }
  const std::size_t n = dim();
  std::vector<double> out(x0_.begin(), x0_.end());
  if (tau == 0.0) return out;
  const std::size_t cell = grid_->cell_of(tau);
  const double inv_gamma = 1.0 / gamma_fn(alpha_ + 1.0);
  for (std::size_t j = 0; j < cell; ++j) {
    const double w =
        pow_diff(tau - grid_->node(j), tau - grid_->node(j + 1), alpha_) *
        inv_gamma;
    const double* f = caputo_.data() + j * n;
    for (std::size_t c = 0; c < n; ++c) out[c] += w * f[c];
  }
  // Partial current cell [tau_cell, tau]: same closed form with the moving
  // endpoint.
  const double w = std::pow(tau - grid_->node(cell), alpha_) * inv_gamma;
  const double* f = caputo_.data() + cell * n;
  for (std::size_t c = 0; c < n; ++c) out[c] += w * f[c];
  return out;
}

std::vector<double> SampledPath::caputo_at(double tau) const {
  const std::size_t cell = grid_->cell_of(tau);
  auto s = caputo_cell(cell);
  return std::vector<double>(s.begin(), s.end());
}

nlohmann::json SampledPath::to_json() const {
  nlohmann::json j;
  j["alpha"] = alpha_;
  j["x0"] = x0_;
  j["nodes"] = grid_->nodes();
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t c = 0; c < grid_->num_cells(); ++c) {
    auto f = caputo_cell(c);
    cells.push_back(std::vector<double>(f.begin(), f.end()));
  }
  j["caputo"] = cells;
  return j;
}

SampledPath SampledPath::from_json(const nlohmann::json& j) {
  for (const char* key : {"alpha", "x0", "nodes", "caputo"}) {
    if (!j.contains(key)) {
      throw DomainError(std::string("SampledPath::from_json: missing key '") +
                        key + "'");
    }
  }
  const double alpha = j.at("alpha").get<double>();
  auto x0 = j.at("x0").get<std::vector<double>>();
  auto nodes = j.at("nodes").get<std::vector<double>>();

  // Recover the uniform tag when the node set is bitwise the uniform one, so
  // that a deserialized path reproduces the exact arithmetic of the original.
  std::shared_ptr<const Grid> grid;
  if (nodes.size() >= 2) {
    Grid candidate = Grid::uniform(nodes.size() - 1, nodes.back());
    if (candidate.nodes() == nodes) {
      grid = std::make_shared<const Grid>(std::move(candidate));
    }
  }
  if (!grid) grid = std::make_shared<const Grid>(std::move(nodes));

  std::vector<double> caputo;
  for (const auto& cell : j.at("caputo")) {
    auto f = cell.get<std::vector<double>>();
    if (f.size() != x0.size()) {
      throw DomainError(
          "SampledPath::from_json: derivative block dimension mismatch");
    }
    caputo.insert(caputo.end(), f.begin(), f.end());
  }
  return SampledPath(alpha, std::move(x0), std::move(grid), std::move(caputo));
}

SampledPath extend(const SampledPath& p, double t,
                   const std::vector<double>& tail) {
  const std::size_t idx = p.grid().index_of(t);  // AlignmentError if off-node
  const std::size_t n = p.dim();
  const std::size_t cells = p.grid().num_cells();
  if (tail.size() != (cells - idx) * n) {
    throw DomainError("extend: tail must cover exactly the cells of [t, T]");
  }
  std::vector<double> caputo(p.caputo_samples());
  std::copy(tail.begin(), tail.end(), caputo.begin() + idx * n);
  return SampledPath(p.alpha(), std::vector<double>(p.x0().begin(), p.x0().end()),
                     p.grid_ptr(), std::move(caputo));
}

SampledPath freeze(const SampledPath& p, double t) {
  const std::size_t idx = p.grid().index_of(t);
  const std::size_t n = p.dim();
  const std::size_t cells = p.grid().num_cells();
  bool tail_zero = true;
  for (std::size_t i = idx * n; i < cells * n && tail_zero; ++i) {
    tail_zero = p.caputo_samples()[i] == 0.0;
  }
  if (tail_zero) return p;  // already frozen; bit-identical reuse
  return extend(p, t, std::vector<double>((cells - idx) * n, 0.0));
}

double sup_norm(const SampledPath& p) {
  double best = 0.0;
  for (std::size_t i = 0; i < p.grid().num_nodes(); ++i) {
    best = std::max(best, vec_norm(p.state(i)));
  }
  return best;
}

double sup_distance(const SampledPath& a, const SampledPath& b) {
  if (a.dim() != b.dim()) {
    throw DomainError("sup_distance: dimension mismatch");
  }
  if (a.grid() == b.grid()) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.grid().num_nodes(); ++i) {
      best = std::max(best, vec_dist(a.state(i), b.state(i)));
    }
    return best;
  }
  // Different grids: compare on the union of the node sets via exact eval.
  std::vector<double> ts;
  ts.reserve(a.grid().num_nodes() + b.grid().num_nodes());
  ts.insert(ts.end(), a.grid().nodes().begin(), a.grid().nodes().end());
  ts.insert(ts.end(), b.grid().nodes().begin(), b.grid().nodes().end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  const double t_max = std::min(a.grid().T(), b.grid().T());
  double best = 0.0;
  for (double t : ts) {
    if (t > t_max) break;
    auto va = a.eval(t);
    auto vb = b.eval(t);
    best = std::max(best, vec_dist({va.data(), va.size()}, {vb.data(), vb.size()}));
  }
  return best;
}

XkMembership xk_check(const SampledPath& p, int k, double c_star) {
  if (k < 1) throw DomainError("xk_check: k must be a positive integer");
  if (!(c_star > 0.0)) throw DomainError("xk_check: c_star must be positive");
  XkMembership m;
  m.k = k;
  m.c_star = c_star;
  const double kd = static_cast<double>(k);
  bool ok = vec_norm(p.x0()) <= kd;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.grid().num_cells(); ++j) {
    const double margin =
        vec_norm(p.caputo_cell(j)) - kd * c_star * (1.0 + vec_norm(p.state(j)));
    worst = std::max(worst, margin);
  }
  m.worst_margin = worst;
  m.verdict = ok && worst <= 0.0;
  return m;
}

SampledPath random_xk_path(double alpha, std::shared_ptr<const Grid> grid,
                           std::size_t dim, int k, double c_star, TrialRng& rng,
                           double fill) {
  if (!grid) throw DomainError("random_xk_path: null grid");
  if (k < 1) throw DomainError("random_xk_path: k must be a positive integer");
  if (!(fill > 0.0) || fill > 1.0) {
    throw DomainError("random_xk_path: fill must lie in (0, 1]");
  }
  const double kd = static_cast<double>(k);
  std::vector<double> x0 = rng.unit_vector(dim);
  const double r0 = kd * fill * rng.uniform();
  for (double& c : x0) c *= r0;

  // The derivative bound at cell j involves the state at the cell's left
  // node, which depends on earlier cells only, so the path can be built
  // sequentially with a growing convolution.
  const std::size_t cells = grid->num_cells();
  const double inv_gamma = 1.0 / gamma_fn(alpha + 1.0);
  std::vector<double> caputo(cells * dim, 0.0);
  std::vector<double> state(x0);
  for (std::size_t j = 0; j < cells; ++j) {
    const double cap = kd * c_star * (1.0 + vec_norm({state.data(), dim}));
    std::vector<double> dir = rng.unit_vector(dim);
    const double mag = fill * cap * rng.uniform();
    for (std::size_t c = 0; c < dim; ++c) caputo[j * dim + c] = mag * dir[c];

    // State at the next left node for the following cell.
    if (j + 1 < cells) {
      const double tn = grid->node(j + 1);
      state.assign(x0.begin(), x0.end());
      for (std::size_t l = 0; l <= j; ++l) {
        const double w =
            pow_diff(tn - grid->node(l), tn - grid->node(l + 1), alpha) *
            inv_gamma;
        for (std::size_t c = 0; c < dim; ++c) {
          state[c] += w * caputo[l * dim + c];
        }
      }
    }
  }
  return SampledPath(alpha, std::move(x0), std::move(grid), std::move(caputo));
}

}  // namespace fracgame
