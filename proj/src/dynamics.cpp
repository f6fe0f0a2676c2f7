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

#include "fracgame/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <json.hpp>

#include "fracgame/errors.hpp"
#include "fracgame/util.hpp"

namespace fracgame {
namespace {

double abs_max(const std::vector<double>& g) {
  double m = 0.0;
  for (double u : g) m = std::max(m, std::abs(u));
  return m;
}

void require_grid(const std::vector<double>& g, const char* who) {
  if (g.empty()) {
    throw DomainError(std::string(who) + ": control grid must be nonempty");
  }
  for (double u : g) {
    if (!std::isfinite(u)) {
      throw DomainError(std::string(who) + ": control grid must be finite");
    }
  }
}

// Every catalog entry is bilinear in (u, v):
//   <s, f(t,x,u,v)> + chi(t,x,u,v) = base(x, s) + u_coef(s) u + v_coef(s) v.
// The Hamiltonian builds its payoff matrix from these three numbers so each
// entry is rounded as (row value) + (column value) in a single operation;
// rounding to nearest is monotone, hence min-max and max-min pick the same
// double and the Isaacs gap of a separable entry is exactly zero in floating
// point, not merely up to roundoff.
struct BilinearParts {
  double base = 0.0;
  double u_coef = 0.0;
  double v_coef = 0.0;
};

// Random point in the closed ball of the given radius.
std::vector<double> ball_point(TrialRng& rng, std::size_t n, double radius) {
  std::vector<double> x = rng.unit_vector(n);
  const double r = radius * std::pow(rng.uniform(), 1.0 / double(n));
  for (double& c : x) c *= r;
  return x;
}

}  // namespace

GameDynamics GameDynamics::linear_scalar(double a, double b, double c, double d,
                                         double e_u, double e_v,
                                         SigmaKind sigma,
                                         std::vector<double> p_grid,
                                         std::vector<double> q_grid) {
  require_grid(p_grid, "linear_scalar");
  require_grid(q_grid, "linear_scalar");
  GameDynamics dyn;
  dyn.catalog_id_ = "linear_scalar";
  dyn.dim_ = 1;
  dyn.a_[0] = a;
  dyn.b_[0] = b;
  dyn.c_[0] = c;
  dyn.d_ = d;
  dyn.e_u_ = e_u;
  dyn.e_v_ = e_v;
  dyn.sigma_kind_ = sigma;
  const double control_part =
      std::abs(b) * abs_max(p_grid) + std::abs(c) * abs_max(q_grid);
  dyn.c_star_ = std::max(std::abs(a), control_part);
  if (dyn.c_star_ == 0.0) dyn.c_star_ = 1.0;  // any positive bound works
  // The Lipschitz condition bounds the f and chi increments jointly, so the
  // state coefficients of both enter the declared constant.
  dyn.lambda_star_ = std::abs(a) + std::abs(d);
  dyn.p_grid_ = std::move(p_grid);
  dyn.q_grid_ = std::move(q_grid);
  return dyn;
}

GameDynamics GameDynamics::pursuit_1d(std::vector<double> p_grid,
                                      std::vector<double> q_grid) {
  require_grid(p_grid, "pursuit_1d");
  require_grid(q_grid, "pursuit_1d");
  GameDynamics dyn;
  dyn.catalog_id_ = "pursuit_1d";
  dyn.dim_ = 1;
  dyn.b_[0] = 1.0;
  dyn.c_[0] = -1.0;
  dyn.sigma_kind_ = SigmaKind::kNorm;
  double worst = 0.0;
  for (double u : p_grid) {
    for (double v : q_grid) worst = std::max(worst, std::abs(u - v));
  }
  dyn.c_star_ = worst > 0.0 ? worst : 1.0;
  dyn.lambda_star_ = 0.0;  // f and chi do not read the state
  dyn.p_grid_ = std::move(p_grid);
  dyn.q_grid_ = std::move(q_grid);
  return dyn;
}

GameDynamics GameDynamics::decoupled_2d(std::array<double, 2> a,
                                        std::array<double, 2> b,
                                        std::array<double, 2> c,
                                        SigmaKind sigma,
                                        std::vector<double> p_grid,
                                        std::vector<double> q_grid) {
  require_grid(p_grid, "decoupled_2d");
  require_grid(q_grid, "decoupled_2d");
  GameDynamics dyn;
  dyn.catalog_id_ = "decoupled_2d";
  dyn.dim_ = 2;
  dyn.a_ = a;
  dyn.b_ = b;
  dyn.c_ = c;
  dyn.sigma_kind_ = sigma;
  const double a_max = std::max(std::abs(a[0]), std::abs(a[1]));
  const double b_norm = std::hypot(b[0], b[1]);
  const double c_norm = std::hypot(c[0], c[1]);
  const double control_part =
      b_norm * abs_max(p_grid) + c_norm * abs_max(q_grid);
  dyn.c_star_ = std::max(a_max, control_part);
  if (dyn.c_star_ == 0.0) dyn.c_star_ = 1.0;
  dyn.lambda_star_ = a_max;
  dyn.p_grid_ = std::move(p_grid);
  dyn.q_grid_ = std::move(q_grid);
  return dyn;
}

void GameDynamics::f(double t, std::span<const double> x, double u, double v,
                     std::span<double> out) const {
  (void)t;  // the catalog families are autonomous
  if (x.size() != dim_ || out.size() != dim_) {
    throw DomainError("GameDynamics::f: state dimension mismatch");
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    out[i] = a_[i] * x[i] + b_[i] * u + c_[i] * v;
  }
}

double GameDynamics::chi(double t, std::span<const double> x, double u,
                         double v) const {
  (void)t;
  if (x.size() != dim_) {
    throw DomainError("GameDynamics::chi: state dimension mismatch");
  }
  return d_ * x[0] + e_u_ * u + e_v_ * v;
}

double GameDynamics::sigma_terminal(std::span<const double> xT) const {
  if (xT.size() != dim_) {
    throw DomainError("GameDynamics::sigma_terminal: dimension mismatch");
  }
  switch (sigma_kind_) {
    case SigmaKind::kCoordinate:
      return xT[0];
    case SigmaKind::kNorm:
      return vec_norm(xT);
  }
  throw DomainError("GameDynamics::sigma_terminal: unknown sigma kind");
}

double GameDynamics::sigma(const SampledPath& path) const {
  const std::size_t last = path.grid().num_nodes() - 1;
  return sigma_terminal(path.state(last));
}

HamiltonianEval hamiltonian(const GameDynamics& dyn, double t,
                            std::span<const double> x,
                            std::span<const double> s) {
  if (x.size() != dyn.dim() || s.size() != dyn.dim()) {
    throw DomainError("hamiltonian: state/adjoint dimension mismatch");
  }
  // See BilinearParts: decompose <s,f> + chi = base + u_coef u + v_coef v.
  // The decomposition reuses f/chi through basis evaluations so the catalog
  // families stay the single source of truth for the game data.
  const std::size_t n = dyn.dim();
  std::vector<double> f0(n), fu(n), fv(n);
  std::vector<double> zero(n, 0.0);
  dyn.f(t, x, 0.0, 0.0, f0);
  dyn.f(t, zero, 1.0, 0.0, fu);
  dyn.f(t, zero, 0.0, 1.0, fv);
  BilinearParts parts;
  parts.base = vec_dot(s, f0) + dyn.chi(t, x, 0.0, 0.0);
  parts.u_coef = vec_dot(s, fu) + dyn.chi(t, zero, 1.0, 0.0);
  parts.v_coef = vec_dot(s, fv) + dyn.chi(t, zero, 0.0, 1.0);

  const std::vector<double>& P = dyn.p_grid();
  const std::vector<double>& Q = dyn.q_grid();
  std::vector<double> row(P.size());   // base + u_coef * u_i
  std::vector<double> col(Q.size());   // v_coef * v_j
  for (std::size_t i = 0; i < P.size(); ++i) {
    row[i] = parts.base + parts.u_coef * P[i];
  }
  for (std::size_t j = 0; j < Q.size(); ++j) {
    col[j] = parts.v_coef * Q[j];
  }
  // Entry (i, j) of the payoff matrix is row[i] + col[j], rounded once.

  // min over rows of the row maxima (the upper value of the matrix game).
  HamiltonianEval eval;
  double minmax = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    double best = row[i] + col[0];
    std::size_t best_j = 0;
    for (std::size_t j = 1; j < Q.size(); ++j) {
      const double g = row[i] + col[j];
      if (g > best) {
        best = g;
        best_j = j;
      }
    }
    if (i == 0 || best < minmax) {
      minmax = best;
      eval.argmin_index = i;
      eval.argmax_index = best_j;
    }
  }
  // max over columns of the column minima (the lower value).
  double maxmin = 0.0;
  for (std::size_t j = 0; j < Q.size(); ++j) {
    double worst = row[0] + col[j];
    for (std::size_t i = 1; i < P.size(); ++i) {
      worst = std::min(worst, row[i] + col[j]);
    }
    if (j == 0 || worst > maxmin) maxmin = worst;
  }
  eval.value = minmax;
  eval.argmin_u = P[eval.argmin_index];
  eval.argmax_v = Q[eval.argmax_index];
  eval.isaacs_gap = minmax - maxmin;
  return eval;
}

namespace {

std::string sample_digest(const GameDynamics& dyn, const SampleSpec& spec,
                          std::string_view check) {
  nlohmann::json j;
  j["catalog"] = dyn.catalog_id();
  j["p"] = dyn.p_grid();
  j["q"] = dyn.q_grid();
  j["c_star"] = dyn.c_star();
  j["lambda_star"] = dyn.lambda_star();
  j["check"] = std::string(check);
  j["count"] = spec.count;
  j["t_max"] = spec.t_max;
  j["x_radius"] = spec.x_radius;
  j["s_radius"] = spec.s_radius;
  j["path_cells"] = spec.path_cells;
  j["alpha"] = spec.alpha;
  j["seed"] = spec.seed;
  return hex64(fnv1a64(j.dump()));
}

constexpr double kSampleTol = 1e-12;

}  // namespace

std::vector<CheckReport> validate_assumptions(const GameDynamics& dyn,
                                              const SampleSpec& spec) {
  if (spec.count == 0) {
    throw DomainError("validate_assumptions: sample count must be positive");
  }
  const std::size_t n = dyn.dim();
  std::vector<CheckReport> reports;

  // Growth: max over draws and the full control grids of ||f|| / (1 + ||x||).
  {
    TrialRng rng(spec.seed, "assumption_growth", 0);
    double worst = 0.0;
    std::vector<double> fx(n);
    for (std::size_t k = 0; k < spec.count; ++k) {
      const double t = rng.uniform(0.0, spec.t_max);
      const std::vector<double> x = ball_point(rng, n, spec.x_radius);
      for (double u : dyn.p_grid()) {
        for (double v : dyn.q_grid()) {
          dyn.f(t, x, u, v, fx);
          worst = std::max(worst, vec_norm(fx) / (1.0 + vec_norm(x)));
        }
      }
    }
    reports.push_back(CheckReport::inequality(
        "growth_c_star", sample_digest(dyn, spec, "growth"), worst,
        dyn.c_star(), kSampleTol,
        "max ||f||/(1+||x||) over samples vs declared growth constant"));
  }

  // Lipschitz: the f and chi increments are bounded jointly, so the ratio
  // adds both before dividing by ||x - y||.
  {
    TrialRng rng(spec.seed, "assumption_lipschitz", 0);
    double worst = 0.0;
    std::vector<double> fx(n), fy(n);
    for (std::size_t k = 0; k < spec.count; ++k) {
      const double t = rng.uniform(0.0, spec.t_max);
      const std::vector<double> x = ball_point(rng, n, spec.x_radius);
      const std::vector<double> y = ball_point(rng, n, spec.x_radius);
      const double dist = vec_dist(x, y);
      if (dist < 1e-12) continue;
      for (double u : dyn.p_grid()) {
        for (double v : dyn.q_grid()) {
          dyn.f(t, x, u, v, fx);
          dyn.f(t, y, u, v, fy);
          const double df = vec_dist(fx, fy);
          const double dchi =
              std::abs(dyn.chi(t, x, u, v) - dyn.chi(t, y, u, v));
          worst = std::max(worst, (df + dchi) / dist);
        }
      }
    }
    reports.push_back(CheckReport::inequality(
        "lipschitz_lambda_star", sample_digest(dyn, spec, "lipschitz"), worst,
        dyn.lambda_star(), kSampleTol,
        "sampled lower bound of the joint f/chi Lipschitz constant"));
  }

  // Isaacs: the min-max / max-min gap of the payoff matrix, which is exactly
  // zero for the separable catalog and nonnegative for any matrix.
  {
    TrialRng rng(spec.seed, "assumption_isaacs", 0);
    double worst = 0.0;
    for (std::size_t k = 0; k < spec.count; ++k) {
      const double t = rng.uniform(0.0, spec.t_max);
      const std::vector<double> x = ball_point(rng, n, spec.x_radius);
      const std::vector<double> s = ball_point(rng, n, spec.s_radius);
      const HamiltonianEval h = hamiltonian(dyn, t, x, s);
      if (h.isaacs_gap < 0.0) {
        throw AccuracyError("validate_assumptions: negative Isaacs gap");
      }
      worst = std::max(worst, h.isaacs_gap);
    }
    reports.push_back(CheckReport::inequality(
        "isaacs_equality", sample_digest(dyn, spec, "isaacs"), worst, 0.0,
        kSampleTol, "max minmax-maxmin gap over sampled (t, x, s)"));
  }

  // Terminal-cost Lipschitz bound: |sigma(x) - sigma(y)| against the terminal
  // distance plus the time integral of the state distance (trapezoid over the
  // shared grid), for random admissible path pairs.
  {
    if (spec.path_cells < 2) {
      throw DomainError("validate_assumptions: path_cells must be >= 2");
    }
    TrialRng rng(spec.seed, "assumption_sigma", 0);
    const auto grid = std::make_shared<const Grid>(
        Grid::uniform(spec.path_cells, spec.t_max));
    const int k_ball = std::max(1, int(std::ceil(spec.x_radius)));
    double worst = 0.0;
    for (std::size_t k = 0; k < spec.count; ++k) {
      const SampledPath px =
          random_xk_path(spec.alpha, grid, n, k_ball, dyn.c_star(), rng);
      const SampledPath py =
          random_xk_path(spec.alpha, grid, n, k_ball, dyn.c_star(), rng);
      const std::size_t last = grid->num_nodes() - 1;
      double integral = 0.0;
      for (std::size_t i = 0; i + 1 < grid->num_nodes(); ++i) {
        const double h = grid->node(i + 1) - grid->node(i);
        integral += 0.5 * h *
                    (vec_dist(px.state(i), py.state(i)) +
                     vec_dist(px.state(i + 1), py.state(i + 1)));
      }
      const double denom = vec_dist(px.state(last), py.state(last)) + integral;
      if (denom < 1e-12) continue;
      const double num = std::abs(dyn.sigma(px) - dyn.sigma(py));
      worst = std::max(worst, num / denom);
    }
    reports.push_back(CheckReport::inequality(
        "sigma_lipschitz_lambda", sample_digest(dyn, spec, "sigma"), worst,
        dyn.sigma_lambda(), kSampleTol,
        "sampled lower bound of the terminal-cost Lipschitz constant"));
  }

  return reports;
}

std::vector<CheckReport> hamiltonian_properties(const GameDynamics& dyn,
                                                const SampleSpec& spec) {
  if (spec.count == 0) {
    throw DomainError("hamiltonian_properties: sample count must be positive");
  }
  const std::size_t n = dyn.dim();
  std::vector<CheckReport> reports;

  // |H(t,x,s) - H(t,x,r)| <= c_star (1 + ||x||) ||s - r||.
  {
    TrialRng rng(spec.seed, "hamiltonian_s", 0);
    double worst = 0.0;
    for (std::size_t k = 0; k < spec.count; ++k) {
      const double t = rng.uniform(0.0, spec.t_max);
      const std::vector<double> x = ball_point(rng, n, spec.x_radius);
      const std::vector<double> s = ball_point(rng, n, spec.s_radius);
      const std::vector<double> r = ball_point(rng, n, spec.s_radius);
      const double dist = vec_dist(s, r);
      if (dist < 1e-12) continue;
      const double dh = std::abs(hamiltonian(dyn, t, x, s).value -
                                 hamiltonian(dyn, t, x, r).value);
      worst = std::max(worst, dh / ((1.0 + vec_norm(x)) * dist));
    }
    reports.push_back(CheckReport::inequality(
        "hamiltonian_s_lipschitz", sample_digest(dyn, spec, "ham_s"), worst,
        dyn.c_star(), kSampleTol,
        "max |dH| / ((1+||x||)||s-r||) over samples"));
  }

  // |H(t,x,s) - H(t,y,s)| <= lambda_star (1 + ||s||) ||x - y||.
  {
    TrialRng rng(spec.seed, "hamiltonian_x", 0);
    double worst = 0.0;
    for (std::size_t k = 0; k < spec.count; ++k) {
      const double t = rng.uniform(0.0, spec.t_max);
      const std::vector<double> x = ball_point(rng, n, spec.x_radius);
      const std::vector<double> y = ball_point(rng, n, spec.x_radius);
      const std::vector<double> s = ball_point(rng, n, spec.s_radius);
      const double dist = vec_dist(x, y);
      if (dist < 1e-12) continue;
      const double dh = std::abs(hamiltonian(dyn, t, x, s).value -
                                 hamiltonian(dyn, t, y, s).value);
      worst = std::max(worst, dh / ((1.0 + vec_norm(s)) * dist));
    }
    reports.push_back(CheckReport::inequality(
        "hamiltonian_x_lipschitz", sample_digest(dyn, spec, "ham_x"), worst,
        dyn.lambda_star(), kSampleTol,
        "max |dH| / ((1+||s||)||x-y||) over samples"));
  }

  return reports;
}

}  // namespace fracgame
