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

#include "fracgame/testfunc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fracgame/errors.hpp"
#include "fracgame/fraccalc.hpp"
#include "fracgame/util.hpp"

namespace fracgame {

namespace {

void require_theta(const NuParams& params, double theta) {
  if (!(theta > 0.0) || !(theta < params.T)) {
    throw DomainError("testfunc: theta must lie in (0, T)");
  }
}

void require_pair(const NuParams& params, const SampledPath& x,
                  const SampledPath& y) {
  if (x.dim() != y.dim()) {
    throw DomainError("testfunc: paths must share a dimension");
  }
  if (!(x.grid() == y.grid())) {
    throw AlignmentError("testfunc: paths must share one grid");
  }
  if (x.alpha() != params.alpha || y.alpha() != params.alpha) {
    throw DomainError("testfunc: path order does not match the parameters");
  }
  if (std::abs(x.grid().T() - params.T) > 1e-12 * std::max(1.0, params.T)) {
    throw DomainError("testfunc: grid horizon does not match the parameters");
  }
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::string digest_of(const nlohmann::json& inputs) {
  return hex64(fnv1a64(inputs.dump()));
}

std::string path_digest(const SampledPath& p) {
  return hex64(fnv1a64(p.to_json().dump()));
}

}  // namespace

NuParams NuParams::make(double eps, double alpha, double beta, double T) {
  if (!(eps > 0.0)) throw DomainError("NuParams: eps must be positive");
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw DomainError("NuParams: alpha must lie in (0, 1)");
  }
  if (!(T > 0.0)) throw DomainError("NuParams: horizon must be positive");
  const double cap = std::min(1.0 - alpha, 0.5 * alpha);
  if (!(beta > 0.0) || !(beta < cap)) {
    throw DomainError("NuParams: beta must lie in (0, min(1 - alpha, alpha/2))");
  }
  NuParams p;
  p.eps = eps;
  p.alpha = alpha;
  p.beta = beta;
  p.T = T;
  p.q = 2.0 / (2.0 - alpha);
  const double pe = p.weight_exponent();
  // Consequences of the window above; re-checked so a violation cannot pass
  // silently through floating point.
  if (!(p.q > 1.0) || !(p.q < 2.0) || !(pe > 0.0) || !(pe < 1.0) ||
      !(beta * p.q / (p.q - 1.0) < 1.0)) {
    throw DomainError("NuParams: derived exponents left their ranges");
  }
  p.c1 = 1.0 + std::pow(T, 1.0 - pe) / (1.0 - pe);
  return p;
}

double NuParams::default_beta(double alpha) {
  return 0.5 * std::min(1.0 - alpha, 0.5 * alpha);
}

NuParams NuParams::with_eps(double new_eps) const {
  return make(new_eps, alpha, beta, T);
}

double NuParams::eps_smooth() const { return std::pow(eps, 2.0 / (q - 1.0)); }

double NuParams::eps_floor() const { return std::pow(eps, q / (q - 1.0)); }

double nu(const NuParams& params, double t, const SampledPath& x, double tau,
          const SampledPath& y) {
  require_pair(params, x, y);
  const Grid& g = x.grid();
  g.index_of(t);
  g.index_of(tau);
  const SampledPath ax = freeze(x, t);
  const SampledPath ay = freeze(y, tau);
  const double smooth = params.eps_smooth();
  const double half_q = 0.5 * params.q;
  const std::size_t n = g.num_nodes();
  // excess(xi) >= 0 cell by cell, and exactly zero where the continuations
  // coincide; the C1 normalization has already cancelled against the
  // constant part of the weighted integral.
  std::vector<double> excess(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = sq_dist(ax.state(i), ay.state(i));
    excess[i] = pow_diff(smooth + d2, smooth, half_q);
  }
  return excess[n - 1] +
         singular_integral(g, excess, params.weight_exponent());
}

CheckReport freeze_invariance_check(const NuParams& params, double t,
                                    const SampledPath& x, double tau,
                                    const SampledPath& y, double t_prime,
                                    double tau_prime) {
  if (t_prime < t || tau_prime < tau) {
    throw DomainError(
        "freeze_invariance_check: base times may only move forward");
  }
  const double base = nu(params, t, x, tau, y);
  const SampledPath ax = freeze(x, t);
  const SampledPath ay = freeze(y, tau);
  const double shifted = nu(params, t_prime, ax, tau_prime, ay);
  const nlohmann::json inputs = {params.eps,  params.alpha,   params.beta,
                                 t,           tau,            t_prime,
                                 tau_prime,   path_digest(x), path_digest(y)};
  return CheckReport::identity("freeze_invariance", digest_of(inputs), shifted,
                               base, 1e-10);
}

double c2(const NuParams& params) {
  const double conj = (params.q - 1.0) / params.q;
  return 1.0 + std::pow(params.T, conj - params.beta) /
                   std::pow(1.0 - params.beta * params.q / (params.q - 1.0),
                            conj);
}

double c3(const NuParams& params, double theta) {
  require_theta(params, theta);
  const double pe = params.weight_exponent();
  const double b = beta_fn(1.0 - (1.0 - params.alpha) * params.q, 1.0 - pe);
  return params.q / (gamma_fn(params.alpha) *
                     std::pow(theta, 1.0 - params.alpha)) *
         (1.0 + std::pow(params.T,
                         1.0 / params.q - 1.0 + params.alpha + params.beta) *
                    std::pow(b, 1.0 / params.q));
}

double a1(const NuParams& params, double theta) {
  require_theta(params, theta);
  const double pe = params.weight_exponent();
  // Slope of the closed-form kernel integral
  // B(alpha, 1 - pe) (T - t)^{alpha - pe}; its magnitude peaks at the
  // admissible endpoint t = T - theta for every sign of the exponent.
  const double expo = params.alpha - pe;
  return std::abs(expo) * beta_fn(params.alpha, 1.0 - pe) *
         std::pow(theta, expo - 1.0);
}

double c4(const NuParams& params, double theta) {
  require_theta(params, theta);
  const double pe = params.weight_exponent();
  return params.q / gamma_fn(params.alpha) *
         ((1.0 - params.alpha) * std::pow(params.T, 1.0 - params.alpha) /
              std::pow(theta, 2.0 - params.alpha) +
          a1(params, theta) * std::pow(params.T, 1.0 - params.alpha) +
          2.0 / (params.alpha * std::pow(theta, pe)));
}

namespace {

// Quadrature abscissas on [a, b], graded toward the singular end and refined
// with the path nodes and cell midpoints inside the interval, so the
// piecewise-linear interpolation of the sampled factor never crosses a kink
// of the state evaluation.
std::vector<double> refined_mesh(double a, double b, bool toward_a,
                                 const Grid& g) {
  constexpr std::size_t kHalfCells = 512;
  std::vector<double> xs = graded_points(a, b, kHalfCells, 2.0, toward_a);
  const double margin = (b - a) * 1e-9;
  auto push_inside = [&](double v) {
    if (v > a + margin && v < b - margin) xs.push_back(v);
  };
  for (std::size_t i = 0; i < g.num_nodes(); ++i) push_inside(g.node(i));
  for (std::size_t j = 0; j < g.num_cells(); ++j) {
    push_inside(0.5 * (g.node(j) + g.node(j + 1)));
  }
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  out.reserve(xs.size());
  const double tol = (b - a) * 1e-12;
  for (double v : xs) {
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  }
  return out;
}

}  // namespace

CiDerivativePair mu_gradient(const NuParams& params, double tau_star,
                             const SampledPath& y_star, double t,
                             const SampledPath& x) {
  require_pair(params, x, y_star);
  const Grid& g = x.grid();
  g.index_of(tau_star);
  g.index_of(t);
  if (!(t < params.T)) {
    throw DomainError("mu_gradient: defined only before the horizon");
  }

  const SampledPath ax = freeze(x, t);
  const SampledPath astar = freeze(y_star, tau_star);
  const std::size_t n = x.dim();
  const double smooth = params.eps_smooth();
  const double wexp = 0.5 * params.q - 1.0;
  const double pe = params.weight_exponent();
  const double om_alpha = 1.0 - params.alpha;

  CiDerivativePair out;
  out.grad_alpha.assign(n, 0.0);

  {
    const std::size_t last = g.num_nodes() - 1;
    std::span<const double> xa = ax.state(last);
    std::span<const double> sa = astar.state(last);
    const double w = std::pow(smooth + sq_dist(xa, sa), wexp) /
                     std::pow(params.T - t, om_alpha);
    for (std::size_t i = 0; i < n; ++i) out.grad_alpha[i] = (xa[i] - sa[i]) * w;
  }

  // The interior integrand is singular at both ends; split at the midpoint
  // and product-integrate against the nearer kernel with the remaining
  // factor sampled.
  const double mid = 0.5 * (t + params.T);
  std::vector<double> gs;
  const auto accumulate = [&](const std::vector<double>& xs, bool left_piece) {
    const std::size_t m = xs.size();
    std::vector<double> weighted(m * n);
    for (std::size_t k = 0; k < m; ++k) {
      const std::vector<double> va = ax.eval(xs[k]);
      const std::vector<double> vs = astar.eval(xs[k]);
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = va[i] - vs[i];
        d2 += d * d;
      }
      double w = std::pow(smooth + d2, wexp);
      w *= left_piece ? std::pow(params.T - xs[k], -pe)
                      : std::pow(xs[k] - t, -om_alpha);
      for (std::size_t i = 0; i < n; ++i) {
        weighted[k * n + i] = (va[i] - vs[i]) * w;
      }
    }
    gs.resize(m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < m; ++k) gs[k] = weighted[k * n + i];
      out.grad_alpha[i] += left_piece
                               ? left_singular_pl_integral(xs, gs, om_alpha)
                               : right_singular_pl_integral(xs, gs, pe);
    }
  };
  accumulate(refined_mesh(t, mid, true, g), true);
  accumulate(refined_mesh(mid, params.T, false, g), false);

  const double scale = params.q / gamma_fn(params.alpha);
  for (double& c : out.grad_alpha) c *= scale;
  return out;
}

CiDerivativeEstimate ci_derivative_fd(const PathFunctional& phi, double t,
                                      const SampledPath& x, double probe_scale,
                                      double delta) {
  const Grid& g = x.grid();
  const std::size_t it = g.index_of(t);
  if (!(delta > 0.0)) {
    throw DomainError("ci_derivative_fd: delta must be positive");
  }
  const std::size_t id = g.index_of(t + delta);
  if (id < it + 2) {
    throw DomainError("ci_derivative_fd: delta must span at least two cells");
  }
  if (!(probe_scale > 0.0)) {
    throw ConditioningError("ci_derivative_fd: the probe design is singular");
  }

  const std::size_t n = x.dim();
  const std::size_t tail_cells = g.num_cells() - it;
  const double phi0 = phi(t, x);

  // Probe 0 is the frozen extension; probes 2i+1 / 2i+2 add +/- probe_scale
  // along axis i on [t, t + delta] and freeze afterwards.  The design is
  // orthogonal: the symmetric pairs identify the gradient and the grand mean
  // identifies the time-derivative.
  const std::size_t probes = 2 * n + 1;
  std::vector<std::vector<double>> dir(probes, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    dir[2 * i + 1][i] = probe_scale;
    dir[2 * i + 2][i] = -probe_scale;
  }
  std::vector<double> response(probes, 0.0);
  for (std::size_t k = 0; k < probes; ++k) {
    std::vector<double> tail(tail_cells * n, 0.0);
    for (std::size_t j = it; j < id; ++j) {
      for (std::size_t i = 0; i < n; ++i) tail[(j - it) * n + i] = dir[k][i];
    }
    const SampledPath yk = extend(x, t, tail);
    response[k] = phi(t + delta, yk) - phi0;
  }

  CiDerivativeEstimate est;
  double sum = 0.0;
  for (double r : response) sum += r;
  est.dt_alpha = sum / (static_cast<double>(probes) * delta);
  est.grad_alpha.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    est.grad_alpha[i] = (response[2 * i + 1] - response[2 * i + 2]) /
                        (2.0 * probe_scale * delta);
  }
  for (std::size_t k = 0; k < probes; ++k) {
    double lin = est.dt_alpha * delta;
    for (std::size_t i = 0; i < n; ++i) {
      lin += est.grad_alpha[i] * dir[k][i] * delta;
    }
    est.max_residual = std::max(est.max_residual,
                                std::abs(response[k] - lin));
  }
  return est;
}

std::vector<CheckReport> lemma_trial(const NuParams& params,
                                     const std::vector<SampledPath>& paths,
                                     double theta, std::size_t trial,
                                     std::uint64_t seed) {
  if (paths.empty()) throw DomainError("lemma_harness: need at least one path");
  require_theta(params, theta);
  const Grid& g = paths.front().grid();
  const std::size_t n = paths.front().dim();
  for (const SampledPath& p : paths) {
    if (!(p.grid() == g)) {
      throw AlignmentError("lemma_harness: paths must share one grid");
    }
    if (p.dim() != n) {
      throw DomainError("lemma_harness: paths must share a dimension");
    }
  }

  // Nodes at which the gradient bounds apply: at most T - theta.
  std::vector<std::size_t> early;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    if (g.node(i) <= params.T - theta + 1e-12) early.push_back(i);
  }

  const double env_c2 = c2(params);
  const double env_c3 = c3(params, theta);
  const double env_c4 = c4(params, theta);
  const double floor_term = params.c1 * params.eps_floor();
  const double inv_q = 1.0 / params.q;
  const double conj = (params.q - 1.0) / params.q;

  std::vector<CheckReport> reports;
  {
    TrialRng rng(seed, "lemma_harness", trial);
    const std::size_t ix = rng.uniform_index(paths.size());
    const std::size_t iy = rng.uniform_index(paths.size());
    const SampledPath& x = paths[ix];
    const SampledPath& y = paths[iy];
    const double t = g.node(rng.uniform_index(g.num_nodes()));
    const double tau = g.node(rng.uniform_index(g.num_nodes()));
    const double te = g.node(early[rng.uniform_index(early.size())]);
    const double taue = g.node(early[rng.uniform_index(early.size())]);

    const nlohmann::json inputs = {trial,       ix,  iy,  t,
                                   tau,         te,  taue, params.eps,
                                   params.alpha, params.beta, theta};
    const std::string digest = digest_of(inputs);

    const double nu_txy = nu(params, t, x, tau, y);
    reports.push_back(
        CheckReport::inequality("nu_nonnegative", digest, 0.0, nu_txy, 1e-12));
    reports.push_back(CheckReport::identity(
        "nu_symmetry", digest, nu(params, tau, y, t, x), nu_txy, 1e-12));

    {
      const SampledPath ax = freeze(x, t);
      const SampledPath ay = freeze(y, tau);
      std::vector<double> dist(g.num_nodes());
      for (std::size_t i = 0; i < dist.size(); ++i) {
        dist[i] = std::sqrt(sq_dist(ax.state(i), ay.state(i)));
      }
      const double lhs =
          dist.back() + singular_integral(g, dist, 1.0 - params.alpha);
      const double rhs = env_c2 * std::pow(nu_txy + floor_term, inv_q);
      reports.push_back(CheckReport::inequality("lipschitz_envelope", digest,
                                                lhs, rhs, 1e-9));
    }

    {
      const double nu_e = nu(params, te, x, taue, y);
      const CiDerivativePair g1 = mu_gradient(params, taue, y, te, x);
      const double lhs1 =
          vec_norm({g1.grad_alpha.data(), g1.grad_alpha.size()});
      const double rhs1 = env_c3 * std::pow(nu_e + floor_term, conj);
      reports.push_back(CheckReport::inequality("gradient_envelope", digest,
                                                lhs1, rhs1, 1e-9));

      const CiDerivativePair g2 = mu_gradient(params, te, x, taue, y);
      double s2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = g1.grad_alpha[i] + g2.grad_alpha[i];
        s2 += s * s;
      }
      const double sup = sup_distance(freeze(x, te), freeze(y, taue));
      const double rhs2 =
          env_c4 * std::pow(params.eps_smooth() + sup * sup,
                            0.5 * (params.q - 1.0)) *
          std::pow(std::abs(te - taue), params.alpha);
      reports.push_back(CheckReport::inequality("gradient_antisymmetry",
                                                digest, std::sqrt(s2), rhs2,
                                                1e-9));
    }

    if (trial % 16 == 0) {
      // Shrinking-eps sequence: blend the second path onto the first and
      // pull its base time over while eps shrinks by 8 per step.
      const std::size_t it = g.index_of(t);
      const auto shift =
          static_cast<long long>(g.index_of(tau)) - static_cast<long long>(it);
      const SampledPath ax = freeze(x, t);
      double first_nu = 0.0, first_sup = 0.0, last_nu = 0.0, last_sup = 0.0;
      for (int j = 0; j < 4; ++j) {
        const double lambda = std::pow(0.125, j);
        const NuParams pj = params.with_eps(params.eps * lambda);
        std::vector<double> x0(n);
        for (std::size_t i = 0; i < n; ++i) {
          x0[i] = x.x0()[i] + lambda * (y.x0()[i] - x.x0()[i]);
        }
        std::vector<double> cap(x.caputo_samples().size());
        for (std::size_t m = 0; m < cap.size(); ++m) {
          cap[m] = x.caputo_samples()[m] +
                   lambda * (y.caputo_samples()[m] - x.caputo_samples()[m]);
        }
        const SampledPath yj(params.alpha, std::move(x0), x.grid_ptr(),
                             std::move(cap));
        const std::size_t itj =
            static_cast<std::size_t>(static_cast<long long>(it) +
                                     shift / (1LL << (3 * j)));
        const double tauj = g.node(itj);

        const double nuj = nu(pj, t, x, tauj, yj);
        const SampledPath ayj = freeze(yj, tauj);
        const double supj = sup_distance(ax, ayj);

        std::vector<double> dq(g.num_nodes());
        for (std::size_t i = 0; i < dq.size(); ++i) {
          dq[i] = std::pow(std::sqrt(sq_dist(ax.state(i), ayj.state(i))),
                           params.q);
        }
        const double lhs_q =
            singular_integral(g, dq, params.weight_exponent());
        const double rhs_q = nuj + params.c1 * pj.eps_floor();
        const nlohmann::json seq_in = {trial, j, pj.eps, t, tauj, ix, iy};
        reports.push_back(CheckReport::inequality(
            "nu_dominates_weighted_lq", digest_of(seq_in), lhs_q, rhs_q,
            1e-9));

        if (j == 0) {
          first_nu = nuj;
          first_sup = supj;
        }
        last_nu = nuj;
        last_sup = supj;
      }
      const double ratio =
          std::max(last_sup / std::max(first_sup, 1e-12),
                   last_nu / std::max(first_nu, 1e-12));
      CheckReport r =
          CheckReport::inequality("distance_co_decay", digest, ratio, 0.5,
                                  1e-9);
      r.note = "sup " + std::to_string(first_sup) + " -> " +
               std::to_string(last_sup) + ", nu " + std::to_string(first_nu) +
               " -> " + std::to_string(last_nu);
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

std::vector<CheckReport> lemma_harness(const NuParams& params,
                                       const std::vector<SampledPath>& paths,
                                       double theta, std::size_t trials,
                                       std::uint64_t seed) {
  if (paths.empty()) throw DomainError("lemma_harness: need at least one path");
  require_theta(params, theta);
  const Grid& g = paths.front().grid();
  const std::size_t n = paths.front().dim();
  for (const SampledPath& p : paths) {
    if (!(p.grid() == g)) {
      throw AlignmentError("lemma_harness: paths must share one grid");
    }
    if (p.dim() != n) {
      throw DomainError("lemma_harness: paths must share a dimension");
    }
  }
  std::vector<CheckReport> reports;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (CheckReport& r : lemma_trial(params, paths, theta, trial, seed)) {
      reports.push_back(std::move(r));
    }
  }
  return reports;
}

}  // namespace fracgame
