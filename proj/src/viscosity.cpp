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

#include "fracgame/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fracgame/errors.hpp"
#include "fracgame/fraccalc.hpp"
#include "fracgame/util.hpp"

namespace fracgame {

namespace {

std::string path_digest(const SampledPath& p) {
  return hex64(fnv1a64(p.to_json().dump()));
}

std::string digest_of(const nlohmann::json& inputs) {
  return hex64(fnv1a64(inputs.dump()));
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Shared validation of a scan set: non-empty library on one grid, sorted
// node times ending at the horizon.
void require_scan_set(const std::vector<SampledPath>& library,
                      const std::vector<double>& times) {
  if (library.empty()) {
    throw ConfigError("viscosity: the path library is empty");
  }
  if (times.empty()) {
    throw ConfigError("viscosity: no sampled times");
  }
  const Grid& g = library.front().grid();
  for (const SampledPath& p : library) {
    if (!(p.grid() == g)) {
      throw ConfigError("viscosity: library paths must share one grid");
    }
    if (p.dim() != library.front().dim()) {
      throw ConfigError("viscosity: library paths must share a dimension");
    }
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    g.index_of(times[i]);
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw ConfigError("viscosity: times must be strictly increasing");
    }
  }
  if (times.back() != g.T()) {
    throw ConfigError("viscosity: the sampled times must end at the horizon");
  }
}

// Condition-(L) envelope ||da(T)|| + Int ||da|| (T-xi)^{alpha-1} dxi of two
// paths frozen at t.
double l_envelope(const SampledPath& x, const SampledPath& y, double t) {
  const Grid& g = x.grid();
  const SampledPath ax = freeze(x, t);
  const SampledPath ay = freeze(y, t);
  std::vector<double> dist(g.num_nodes());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    dist[i] = vec_dist(ax.state(i), ay.state(i));
  }
  return dist.back() + singular_integral(g, dist, 1.0 - x.alpha());
}

// Least Lambda covering |phi(t,x) - phi(t,y)| <= Lambda * envelope over the
// whole scan set (pairs with a vanishing envelope are skipped).
double fit_lambda(const CandidateFunctional& phi,
                  const std::vector<SampledPath>& library,
                  const std::vector<double>& times) {
  double lambda = 0.0;
  for (double t : times) {
    std::vector<double> values(library.size());
    for (std::size_t i = 0; i < library.size(); ++i) {
      values[i] = phi(t, library[i]);
    }
    for (std::size_t i = 0; i < library.size(); ++i) {
      for (std::size_t j = i + 1; j < library.size(); ++j) {
        const double env = l_envelope(library[i], library[j], t);
        if (env > 1e-12) {
          lambda = std::max(lambda, std::abs(values[i] - values[j]) / env);
        }
      }
    }
  }
  return lambda;
}

}  // namespace

CandidateFunctional::CandidateFunctional(std::string id, PathFunctional hook)
    : id_(std::move(id)), hook_(std::move(hook)) {}

CandidateFunctional CandidateFunctional::from_hook(std::string id,
                                                   PathFunctional hook) {
  return CandidateFunctional(std::move(id), std::move(hook));
}

CandidateFunctional CandidateFunctional::from_value_tree(std::string id,
                                                         GameDynamics dyn,
                                                         std::size_t max_steps,
                                                         Commitment mode) {
  if (max_steps == 0) {
    throw DomainError("CandidateFunctional: need at least one decision step");
  }
  PathFunctional hook = [dyn = std::move(dyn), max_steps, mode](
                            double t, const SampledPath& x) {
    const Grid& g = x.grid();
    const std::size_t remaining = g.num_cells() - g.index_of(t);
    if (remaining == 0) return dyn.sigma(x);
    std::size_t steps = std::min(max_steps, remaining);
    while (remaining % steps != 0) --steps;
    return value(dyn, x, t, steps, mode).value();
  };
  return CandidateFunctional(std::move(id), std::move(hook));
}

CandidateFunctional CandidateFunctional::terminal_only(std::string id,
                                                       GameDynamics dyn) {
  PathFunctional hook = [dyn = std::move(dyn)](double, const SampledPath& x) {
    return dyn.sigma(x);
  };
  return CandidateFunctional(std::move(id), std::move(hook));
}

double CandidateFunctional::operator()(double t, const SampledPath& x) const {
  return hook_(t, freeze(x, t));
}

double TestFunctional::value(double t, const SampledPath& x) const {
  double v = affine_const + affine_slope * t;
  if (mu_scale != 0.0) {
    v += mu_scale * nu(params, t, x, tau_star, y_star);
  }
  return v;
}

CiDerivativePair TestFunctional::derivatives(double t,
                                             const SampledPath& x) const {
  CiDerivativePair out;
  out.dt_alpha = affine_slope;
  if (mu_scale != 0.0) {
    out.grad_alpha = mu_gradient(params, tau_star, y_star, t, x).grad_alpha;
    for (double& c : out.grad_alpha) c *= mu_scale;
  } else {
    out.grad_alpha.assign(x.dim(), 0.0);
  }
  return out;
}

double boundary_residual(const CandidateFunctional& phi,
                         const GameDynamics& dyn,
                         const std::vector<SampledPath>& samples) {
  double worst = 0.0;
  for (const SampledPath& x : samples) {
    worst = std::max(worst, std::abs(phi(x.grid().T(), x) - dyn.sigma(x)));
  }
  return worst;
}

namespace {

CheckReport extremum_sign_check(const char* lemma, bool minimize,
                                const CandidateFunctional& phi,
                                const TestFunctional& psi,
                                const GameDynamics& dyn,
                                const std::vector<SampledPath>& library,
                                const std::vector<double>& times) {
  require_scan_set(library, times);
  if (dyn.dim() != library.front().dim()) {
    throw ConfigError("viscosity: dynamics and library dimensions differ");
  }
  const Grid& g = library.front().grid();

  double best = minimize ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  double best_t = times.front();
  std::size_t best_l = 0;
  for (double t : times) {
    for (std::size_t l = 0; l < library.size(); ++l) {
      const double d = phi(t, library[l]) - psi.value(t, library[l]);
      const bool better = minimize ? d < best : d > best;
      if (better) {
        best = d;
        best_t = t;
        best_l = l;
      }
    }
  }

  const nlohmann::json inputs = {phi.id(),        psi.params.eps,
                                 psi.params.alpha, psi.params.beta,
                                 psi.tau_star,    psi.affine_const,
                                 psi.affine_slope, psi.mu_scale,
                                 times.size(),    library.size(),
                                 best_t,          best_l};
  const std::string digest = digest_of(inputs);

  if (best_t == g.T()) {
    CheckReport r = CheckReport::inequality(lemma, digest, 0.0, 0.0, 1e-2);
    r.note = "extremum attained only at the horizon; inconclusive";
    return r;
  }

  const SampledPath& x = library[best_l];
  const CiDerivativePair dpsi = psi.derivatives(best_t, x);
  const HamiltonianEval h = hamiltonian(
      dyn, best_t, x.state(g.index_of(best_t)),
      {dpsi.grad_alpha.data(), dpsi.grad_alpha.size()});
  const double val = dpsi.dt_alpha + h.value;
  const double tol = 1e-2 * (1.0 + std::abs(h.value));
  const std::string note = std::string("extremum at t=") + fmt_double(best_t) +
                           " path=" + std::to_string(best_l) +
                           " H=" + fmt_double(h.value);
  CheckReport r = minimize
                      ? CheckReport::inequality(lemma, digest, val, 0.0, tol)
                      : CheckReport::inequality(lemma, digest, 0.0, val, tol);
  r.note = note;
  return r;
}

}  // namespace

CheckReport vplus_check(const CandidateFunctional& phi,
                        const TestFunctional& psi, const GameDynamics& dyn,
                        const std::vector<SampledPath>& library,
                        const std::vector<double>& times) {
  return extremum_sign_check("vplus_sign", /*minimize=*/true, phi, psi, dyn,
                             library, times);
}

CheckReport vminus_check(const CandidateFunctional& phi,
                         const TestFunctional& psi, const GameDynamics& dyn,
                         const std::vector<SampledPath>& library,
                         const std::vector<double>& times) {
  return extremum_sign_check("vminus_sign", /*minimize=*/false, phi, psi, dyn,
                             library, times);
}

CheckReport lipschitz_L_check(const CandidateFunctional& phi,
                              const std::vector<SampledPath>& library,
                              const std::vector<double>& times,
                              std::size_t pairs, std::uint64_t seed) {
  require_scan_set(library, times);
  double lambda = 0.0;
  double degenerate_violation = 0.0;
  std::size_t used = 0;
  for (std::uint64_t trial = 0; trial < pairs; ++trial) {
    TrialRng rng(seed, "lipschitz_L", trial);
    const double t = times[rng.uniform_index(times.size())];
    const SampledPath& x = library[rng.uniform_index(library.size())];
    const SampledPath& y = library[rng.uniform_index(library.size())];
    const double env = l_envelope(x, y, t);
    const double dphi = std::abs(phi(t, x) - phi(t, y));
    if (env <= 1e-12) {
      // A vanishing envelope means the frozen continuations coincide; any
      // non-anticipative functional must agree on such a pair.
      degenerate_violation = std::max(degenerate_violation, dphi);
    } else {
      lambda = std::max(lambda, dphi / env);
      ++used;
    }
  }
  const nlohmann::json inputs = {phi.id(), times.size(), library.size(),
                                 pairs, seed};
  CheckReport r = CheckReport::inequality("lipschitz_L", digest_of(inputs),
                                          degenerate_violation, 0.0, 1e-10);
  r.note = "Lambda=" + fmt_double(lambda) + " over " + std::to_string(used) +
           " pairs";
  return r;
}

nlohmann::json DoublingMaximizer::to_json() const {
  nlohmann::json j;
  j["eps"] = eps;
  j["t"] = t;
  j["tau"] = tau;
  j["x_index"] = x_index;
  j["y_index"] = y_index;
  j["phi_value"] = phi_value;
  j["gap_sq"] = gap_sq;
  j["gap_bound"] = gap_bound;
  j["gap_ok"] = gap_ok;
  j["nu_value"] = nu_value;
  j["nu_lhs"] = nu_lhs;
  j["nu_bound"] = nu_bound;
  j["nu_ok"] = nu_ok;
  j["hj_evaluated"] = hj_evaluated;
  if (hj_evaluated) {
    j["hj_first"] = hj_first;
    j["hj_second"] = hj_second;
    j["ham_difference"] = ham_difference;
    j["contradiction_engaged"] = contradiction_engaged;
  }
  j["k5_checked"] = k5_checked;
  if (k5_checked) {
    j["grad_over_eps"] = grad_over_eps;
    j["k5_bound"] = k5_bound;
    j["k5_ok"] = k5_ok;
  }
  return j;
}

nlohmann::json DoublingReport::to_json() const {
  nlohmann::json j;
  j["engaged"] = engaged;
  j["kappa"] = kappa;
  j["zeta"] = zeta;
  j["k1"] = k1;
  j["k2"] = k2;
  j["k3"] = k3;
  j["theta"] = theta;
  j["note"] = note;
  j["times"] = times;
  j["library_digest"] = library_digest;
  j["per_eps"] = nlohmann::json::array();
  for (const DoublingMaximizer& m : per_eps) {
    j["per_eps"].push_back(m.to_json());
  }
  return j;
}

DoublingReport doubling_diagnostic(const CandidateFunctional& phi1,
                                   const CandidateFunctional& phi2,
                                   const GameDynamics& dyn,
                                   const NuParams& params,
                                   const std::vector<SampledPath>& library,
                                   const std::vector<double>& times,
                                   const std::vector<double>& eps_list) {
  require_scan_set(library, times);
  if (dyn.dim() != library.front().dim()) {
    throw ConfigError("doubling_diagnostic: dynamics dimension mismatch");
  }
  const Grid& g = library.front().grid();
  const double T = g.T();
  const std::size_t nt = times.size();
  const std::size_t nl = library.size();

  DoublingReport rep;
  rep.times = times;
  rep.note =
      "maximizers are taken over the finite sampled library only; the bound "
      "checks are necessary conditions on these samples, not proofs over the "
      "whole path set";
  rep.library_digest.reserve(nl);
  for (const SampledPath& p : library) {
    rep.library_digest.push_back(path_digest(p));
  }

  // Candidate values over the scan set, cached once.
  std::vector<double> v1(nt * nl), v2(nt * nl);
  for (std::size_t it = 0; it < nt; ++it) {
    for (std::size_t l = 0; l < nl; ++l) {
      v1[it * nl + l] = phi1(times[it], library[l]);
      v2[it * nl + l] = phi2(times[it], library[l]);
    }
  }

  double kappa = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v1.size(); ++i) {
    kappa = std::max(kappa, v1[i] - v2[i]);
  }
  rep.kappa = kappa;
  rep.zeta = kappa / (4.0 * T);
  rep.engaged = kappa > 1e-12;
  if (!rep.engaged) {
    rep.note = "sampled gap kappa <= 1e-12: no contradiction hypothesis; " +
               rep.note;
    return rep;
  }

  rep.k1 = *std::max_element(v1.begin(), v1.end()) -
           *std::min_element(v2.begin(), v2.end());
  const double lambda_sum =
      fit_lambda(phi1, library, times) + fit_lambda(phi2, library, times);
  rep.k2 = lambda_sum * c2(params);
  rep.k3 = rep.k2 + std::pow(params.c1, (params.q - 1.0) / params.q);

  // theta: the largest sampled distance to the horizon over which both
  // candidates oscillate less than kappa / 8 on every library path.
  {
    double theta = T - times[nt - 2];  // fallback: one sampled step
    bool found = false;
    for (std::size_t it = 0; it + 1 < nt && !found; ++it) {
      double osc = 0.0;
      for (std::size_t jt = it; jt < nt; ++jt) {
        for (std::size_t l = 0; l < nl; ++l) {
          osc = std::max(osc,
                         std::abs(v1[jt * nl + l] - v1[(nt - 1) * nl + l]) +
                             std::abs(v2[jt * nl + l] - v2[(nt - 1) * nl + l]));
        }
      }
      if (osc <= kappa / 8.0) {
        theta = T - times[it];
        found = true;
      }
    }
    if (!found) {
      rep.note += "; no sampled theta kept the oscillation below kappa/8, "
                  "using one sampled step";
    }
    rep.theta = theta;
  }
  const double k5_bound = c3(params, rep.theta) * rep.k3;

  for (double eps : eps_list) {
    const NuParams pe = params.with_eps(eps);
    const double eps3a = std::pow(eps, 3.0 / params.alpha);

    DoublingMaximizer m;
    m.eps = eps;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < nt; ++it) {
      for (std::size_t l = 0; l < nl; ++l) {
        for (std::size_t jt = 0; jt < nt; ++jt) {
          for (std::size_t mm = 0; mm < nl; ++mm) {
            const double t = times[it], tau = times[jt];
            const double nv = nu(pe, t, library[l], tau, library[mm]);
            const double phi_val =
                v1[it * nl + l] - v2[jt * nl + mm] -
                (2.0 * T - t - tau) * rep.zeta -
                (t - tau) * (t - tau) / eps3a - nv / eps;
            if (phi_val > best) {
              best = phi_val;
              m.t = t;
              m.tau = tau;
              m.x_index = l;
              m.y_index = mm;
              m.phi_value = phi_val;
              m.nu_value = nv;
            }
          }
        }
      }
    }

    m.gap_sq = (m.t - m.tau) * (m.t - m.tau);
    m.gap_bound = rep.k1 * eps3a;
    m.gap_ok = m.gap_sq <= m.gap_bound + 1e-12;
    m.nu_lhs = std::pow(
        m.nu_value + pe.c1 * pe.eps_floor(), (pe.q - 1.0) / pe.q);
    m.nu_bound = rep.k3 * eps;
    m.nu_ok = m.nu_lhs <= m.nu_bound + 1e-12;

    if (m.t < T && m.tau < T) {
      const SampledPath& x = library[m.x_index];
      const SampledPath& y = library[m.y_index];
      std::vector<double> g1 =
          mu_gradient(pe, m.tau, y, m.t, x).grad_alpha;
      std::vector<double> g2 =
          mu_gradient(pe, m.t, x, m.tau, y).grad_alpha;
      for (double& c : g1) c /= eps;
      for (double& c : g2) c = -c / eps;
      const double h1 =
          hamiltonian(dyn, m.t, x.state(g.index_of(m.t)),
                      {g1.data(), g1.size()})
              .value;
      const double h2 =
          hamiltonian(dyn, m.tau, y.state(g.index_of(m.tau)),
                      {g2.data(), g2.size()})
              .value;
      const double drift = 2.0 * (m.t - m.tau) / eps3a;
      m.hj_evaluated = true;
      m.hj_first = -rep.zeta + drift + h1;
      m.hj_second = rep.zeta + drift + h2;
      m.ham_difference = h1 - h2;
      m.contradiction_engaged = m.ham_difference < 2.0 * rep.zeta;

      if (m.t <= T - rep.theta + 1e-12 && m.tau <= T - rep.theta + 1e-12) {
        m.k5_checked = true;
        double n1 = vec_norm({g1.data(), g1.size()});
        double n2 = vec_norm({g2.data(), g2.size()});
        m.grad_over_eps = std::max(n1, n2);
        m.k5_bound = k5_bound;
        m.k5_ok = m.grad_over_eps <= k5_bound + 1e-12;
      }
    }
    rep.per_eps.push_back(m);
  }
  return rep;
}

std::string doubling_trace_csv(const CandidateFunctional& phi1,
                               const CandidateFunctional& phi2,
                               const NuParams& params,
                               const std::vector<SampledPath>& library,
                               const std::vector<double>& times, double zeta,
                               double eps) {
  require_scan_set(library, times);
  const Grid& g = library.front().grid();
  const double T = g.T();
  const NuParams pe = params.with_eps(eps);
  const double eps3a = std::pow(eps, 3.0 / params.alpha);

  std::string out = "t,x_index,tau,y_index,phi\n";
  for (double t : times) {
    for (std::size_t l = 0; l < library.size(); ++l) {
      const double p1 = phi1(t, library[l]);
      for (double tau : times) {
        for (std::size_t m = 0; m < library.size(); ++m) {
          const double phi_val =
              p1 - phi2(tau, library[m]) - (2.0 * T - t - tau) * zeta -
              (t - tau) * (t - tau) / eps3a -
              nu(pe, t, library[l], tau, library[m]) / eps;
          out += fmt_double(t) + "," + std::to_string(l) + "," +
                 fmt_double(tau) + "," + std::to_string(m) + "," +
                 fmt_double(phi_val) + "\n";
        }
      }
    }
  }
  return out;
}

std::vector<SampledPath> build_path_library(
    double alpha, const std::shared_ptr<const Grid>& grid, std::size_t dim,
    int k, double c_star, std::size_t count, std::uint64_t seed) {
  std::vector<SampledPath> lib;
  lib.reserve(2 * count);
  for (std::uint64_t i = 0; i < count; ++i) {
    TrialRng rng(seed, "path_library", i);
    SampledPath base = random_xk_path(alpha, grid, dim, k, c_star, rng);
    lib.push_back(base);
    switch (i % 3) {
      case 0: {
        const SampledPath fr = freeze(base, grid->node(grid->num_cells() / 4));
        if (xk_check(fr, k, c_star).verdict) lib.push_back(fr);
        break;
      }
      case 1: {
        const SampledPath fr =
            freeze(base, grid->node(5 * grid->num_cells() / 8));
        if (xk_check(fr, k, c_star).verdict) lib.push_back(fr);
        break;
      }
      default: {
        // Midpoint blend with an independent member; usually still
        // admissible thanks to the sampling margin, verified regardless.
        const SampledPath other =
            random_xk_path(alpha, grid, dim, k, c_star, rng);
        std::vector<double> x0(dim);
        for (std::size_t c = 0; c < dim; ++c) {
          x0[c] = 0.5 * (base.x0()[c] + other.x0()[c]);
        }
        std::vector<double> cap(base.caputo_samples().size());
        for (std::size_t c = 0; c < cap.size(); ++c) {
          cap[c] = 0.5 * (base.caputo_samples()[c] + other.caputo_samples()[c]);
        }
        const SampledPath blend(alpha, std::move(x0), grid, std::move(cap));
        if (xk_check(blend, k, c_star).verdict) lib.push_back(blend);
        break;
      }
    }
  }
  return lib;
}

}  // namespace fracgame
