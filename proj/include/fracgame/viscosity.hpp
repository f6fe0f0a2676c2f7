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

#ifndef FRACGAME_VISCOSITY_HPP_
#define FRACGAME_VISCOSITY_HPP_

// Viscosity-property checks and the doubling-of-variables uniqueness
// diagnostic.
//
// A candidate solution functional is probed with smooth test functionals of
// the family g(t) + c * mu (affine time part plus a scaled doubled-distance
// functional), whose derivatives are closed-form:
//
//   half-relaxed subsolution test: if phi - psi attains its minimum over the
//   sampled subset of [0, T] x X_k at a time t < T, then
//   dpsi/dt + H(t, x(t), grad psi) <= 0 must hold there (and >= 0 at a
//   maximum for the supersolution test).
//
// The doubling diagnostic runs the uniqueness argument on finite samples:
// given two candidates with positive sampled gap kappa, it maximizes
//
//   Phi_eps(t,x,tau,y) = phi1(t,x) - phi2(tau,y) - (2T-t-tau) zeta
//                        - (t-tau)^2 eps^{-3/alpha} - nu_eps(t,x,tau,y)/eps
//
// over library x times pairs and checks, at each maximizer, the necessary
// conditions the argument derives: the time-gap bound against K1, the
// doubled-distance bound against K3, the gradient ceiling C3*K3, and the
// final Hamiltonian difference against 2 zeta.  With a finite library these
// are falsifiers on the samples, not proofs over X_k.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracgame/dynamics.hpp"
#include "fracgame/game.hpp"
#include "fracgame/paths.hpp"
#include "fracgame/report.hpp"
#include "fracgame/testfunc.hpp"

namespace fracgame {

// A candidate solution functional phi(t, x).  Evaluation always happens on
// freeze(x, t), so every candidate is non-anticipative by construction
// regardless of the wrapped hook.
class CandidateFunctional {
 public:
  // Wraps an arbitrary hook (t is a grid node of the paths handed in).
  static CandidateFunctional from_hook(std::string id, PathFunctional hook);
  // Game value started at (t, frozen path).  The decision-step count per
  // evaluation is the largest divisor of the remaining fine cells that does
  // not exceed max_steps, so the hook works from every node.
  static CandidateFunctional from_value_tree(std::string id, GameDynamics dyn,
                                             std::size_t max_steps,
                                             Commitment mode);
  // Terminal cost of the frozen continuation; the solution when H == 0.
  static CandidateFunctional terminal_only(std::string id, GameDynamics dyn);

  double operator()(double t, const SampledPath& x) const;
  const std::string& id() const { return id_; }

 private:
  CandidateFunctional(std::string id, PathFunctional hook);

  std::string id_;
  PathFunctional hook_;
};

// Smooth test functional psi(t, x) = g0 + g1 t + c * mu(t, x) built on the
// doubled-distance functional marked at (tau_star, y_star).  Its derivatives
// are exact: the time part contributes g1, the mu part contributes only a
// path gradient.
struct TestFunctional {
  NuParams params;
  double tau_star;
  SampledPath y_star;
  double affine_const = 0.0;  // g0
  double affine_slope = 0.0;  // g1
  double mu_scale = 0.0;      // c

  double value(double t, const SampledPath& x) const;
  // Valid for t < T (the path gradient is defined before the horizon).
  CiDerivativePair derivatives(double t, const SampledPath& x) const;
};

// max |phi(T, x) - sigma(x)| over the sample paths.
double boundary_residual(const CandidateFunctional& phi,
                         const GameDynamics& dyn,
                         const std::vector<SampledPath>& samples);

// Subsolution test: locate the minimum of phi - psi over times x library
// (ties to the first point in scan order).  At an interior minimizer the
// report checks  dpsi/dt + H <= 0  within 1e-2 * (1 + |H|); a minimum
// attained only at t = T is reported as inconclusive, not failed.
CheckReport vplus_check(const CandidateFunctional& phi,
                        const TestFunctional& psi, const GameDynamics& dyn,
                        const std::vector<SampledPath>& library,
                        const std::vector<double>& times);
// Supersolution test: same scan for the maximum, sign >= 0.
CheckReport vminus_check(const CandidateFunctional& phi,
                         const TestFunctional& psi, const GameDynamics& dyn,
                         const std::vector<SampledPath>& library,
                         const std::vector<double>& times);

// Least Lambda with |phi(t,x) - phi(t,y)| <= Lambda * (||da(T)|| +
// Int ||da(xi)|| (T-xi)^{alpha-1} dxi) over sampled (t, pair) draws, where
// da is the difference of the continuations frozen at t.  The fitted Lambda
// and the worst ratio go into the note; the pass verdict asserts that pairs
// with a vanishing envelope also have a vanishing value difference (no
// unbounded ratios).
CheckReport lipschitz_L_check(const CandidateFunctional& phi,
                              const std::vector<SampledPath>& library,
                              const std::vector<double>& times,
                              std::size_t pairs, std::uint64_t seed);

// One maximizer record of the doubling diagnostic at a fixed eps.
struct DoublingMaximizer {
  double eps = 0.0;
  double t = 0.0, tau = 0.0;
  std::size_t x_index = 0, y_index = 0;
  double phi_value = 0.0;  // Phi_eps at the maximizer
  double gap_sq = 0.0;     // (t - tau)^2
  double gap_bound = 0.0;  // K1 eps^{3/alpha}
  bool gap_ok = false;
  double nu_value = 0.0;
  double nu_lhs = 0.0;    // (nu + c1 eps^{q/(q-1)})^{(q-1)/q}
  double nu_bound = 0.0;  // K3 eps
  bool nu_ok = false;
  // Hamiltonian block, evaluated only when both maximizer times are
  // interior (the gradients need t < T).
  bool hj_evaluated = false;
  double hj_first = 0.0;    // -zeta + 2(t-tau)/eps^{3/alpha} + H(t, x(t), g1/eps)
  double hj_second = 0.0;   // +zeta + 2(t-tau)/eps^{3/alpha} + H(tau, y(tau), -g2/eps)
  double ham_difference = 0.0;  // H-first - H-second, compared against 2 zeta
  bool contradiction_engaged = false;  // ham_difference < 2 zeta
  // Gradient ceiling ||grad mu / eps|| <= C3 K3, checked when both times
  // are at most T - theta.
  bool k5_checked = false;
  double grad_over_eps = 0.0;  // max of the two gradient norms / eps
  double k5_bound = 0.0;
  bool k5_ok = false;

  nlohmann::json to_json() const;
};

struct DoublingReport {
  bool engaged = false;  // kappa > 1e-12; otherwise nothing more is run
  double kappa = 0.0;    // max of phi1 - phi2 over times x library
  double zeta = 0.0;     // kappa / (4 T), exactly
  double k1 = 0.0;       // max of phi1 - phi2 over cross pairs
  double k2 = 0.0;       // (Lambda1 + Lambda2) * C2 from the fitted condition (L)
  double k3 = 0.0;       // K2 + c1^{(q-1)/q}
  double theta = 0.0;    // largest sampled distance-to-horizon with
                         // oscillation of both candidates below kappa / 8
  std::string note;      // finite-library caveat
  std::vector<double> times;
  std::vector<std::string> library_digest;  // one digest per library path
  std::vector<DoublingMaximizer> per_eps;

  nlohmann::json to_json() const;
};

// Runs the sampled uniqueness argument for each eps in `eps_list`.
// `times` must be sorted grid nodes ending at the horizon; the library must
// be non-empty and share one grid (ConfigError otherwise).
DoublingReport doubling_diagnostic(const CandidateFunctional& phi1,
                                   const CandidateFunctional& phi2,
                                   const GameDynamics& dyn,
                                   const NuParams& params,
                                   const std::vector<SampledPath>& library,
                                   const std::vector<double>& times,
                                   const std::vector<double>& eps_list);

// CSV of the Phi_eps surface over the scan set (columns: t, x_index, tau,
// y_index, phi) for one eps, using the given zeta.
std::string doubling_trace_csv(const CandidateFunctional& phi1,
                               const CandidateFunctional& phi2,
                               const NuParams& params,
                               const std::vector<SampledPath>& library,
                               const std::vector<double>& times, double zeta,
                               double eps);

// Deterministic library inside X_k: random members plus frozen copies and
// blended variants, each membership-verified before inclusion (candidates
// failing the check are skipped, so the result may hold fewer than
// 2 * count entries).
std::vector<SampledPath> build_path_library(
    double alpha, const std::shared_ptr<const Grid>& grid, std::size_t dim,
    int k, double c_star, std::size_t count, std::uint64_t seed);

}  // namespace fracgame

#endif  // FRACGAME_VISCOSITY_HPP_
