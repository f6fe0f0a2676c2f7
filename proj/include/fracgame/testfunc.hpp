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

#ifndef FRACGAME_TESTFUNC_HPP_
#define FRACGAME_TESTFUNC_HPP_

// The doubled-distance functional and its fractional calculus.
//
// Uniqueness arguments for the path-dependent equation hinge on one auxiliary
// object: a regularized, singularly weighted distance between the frozen
// continuations of two paths,
//
//   nu_eps(t, x, tau, y) = (eps^{2/(q-1)} + ||Da(T)||^2)^{q/2}
//       + Int_0^T (eps^{2/(q-1)} + ||Da(xi)||^2)^{q/2} (T - xi)^{-(1-a-b) q} dxi
//       - C1 eps^{q/(q-1)},
//
// with Da(xi) the difference of the frozen continuations, q = 2/(2 - alpha)
// and the constant C1 chosen so that nu_eps vanishes on the diagonal.  This
// module evaluates nu_eps and the one-sided section mu_eps(t, x) =
// nu_eps(t, x, tau*, y*), the explicit envelope constants C1..C4 and A1 that
// bound it, its coinvariant gradient in closed form, a finite-difference
// probe of coinvariant derivatives for arbitrary functionals, and a harness
// that stress-tests every inequality on random path pairs.
//
// Numerical backbone: nu_eps is evaluated in the algebraically equivalent
// form
//
//   nu_eps = excess(T) + Int_0^T excess(xi) (T - xi)^{-(1-a-b) q} dxi,
//   excess(xi) = (eps^{2/(q-1)} + ||Da(xi)||^2)^{q/2} - eps^{q/(q-1)},
//
// in which the constant C1 cancels exactly: the diagonal identity
// nu_eps(t, x, t, x) = 0 and the freeze-invariance identity then hold to the
// last bit instead of to quadrature accuracy, and nonnegativity is manifest.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "fracgame/paths.hpp"
#include "fracgame/report.hpp"

namespace fracgame {

// Parameter bundle of the doubled-distance functional.  Construct through
// `make`, which validates the strict parameter inequalities and derives q and
// C1; the aggregate is immutable afterwards.
struct NuParams {
  double eps = 0.0;    // regularization strength, > 0
  double alpha = 0.0;  // derivative order, in (0, 1)
  double beta = 0.0;   // weight shift, 0 < beta < min(1 - alpha, alpha / 2)
  double q = 0.0;      // 2 / (2 - alpha), derived; always in (1, 2)
  double T = 0.0;      // horizon, > 0
  double c1 = 0.0;     // diagonal-normalization constant, derived

  // Validates eps > 0, alpha in (0, 1), T > 0 and the beta window, then
  // derives q = 2 / (2 - alpha) and
  // c1 = 1 + T^{1-(1-alpha-beta)q} / (1-(1-alpha-beta)q).
  // Throws DomainError on any violation.
  static NuParams make(double eps, double alpha, double beta, double T);

  // Midpoint of the admissible beta window: min(1 - alpha, alpha / 2) / 2.
  static double default_beta(double alpha);

  // Same parameters with a different regularization strength.
  NuParams with_eps(double new_eps) const;

  // (1 - alpha - beta) q, the weight exponent; always in (0, 1).
  double weight_exponent() const { return (1.0 - alpha - beta) * q; }
  // eps^{2/(q-1)}, the smoothing summand inside the norm.
  double eps_smooth() const;
  // eps^{q/(q-1)}, the diagonal floor subtracted by the normalization.
  double eps_floor() const;
};

// Coinvariant derivative pair of a functional at a point: the scalar
// time-derivative and the gradient against derivative perturbations.
struct CiDerivativePair {
  double dt_alpha = 0.0;
  std::vector<double> grad_alpha;
};

// The doubled-distance functional.  t and tau must be grid nodes; x and y
// must share one grid (AlignmentError otherwise) whose horizon and order
// match the parameters (DomainError otherwise).  Nonnegative; zero when the
// frozen continuations coincide.
double nu(const NuParams& params, double t, const SampledPath& x, double tau,
          const SampledPath& y);

// Invariance of nu under freezing both arguments and moving the base times
// forward: compares nu(t', a(.|t,x), tau', a(.|tau,y)) against
// nu(t, x, tau, y).  Requires t' >= t and tau' >= tau, all grid nodes.
// Identity report with tolerance 1e-10 (the realized residual is zero:
// freezing a frozen path is a bitwise no-op).
CheckReport freeze_invariance_check(const NuParams& params, double t,
                                    const SampledPath& x, double tau,
                                    const SampledPath& y, double t_prime,
                                    double tau_prime);

// Envelope constants.  c2 bounds the composite Lipschitz seminorm of frozen
// continuations through nu; c3 bounds the gradient norm and c4 the deviation
// of the gradient from antisymmetry under argument exchange, both away from
// the horizon by theta.  a1 is the Lipschitz constant of
// t -> B(alpha, 1 - (1-alpha-beta)q) (T - t)^{alpha - (1-alpha-beta)q} on
// [0, T - theta], obtained by differentiating the closed form; the formula
// covers positive, zero and negative exponents alike because the slope
// magnitude always peaks at t = T - theta.  theta must lie in (0, T).
double c2(const NuParams& params);
double c3(const NuParams& params, double theta);
double c4(const NuParams& params, double theta);
double a1(const NuParams& params, double theta);

// Closed-form coinvariant derivatives of the one-sided section
// mu(t, x) = nu(t, x, tau_star, y_star): the time-derivative is identically
// zero and the gradient is
//
//   (q / Gamma(alpha)) [ Da(T) W(T) / (T-t)^{1-alpha}
//     + Int_t^T Da(xi) W(xi) (xi-t)^{alpha-1} (T-xi)^{-(1-a-b) q} dxi ],
//
// with W(xi) = (eps^{2/(q-1)} + ||Da(xi)||^2)^{q/2-1}.  The integral is
// singular at both ends; it is split at the midpoint and product-integrated
// against the nearer kernel on graded meshes refined with the path nodes.
// Requires t < T (DomainError at the horizon) and the same grid/parameter
// agreement as nu.
CiDerivativePair mu_gradient(const NuParams& params, double tau_star,
                             const SampledPath& y_star, double t,
                             const SampledPath& x);

// Result of the finite-difference probe of coinvariant derivatives.
struct CiDerivativeEstimate {
  double dt_alpha = 0.0;
  std::vector<double> grad_alpha;
  // Worst probe-equation residual after the least-squares fit; for smooth
  // functionals this is o(delta) in the step.
  double max_residual = 0.0;
};

// Estimates the coinvariant derivatives of `phi` at (t, x) from first-order
// increments along 2 dim + 1 extensions: constant derivative tails of
// magnitude `probe_scale` along each coordinate axis in both signs, plus the
// frozen (zero-tail) extension, each cut off after t + delta.  The increment
// of phi along such an extension equals dt_alpha * delta +
// <grad_alpha, tail> * delta up to o(delta); the probe responses
// overdetermine the pair, which is recovered by least squares (the design is
// orthogonal, so the solution is closed-form).  delta must span at least two
// grid cells and end on a node; probe_scale must be positive
// (ConditioningError otherwise, the design degenerates).
CiDerivativeEstimate ci_derivative_fd(const PathFunctional& phi, double t,
                                      const SampledPath& x, double probe_scale,
                                      double delta);

// Randomized inequality harness over a family of paths on one grid.  Each
// trial draws a pair of paths and base times and emits:
//
//   nu_nonnegative        0 <= nu
//   nu_symmetry           nu(t,x,tau,y) == nu(tau,y,t,x)
//   lipschitz_envelope    terminal + weighted-L1 distance of continuations
//                         <= c2 (nu + C1 eps^{q/(q-1)})^{1/q}
//   gradient_envelope     ||grad mu|| <= c3 (nu + C1 eps^{q/(q-1)})^{(q-1)/q}
//                         at times <= T - theta
//   gradient_antisymmetry ||grad mu(t,x) anchored at (tau,y) + the exchanged
//                         gradient|| <= c4 (eps^{2/(q-1)} + sup^2)^{(q-1)/2}
//                         |t - tau|^alpha at times <= T - theta
//
// and every 16th trial additionally follows a shrinking-eps sequence in
// which the second path and its base time are pulled onto the first,
// emitting per step
//
//   nu_dominates_weighted_lq  Int ||Da||^q (T-xi)^{-(1-a-b)q}
//                             <= nu + C1 eps^{q/(q-1)}
//
// and one summary report
//
//   distance_co_decay     the sup-distance of the continuations and nu decay
//                         together along the sequence (final/initial <= 1/2).
//
// Deterministic given the seed; reports carry digests of the drawn inputs.
std::vector<CheckReport> lemma_harness(const NuParams& params,
                                       const std::vector<SampledPath>& paths,
                                       double theta, std::size_t trials,
                                       std::uint64_t seed);

// Reports of one harness trial. `lemma_harness(.., trials, seed)` is exactly
// the concatenation of `lemma_trial(.., trial, seed)` for trial = 0..trials-1;
// the split exists so independent trials can run on a worker pool and be
// merged back in trial order without changing a byte of output.
std::vector<CheckReport> lemma_trial(const NuParams& params,
                                     const std::vector<SampledPath>& paths,
                                     double theta, std::size_t trial,
                                     std::uint64_t seed);

}  // namespace fracgame

#endif  // FRACGAME_TESTFUNC_HPP_
