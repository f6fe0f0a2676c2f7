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

#ifndef FRACGAME_FRACCALC_HPP_
#define FRACGAME_FRACCALC_HPP_

// Special functions and weakly singular quadrature.
//
// Everything downstream — sampled fractional paths, game trajectories, the
// doubled distance functionals and their gradients — reduces to a handful of
// primitives collected here:
//
//   * the gamma, log-gamma and beta functions to ~1e-12 relative accuracy;
//   * the Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(alpha k + 1),
//     the fractional analogue of the exponential and the closed-form oracle
//     for linear fractional dynamics;
//   * exact cell moments of the memory kernel (tau - xi)^(alpha - 1), packaged
//     as lower-triangular convolution weights on a time grid;
//   * product integration of integrands against the weakly singular kernels
//     (b - xi)^(-p) and (xi - a)^(-p) with p in (0, 1): the integrand is
//     interpolated piecewise-linearly between sample points while the kernel
//     is integrated in closed form on every cell.  Naive quadrature loses the
//     convergence rate at the unbounded endpoint; product integration keeps
//     it, which the acceptance tolerances rely on.
//
// All functions are pure; all types are immutable after construction.

#include <cstddef>
#include <memory>
#include <vector>

#include "fracgame/report.hpp"

namespace fracgame {

// --- Special functions --------------------------------------------------

// Gamma function for x > 0, relative accuracy ~1e-12 (Lanczos approximation
// with the fixed g = 7, n = 9 coefficient set; reflection below 1/2).
// Throws DomainError for x <= 0.
double gamma_fn(double x);

// log Gamma(x) for x > 0; same accuracy class, safe where Gamma overflows.
double log_gamma_fn(double x);

// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b) for a, b > 0,
// evaluated through log-gamma for stability at uneven arguments.
double beta_fn(double a, double b);

// Mittag-Leffler function E_alpha(z) for alpha in (0, 1], truncated when the
// geometric tail bound falls below `tol`.  The term budget is fixed at 512;
// if the series has not both entered its decaying regime and met the bound by
// then, an AccuracyError is thrown rather than returning a silent partial sum.
double mittag_leffler(double alpha, double z, double tol);

// u^e - v^e for 0 <= v <= u, switched to an expm1/log1p form when u and v are
// close; keeps kernel cell moments at full relative accuracy where direct
// subtraction would cancel.
double pow_diff(double u, double v, double e);

// --- Time grids ---------------------------------------------------------

// A strictly increasing partition 0 = tau_0 < tau_1 < ... < tau_N = T.
//
// Grids produced by `uniform` are flagged, which lets path evaluation use a
// translation-invariant weight table (an O(N^2) -> O(N) reduction in kernel
// moment computations).  Times handed to node-aligned operations must match a
// node to within 1e-12 * max(1, T); nothing is ever silently rounded.
class Grid {
 public:
  explicit Grid(std::vector<double> nodes);
  static Grid uniform(std::size_t cells, double T);

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_cells() const { return nodes_.size() - 1; }
  double node(std::size_t i) const { return nodes_[i]; }
  double T() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }

  bool is_uniform() const { return uniform_; }
  // Cell width of a uniform grid; throws DomainError otherwise.
  double cell_width() const;

  // Index of the node equal to t (within the alignment tolerance); throws
  // AlignmentError if t is not a node.
  std::size_t index_of(double t) const;
  // Index j of the cell [tau_j, tau_{j+1}) containing tau; tau = T maps to
  // the last cell.  Throws DomainError outside [0, T].
  std::size_t cell_of(double tau) const;

  bool operator==(const Grid& other) const { return nodes_ == other.nodes_; }

 private:
  std::vector<double> nodes_;
  bool uniform_ = false;
};

// --- Convolution weights ------------------------------------------------

// Exact cell moments of the Riemann-Liouville kernel on a grid:
//
//   w[i][j] = ((tau_i - tau_j)^alpha - (tau_i - tau_{j+1})^alpha) / Gamma(alpha + 1)
//
// so that for piecewise-constant f,
//
//   (1 / Gamma(alpha)) * Int_0^{tau_i} f(xi) (tau_i - xi)^(alpha - 1) dxi
//     = sum_{j < i} w[i][j] * f_j          (exactly).
//
// All weights are nonnegative and row i telescopes to tau_i^alpha / Gamma(alpha+1).
class ConvolutionWeights {
 public:
  ConvolutionWeights(const Grid& grid, double alpha);

  double alpha() const { return alpha_; }
  std::size_t num_nodes() const { return rows_.size(); }
  // w[i][j] for 0 <= j < i.
  double weight(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  // Row for target node i (length i).
  const std::vector<double>& row(std::size_t i) const { return rows_[i]; }

 private:
  double alpha_;
  std::vector<std::vector<double>> rows_;
};

// --- Weakly singular product integration --------------------------------

// Int_0^T g(xi) (T - xi)^(-p) dxi with p in (0, 1), where g is sampled at the
// grid nodes and interpolated linearly in between; the kernel is integrated
// exactly on each cell.  `samples` holds one value per node.
// Throws DivergenceError for p >= 1 and DomainError for p <= 0.
double singular_integral(const Grid& grid, const std::vector<double>& samples,
                         double p);

// Building blocks on arbitrary strictly increasing abscissas xs (not
// necessarily starting at 0), exposed for the doubled-kernel integrals of the
// test-functional calculus.
//
//   right: Int g(xi) (xs.back() - xi)^(-p) dxi
//   left : Int g(xi) (xi - xs.front())^(-p) dxi
//
// with g piecewise linear through (xs[i], gs[i]).  p in (0, 1).
double right_singular_pl_integral(const std::vector<double>& xs,
                                  const std::vector<double>& gs, double p);
double left_singular_pl_integral(const std::vector<double>& xs,
                                 const std::vector<double>& gs, double p);

// Strictly increasing mesh of `cells` + 1 points on [a, b], geometrically
// graded toward `a` (toward_a = true) or `b` with exponent r >= 1:
// spacing ~ |interval| * (i / cells)^r near the graded end.  Used to recover
// full accuracy when the sampled factor itself has an endpoint singularity.
std::vector<double> graded_points(double a, double b, std::size_t cells,
                                  double r, bool toward_a);

// --- Beta identity ------------------------------------------------------

// Quadrature-vs-closed-form check of
//
//   Int_t^T (xi - t)^(gamma - 1) (T - xi)^(-(1 - alpha - beta) q) dxi
//     = B(gamma, 1 - (1 - alpha - beta) q) * (T - t)^(gamma - (1 - alpha - beta) q)
//
// for gamma in (0, 1], t in [0, T).  The left side is evaluated by splitting
// at the midpoint and applying product integration against the nearer
// singular factor on graded meshes; the report records the relative
// discrepancy against a 1e-4 tolerance.
CheckReport beta_identity_check(double gamma, double t, double T, double alpha,
                                double beta, double q);

}  // namespace fracgame

#endif  // FRACGAME_FRACCALC_HPP_
