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

#ifndef FRACGAME_PATHS_HPP_
#define FRACGAME_PATHS_HPP_

// The sampled path space.
//
// A path is stored by its *fractional derivative*, not by state samples: an
// initial point x(0) together with one derivative vector per grid cell, the
// derivative being piecewise constant.  The state is then
//
//   x(tau) = x(0) + (1/Gamma(alpha)) Int_0^tau f(xi) (tau - xi)^(alpha-1) dxi,
//
// and because f is exactly piecewise constant the integral evaluates in
// closed form through cell moments.  Reconstruction is therefore an identity,
// not a discretization: checks downstream measure genuine inequality margins
// rather than representation error.
//
// The frozen continuation of a path past a node t keeps the history on [0, t]
// and sets the derivative to zero afterwards — the inertial forecast of a
// fractional system.  Extensions replace the derivative tail instead.  All
// times handed to extend/freeze must be grid nodes; nothing is rounded.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "fracgame/fraccalc.hpp"
#include "fracgame/util.hpp"

namespace fracgame {

class SampledPath {
 public:
  // `caputo` is row-major, one dim-sized block per grid cell.  Node states
  // are computed once here; the path is immutable afterwards.
  SampledPath(double alpha, std::vector<double> x0,
              std::shared_ptr<const Grid> grid, std::vector<double> caputo);

  double alpha() const { return alpha_; }
  std::size_t dim() const { return x0_.size(); }
  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }

  std::span<const double> x0() const { return {x0_.data(), x0_.size()}; }
  // Stored derivative on cell j.
  std::span<const double> caputo_cell(std::size_t j) const {
    return {caputo_.data() + j * dim(), dim()};
  }
  const std::vector<double>& caputo_samples() const { return caputo_; }
  // Exact state at grid node i (precomputed).
  std::span<const double> state(std::size_t i) const {
    return {states_.data() + i * dim(), dim()};
  }
  const std::vector<double>& states() const { return states_; }

  // Exact state at any tau in [0, T] (closed-form cell moments, including the
  // partial last cell).  Throws DomainError outside [0, T].
  std::vector<double> eval(double tau) const;
  // Stored derivative at tau (cell lookup; tau = T maps to the last cell).
  std::vector<double> caputo_at(double tau) const;

  // JSON object {alpha, x0, nodes, caputo}; doubles round-trip bit-exactly.
  nlohmann::json to_json() const;
  static SampledPath from_json(const nlohmann::json& j);

 private:
  double alpha_;
  std::vector<double> x0_;
  std::shared_ptr<const Grid> grid_;
  std::vector<double> caputo_;  // cells x dim, row-major
  std::vector<double> states_;  // nodes x dim, row-major

  void compute_states();
};

// Member of Y(t, x): agrees with `p` on [0, t] exactly, derivative on the
// cells of [t, T] replaced by `tail` (row-major, one block per remaining
// cell).  t must be a node.
SampledPath extend(const SampledPath& p, double t,
                   const std::vector<double>& tail);

// The frozen continuation a(.|t, p): equal to p on [0, t], zero derivative
// on (t, T].  t = 0 yields the constant path at x(0); t = T returns p
// unchanged.  When the tail is already zero the input is returned as-is, so
// freezing is idempotent bit-for-bit.
SampledPath freeze(const SampledPath& p, double t);

// Uniform norm and distance, approximated by the max over grid nodes (the
// paths are alpha-Hölder, and grids in use are dense enough that acceptance
// tolerances absorb the within-cell gap).
double sup_norm(const SampledPath& p);
double sup_distance(const SampledPath& a, const SampledPath& b);

// Membership in the compact set X_k: initial point bounded by k and the
// derivative bounded by the k-scaled growth envelope at every cell.
struct XkMembership {
  int k = 0;
  double c_star = 0.0;
  bool verdict = false;
  // max over cells of ||f_j|| - k c_* (1 + ||x(tau_j)||); negative means the
  // derivative bound holds with room to spare.
  double worst_margin = 0.0;
};

XkMembership xk_check(const SampledPath& p, int k, double c_star);

// A non-anticipative functional of (tau, path); the path handed in is frozen
// past tau, so evaluations may read the whole object.
using PathFunctional = std::function<double(double, const SampledPath&)>;

// Random member of X_k built cell by cell: the derivative on each cell is
// drawn inside `fill` times the admissible envelope at the cell's left node,
// so membership holds by construction.  Deterministic given the rng state.
SampledPath random_xk_path(double alpha, std::shared_ptr<const Grid> grid,
                           std::size_t dim, int k, double c_star,
                           TrialRng& rng, double fill = 0.9);

}  // namespace fracgame

#endif  // FRACGAME_PATHS_HPP_
