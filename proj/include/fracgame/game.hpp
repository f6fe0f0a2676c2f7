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

#ifndef FRACGAME_GAME_HPP_
#define FRACGAME_GAME_HPP_

// Trajectories, costs and brute-force game values.
//
// Controls are piecewise constant on a coarse decision partition of [t, T]
// whose breakpoints are nodes of the fine simulation grid.  A trajectory is
// produced by the explicit fractional Euler scheme on the Volterra form
//
//   y_{i+1} = x0 + sum_{j <= i} w_{i+1,j} f(tau_j, y_j, u(tau_j), v(tau_j)),
//
// with the exact kernel cell moments w; the scheme is exact whenever f does
// not read the state.  The returned path stores the realized f samples as its
// derivative, so it plugs into every path operation downstream.
//
// Game values are computed by exhaustive search over the scenario tree: at
// each decision step the minimizer commits first for the upper value and
// second for the lower one.  Both values are computed on the same tree, the
// bracket upper - lower being itself a reported diagnostic (it closes under
// the Isaacs condition and a cost without kinks in the reachable tube).

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracgame/dynamics.hpp"
#include "fracgame/paths.hpp"

namespace fracgame {

// Piecewise-constant control pair on a decision partition: u and v hold one
// grid value per decision cell [d_k, d_{k+1}).
struct ControlSchedule {
  std::vector<double> decision_times;  // t = d_0 < ... < d_K = end
  std::vector<double> u;               // size K, values from P
  std::vector<double> v;               // size K, values from Q
};

// Explicit fractional Euler under a control schedule.  The result lives on
// `fine_grid`, agrees with `base` on [0, t] (bit-for-bit when base lives on
// the same grid), follows the controls on [t, d_K] and is frozen beyond the
// last decision time.  Every decision time and every base node up to t must
// be a node of the fine grid.  Throws DivergenceError if the state norm
// reaches 1e6 (the growth condition makes genuine solutions bounded, so a
// breach indicates a configuration error rather than a path to continue).
SampledPath simulate(const GameDynamics& dyn, const SampledPath& base,
                     double t, const ControlSchedule& sched,
                     const std::shared_ptr<const Grid>& fine_grid);

// Terminal cost plus the running cost integrated from t to the end of the
// schedule, trapezoid rule per decision cell (so control jumps at decision
// boundaries cost no accuracy).
double cost(const GameDynamics& dyn, const SampledPath& traj, double t,
            const ControlSchedule& sched);

enum class Commitment {
  kUpper,  // minimizer commits first at every step
  kLower,  // maximizer commits first at every step
};

// Exhaustive game values on the scenario tree with K decision steps.
struct ValueTree {
  std::vector<double> decision_times;  // K+1 nodes from t to T
  std::shared_ptr<const Grid> fine_grid;
  Commitment mode = Commitment::kUpper;
  double upper_value = 0.0;
  double lower_value = 0.0;
  ControlSchedule upper_witness;
  ControlSchedule lower_witness;
  std::size_t leaf_count = 0;

  double value() const {
    return mode == Commitment::kUpper ? upper_value : lower_value;
  }
  nlohmann::json to_json() const;
};

// Upper and lower values from (t, base) by exhaustive backward recursion over
// all control combinations; `mode` selects which commitment order the
// `value()` accessor and the witness replays favor, but both values are
// always computed on the same tree.  The decision partition splits the fine
// nodes of [t, T] into K equal runs (their count must divide evenly).
// Refuses with BudgetError when (|P| |Q|)^K exceeds 1e7 branches.
// At t = T the tree degenerates to the terminal cost of `base`.
ValueTree value(const GameDynamics& dyn, const SampledPath& base, double t,
                std::size_t K, Commitment mode);

// One-step consistency of the backward recursion: the absolute difference
// between value(t) and the best first step against a freshly recomputed
// continuation value at t + delta, maximized over both commitment orders.
// An exact recursion leaves only floating-point associativity, <= 1e-12.
double dpp_residual(const GameDynamics& dyn, const SampledPath& base, double t,
                    std::size_t K);

enum class MinimaxSign {
  kPlus,   // descent witness: phi(tau,y) - Int(<s, dy> - H) <= phi(t,x)
  kMinus,  // ascent witness: same expression >= phi(t,x)
};

struct WitnessResult {
  SampledPath path;  // member of Y_*(t, base) chosen greedily
  double residual;   // worst violation over tau in [t, T]; <= 0 verifies
};

// Greedy construction of the minimax-property witness: cell by cell from t,
// the derivative is chosen from the realized vectors f(tau, y, u, v) over the
// control grids plus the zero vector, clipped to the admissible bound
// c_star (1 + ||y||), so as to extremize the running quantity
//
//   phi(tau, y) - Int_t^tau (<s, (d^alpha y)(xi)> - H(xi, y(xi), s)) dxi.
//
// Returns the chosen path and the worst violation of the requested
// inequality; nonpositive residual means the property is verified along the
// constructed witness.
WitnessResult minimax_witness(const GameDynamics& dyn,
                              const PathFunctional& phi, double t,
                              const SampledPath& base,
                              std::span<const double> s, MinimaxSign sign);

// CSV rendering of a trajectory: one row per grid node with the time, state
// components and stored derivative components (last row repeats the final
// cell's derivative).
std::string trajectory_csv(const SampledPath& path);

}  // namespace fracgame

#endif  // FRACGAME_GAME_HPP_
