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
#include <functional>
#include <vector>

#include <doctest.h>

#include "fracgame/errors.hpp"
#include "fracgame/fraccalc.hpp"
#include "fracgame/util.hpp"

namespace fracgame {
namespace {

GameDynamics zero_dynamics() {
  return GameDynamics::linear_scalar(0, 0, 0, 0, 0, 0, SigmaKind::kCoordinate,
                                     {0.0}, {0.0});
}

SampledPath constant_path(double alpha, double x0, std::size_t cells) {
  const auto grid = std::make_shared<const Grid>(Grid::uniform(cells, 1.0));
  return SampledPath(alpha, {x0}, grid, std::vector<double>(cells, 0.0));
}

ControlSchedule single_step(double t, double end, double u, double v) {
  return ControlSchedule{{t, end}, {u}, {v}};
}

TEST_CASE("zero dynamics reproduce the frozen continuation bit for bit") {
  const auto grid = std::make_shared<const Grid>(Grid::uniform(32, 1.0));
  TrialRng rng(3, "game_freeze", 0);
  const SampledPath base = random_xk_path(0.5, grid, 1, 1, 1.0, rng);
  const double t = grid->node(8);
  const GameDynamics dyn = zero_dynamics();
  const SampledPath traj =
      simulate(dyn, base, t, single_step(t, 1.0, 0.0, 0.0), grid);
  const SampledPath frozen = freeze(base, t);
  CHECK(traj.states() == frozen.states());
  CHECK(traj.caputo_samples() == frozen.caputo_samples());
}

TEST_CASE("linear growth converges to the Mittag-Leffler solution") {
  // d^{1/2} y = y, y(0) = 1, so y(1) = E_{1/2}(1).
  const GameDynamics dyn = GameDynamics::linear_scalar(
      1.0, 0.0, 0.0, 0, 0, 0, SigmaKind::kCoordinate, {0.0}, {0.0});
  const double exact = mittag_leffler(0.5, 1.0, 1e-12);
  double previous_err = 0.0;
  for (std::size_t cells : {128, 256, 512, 1024}) {
    const auto grid = std::make_shared<const Grid>(Grid::uniform(cells, 1.0));
    const SampledPath base(0.5, {1.0}, grid,
                           std::vector<double>(cells, 0.0));
    const SampledPath traj =
        simulate(dyn, base, 0.0, single_step(0.0, 1.0, 0.0, 0.0), grid);
    const double err =
        std::abs(traj.state(cells)[0] - exact) / exact;
    if (cells > 128) CHECK(err < previous_err);
    if (cells == 1024) CHECK(err <= 0.05);
    previous_err = err;
  }
}

TEST_CASE("state-independent dynamics are integrated exactly") {
  for (double alpha : {0.3, 0.5, 1.0}) {
    const GameDynamics dyn = GameDynamics::linear_scalar(
        0.0, 1.0, 0.0, 0, 0, 0, SigmaKind::kCoordinate, {0.7}, {0.0});
    const auto grid = std::make_shared<const Grid>(Grid::uniform(64, 1.0));
    const SampledPath base(alpha, {0.25}, grid,
                           std::vector<double>(64, 0.0));
    const SampledPath traj =
        simulate(dyn, base, 0.0, single_step(0.0, 1.0, 0.7, 0.0), grid);
    const double gamma = gamma_fn(alpha + 1.0);
    for (std::size_t i = 0; i <= 64; ++i) {
      const double expected =
          0.25 + 0.7 * std::pow(grid->node(i), alpha) / gamma;
      CHECK(traj.state(i)[0] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("cost reduces to the terminal cost when the running cost vanishes") {
  const GameDynamics dyn = zero_dynamics();
  const SampledPath base = constant_path(0.5, 1.5, 16);
  const ControlSchedule sched = single_step(0.0, 1.0, 0.0, 0.0);
  const SampledPath traj = simulate(dyn, base, 0.0, sched, base.grid_ptr());
  CHECK(cost(dyn, traj, 0.0, sched) == dyn.sigma_terminal(traj.state(16)));
}

TEST_CASE("unit running cost integrates to the interval length") {
  // chi = u with the only control u = 1.
  const GameDynamics dyn = GameDynamics::linear_scalar(
      0, 0, 0, 0.0, 1.0, 0.0, SigmaKind::kCoordinate, {1.0}, {0.0});
  const SampledPath base = constant_path(0.5, -0.5, 16);
  const double t = base.grid().node(4);
  const ControlSchedule sched = single_step(t, 1.0, 1.0, 0.0);
  const SampledPath traj = simulate(dyn, base, t, sched, base.grid_ptr());
  const double total = cost(dyn, traj, t, sched);
  CHECK(total - dyn.sigma_terminal(traj.state(16)) ==
        doctest::Approx(1.0 - t).epsilon(1e-14));
}

TEST_CASE("running-cost trapezoid converges at second order off the origin") {
  // chi = y with y = x0 + 0.7 tau^alpha / Gamma(1 + alpha); integrate from
  // t = 1/4 where the integrand is smooth.
  const double alpha = 0.5, u = 0.7, x0 = 0.25;
  const GameDynamics dyn = GameDynamics::linear_scalar(
      0.0, 1.0, 0.0, 1.0, 0.0, 0.0, SigmaKind::kCoordinate, {u}, {0.0});
  const double exact_integral =
      x0 * 0.75 + u * (1.0 - std::pow(0.25, 1.0 + alpha)) /
                      gamma_fn(2.0 + alpha);
  std::vector<double> errs;
  for (std::size_t cells : {64, 128, 256}) {
    const auto grid = std::make_shared<const Grid>(Grid::uniform(cells, 1.0));
    const SampledPath base(alpha, {x0}, grid,
                           std::vector<double>(cells, 0.0));
    const double t = 0.25;
    ControlSchedule sched = single_step(0.0, 1.0, u, 0.0);
    const SampledPath traj = simulate(dyn, base, 0.0, sched, grid);
    ControlSchedule tail = single_step(t, 1.0, u, 0.0);
    const double integral = cost(dyn, traj, t, tail) -
                            dyn.sigma_terminal(traj.state(cells));
    errs.push_back(std::abs(integral - exact_integral));
  }
  CHECK(errs[0] / errs[1] > 3.0);
  CHECK(errs[1] / errs[2] > 3.0);
  CHECK(errs[2] < 1e-6);
}

TEST_CASE("value of a control-free game is the frozen terminal cost") {
  const GameDynamics dyn = zero_dynamics();
  const auto grid = std::make_shared<const Grid>(Grid::uniform(16, 1.0));
  TrialRng rng(5, "game_value_frozen", 0);
  const SampledPath base = random_xk_path(0.5, grid, 1, 1, 1.0, rng);
  const double t = grid->node(8);
  const ValueTree tree = value(dyn, base, t, 2, Commitment::kUpper);
  const double expected = dyn.sigma(freeze(base, t));
  CHECK(tree.upper_value == doctest::Approx(expected).epsilon(1e-13));
  CHECK(tree.lower_value == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("constant running cost shifts the value by the interval length") {
  const GameDynamics dyn = GameDynamics::linear_scalar(
      0, 0, 0, 0.0, 2.5, 0.0, SigmaKind::kCoordinate, {1.0}, {0.0});
  const auto grid = std::make_shared<const Grid>(Grid::uniform(16, 1.0));
  const SampledPath base(0.5, {0.5}, grid, std::vector<double>(16, 0.0));
  const double t = grid->node(4);
  const ValueTree tree = value(dyn, base, t, 3, Commitment::kUpper);
  const double expected = dyn.sigma(freeze(base, t)) + 2.5 * (1.0 - t);
  CHECK(tree.upper_value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(tree.lower_value == doctest::Approx(expected).epsilon(1e-12));
}

// Brute-force per-step commitment recursion via fresh simulations, sharing no
// code with the library's tree evaluation.
double brute_value(const GameDynamics& dyn, const SampledPath& base, double t,
                   const std::vector<double>& times, ControlSchedule& sched,
                   std::size_t k, bool upper) {
  if (k + 1 == times.size()) {
    const SampledPath traj = simulate(dyn, base, t, sched, base.grid_ptr());
    return cost(dyn, traj, t, sched);
  }
  const std::vector<double>& outer = upper ? dyn.p_grid() : dyn.q_grid();
  const std::vector<double>& inner = upper ? dyn.q_grid() : dyn.p_grid();
  double outer_best = 0.0;
  bool outer_first = true;
  for (double a : outer) {
    double inner_best = 0.0;
    bool inner_first = true;
    for (double b : inner) {
      sched.u.push_back(upper ? a : b);
      sched.v.push_back(upper ? b : a);
      const double val = brute_value(dyn, base, t, times, sched, k + 1, upper);
      sched.u.pop_back();
      sched.v.pop_back();
      const bool better = upper ? val > inner_best : val < inner_best;
      if (inner_first || better) inner_best = val;
      inner_first = false;
    }
    const bool better = upper ? inner_best < outer_best : inner_best > outer_best;
    if (outer_first || better) outer_best = inner_best;
    outer_first = false;
  }
  return outer_best;
}

TEST_CASE("tree values match a from-scratch commitment recursion") {
  const GameDynamics dyn = GameDynamics::pursuit_1d({-1.0, 0.0, 1.0},
                                                    {-1.0, 0.0, 1.0});
  const SampledPath base = constant_path(0.5, 4.0, 16);
  const ValueTree tree = value(dyn, base, 0.0, 2, Commitment::kUpper);
  ControlSchedule sched;
  sched.decision_times = tree.decision_times;
  const double upper_ref =
      brute_value(dyn, base, 0.0, tree.decision_times, sched, 0, true);
  const double lower_ref =
      brute_value(dyn, base, 0.0, tree.decision_times, sched, 0, false);
  CHECK(tree.upper_value == doctest::Approx(upper_ref).epsilon(1e-12));
  CHECK(tree.lower_value == doctest::Approx(lower_ref).epsilon(1e-12));
  CHECK(tree.upper_value >= tree.lower_value);
}

TEST_CASE("separable games close the bracket away from the cost kink") {
  // Pursuit from x0 = 4: the reachable tube stays positive, the terminal
  // cost is effectively linear, and per-step commitment order cannot matter.
  const GameDynamics pursuit = GameDynamics::pursuit_1d({-1.0, 0.0, 1.0},
                                                        {-1.0, 0.0, 1.0});
  const SampledPath base4 = constant_path(0.5, 4.0, 16);
  const ValueTree tp = value(pursuit, base4, 0.0, 2, Commitment::kUpper);
  CHECK(tp.upper_value >= tp.lower_value);
  CHECK(tp.upper_value - tp.lower_value <= 1e-9);

  // A fully linear instance closes the bracket regardless of the base state.
  const GameDynamics lin = GameDynamics::linear_scalar(
      0.5, 1.0, 1.0, 0.3, 0.2, -0.4, SigmaKind::kCoordinate,
      {-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0});
  const SampledPath base0 = constant_path(0.5, 0.0, 16);
  const ValueTree tl = value(lin, base0, 0.0, 2, Commitment::kUpper);
  CHECK(tl.upper_value >= tl.lower_value);
  CHECK(tl.upper_value - tl.lower_value <= 1e-9);
}

TEST_CASE("pursuit from the origin has a genuine commitment bracket") {
  // Inside the kink region of |x(T)| the discrete upper and lower values
  // differ by the order of one step's reachable radius; the bracket is the
  // documented diagnostic, not an error.
  const GameDynamics dyn = GameDynamics::pursuit_1d({-1.0, 0.0, 1.0},
                                                    {-1.0, 0.0, 1.0});
  const SampledPath base = constant_path(0.5, 0.0, 16);
  const ValueTree tree = value(dyn, base, 0.0, 2, Commitment::kUpper);
  CHECK(tree.upper_value > tree.lower_value + 0.01);
  CHECK(tree.lower_value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("backward recursion is self-consistent") {
  const GameDynamics lin = GameDynamics::linear_scalar(
      0.5, 1.0, 1.0, 0.3, 0.2, -0.4, SigmaKind::kCoordinate, {-1.0, 1.0},
      {-1.0, 1.0});
  const SampledPath base16 = constant_path(0.5, 1.0, 16);
  CHECK(dpp_residual(lin, base16, 0.0, 2) <= 1e-12);

  const GameDynamics pursuit = GameDynamics::pursuit_1d({-1.0, 1.0},
                                                        {-1.0, 1.0});
  const SampledPath base24 = constant_path(0.5, 0.5, 24);
  CHECK(dpp_residual(pursuit, base24, 0.0, 3) <= 1e-12);

  const SampledPath mid = constant_path(0.5, 2.0, 16);
  CHECK(dpp_residual(zero_dynamics(), mid, mid.grid().node(8), 2) == 0.0);
}

TEST_CASE("values ignore the base path beyond the start time") {
  const GameDynamics dyn = GameDynamics::pursuit_1d({-1.0, 1.0}, {-1.0, 1.0});
  const auto grid = std::make_shared<const Grid>(Grid::uniform(16, 1.0));
  TrialRng rng(9, "game_nonanticipative", 0);
  const SampledPath base = random_xk_path(0.5, grid, 1, 2, dyn.c_star(), rng);
  const double t = grid->node(8);
  std::vector<double> tail(8);
  for (double& c : tail) c = rng.uniform(-1.0, 1.0);
  const SampledPath other = extend(base, t, tail);
  const ValueTree a = value(dyn, base, t, 2, Commitment::kUpper);
  const ValueTree b = value(dyn, other, t, 2, Commitment::kUpper);
  CHECK(a.upper_value == b.upper_value);
  CHECK(a.lower_value == b.lower_value);
}

TEST_CASE("value at the horizon is the terminal cost of the path itself") {
  const GameDynamics dyn = GameDynamics::pursuit_1d({-1.0, 1.0}, {-1.0, 1.0});
  const auto grid = std::make_shared<const Grid>(Grid::uniform(16, 1.0));
  TrialRng rng(13, "game_horizon", 0);
  const SampledPath base = random_xk_path(0.5, grid, 1, 1, dyn.c_star(), rng);
  const ValueTree tree = value(dyn, base, 1.0, 4, Commitment::kLower);
  CHECK(tree.upper_value == dyn.sigma(base));
  CHECK(tree.lower_value == dyn.sigma(base));
  CHECK(tree.leaf_count == 1);
}

TEST_CASE("tree search refuses oversized budgets and misaligned steps") {
  std::vector<double> big(10);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = -1.0 + 0.2 * double(i);
  const GameDynamics dyn = GameDynamics::pursuit_1d(big, big);
  const SampledPath base = constant_path(0.5, 3.0, 64);
  CHECK_THROWS_AS(value(dyn, base, 0.0, 8, Commitment::kUpper), BudgetError);
  CHECK_THROWS_AS(value(dyn, base, 0.0, 5, Commitment::kUpper), DomainError);
  CHECK_THROWS_AS(value(dyn, base, 0.13, 2, Commitment::kUpper),
                  AlignmentError);
  CHECK_THROWS_AS(value(dyn, base, 0.0, 0, Commitment::kUpper), DomainError);
}

TEST_CASE("simulate validates schedules and aborts divergent branches") {
  const GameDynamics dyn = GameDynamics::pursuit_1d({-1.0, 1.0}, {-1.0, 1.0});
  const SampledPath base = constant_path(0.5, 1.0, 16);
  const auto grid = base.grid_ptr();
  CHECK_THROWS_AS(
      simulate(dyn, base, 0.0, single_step(0.0, 1.0, 0.5, 1.0), grid),
      DomainError);  // 0.5 is not a control point
  ControlSchedule bad = single_step(0.0, 1.0, 1.0, 1.0);
  bad.u.clear();
  CHECK_THROWS_AS(simulate(dyn, base, 0.0, bad, grid), DomainError);
  CHECK_THROWS_AS(
      simulate(dyn, base, 0.1, single_step(0.1, 1.0, 1.0, 1.0), grid),
      AlignmentError);

  const GameDynamics stiff = GameDynamics::linear_scalar(
      30.0, 0.0, 0.0, 0, 0, 0, SigmaKind::kCoordinate, {0.0}, {0.0});
  const SampledPath seed = constant_path(0.5, 1.0, 64);
  CHECK_THROWS_AS(simulate(stiff, seed, 0.0, single_step(0.0, 1.0, 0.0, 0.0),
                           seed.grid_ptr()),
                  DivergenceError);
}

TEST_CASE("witness search returns zero residual for constant functionals") {
  const GameDynamics dyn = zero_dynamics();
  const SampledPath base = constant_path(0.5, 0.5, 16);
  const PathFunctional phi = [](double, const SampledPath&) { return 3.25; };
  const std::vector<double> s{0.7};
  const WitnessResult plus =
      minimax_witness(dyn, phi, 0.0, base, s, MinimaxSign::kPlus);
  CHECK(plus.residual == 0.0);
  // The only admissible derivative is zero, so the witness is frozen.
  CHECK(plus.path.states() == freeze(base, 0.0).states());
}

TEST_CASE("descent and ascent witnesses mirror under negation") {
  const GameDynamics dyn = GameDynamics::pursuit_1d({-1.0, 0.0, 1.0},
                                                    {-1.0, 0.0, 1.0});
  const SampledPath base = constant_path(0.5, 1.0, 16);
  const PathFunctional phi = [](double, const SampledPath& p) {
    return p.eval(p.grid().T())[0];
  };
  const PathFunctional neg_phi = [&phi](double tau, const SampledPath& p) {
    return -phi(tau, p);
  };
  const std::vector<double> s{0.8};
  const std::vector<double> ns{-0.8};
  const WitnessResult plus =
      minimax_witness(dyn, phi, 0.25, base, s, MinimaxSign::kPlus);
  const WitnessResult minus =
      minimax_witness(dyn, neg_phi, 0.25, base, ns, MinimaxSign::kMinus);
  CHECK(plus.residual == minus.residual);
  CHECK(plus.path.caputo_samples() == minus.path.caputo_samples());
}

TEST_CASE("witness verifies the descent property for a control-free value") {
  // With f = 0 the trajectory set is a single frozen path and the value
  // functional integrates chi along it; the descent property then holds with
  // equality along the witness, up to quadrature-splitting roundoff.
  const GameDynamics dyn = GameDynamics::linear_scalar(
      0.0, 0.0, 0.0, 1.0, 0.5, 0.25, SigmaKind::kCoordinate, {-1.0, 1.0},
      {-1.0, 1.0});
  const double m = -0.5 + 0.25;  // optimized control part of chi
  const PathFunctional phi = [&](double tau, const SampledPath& p) {
    const SampledPath frozen = freeze(p, tau);
    const Grid& grid = frozen.grid();
    double integral = 0.0;
    for (std::size_t i = grid.index_of(tau); i + 1 < grid.num_nodes(); ++i) {
      const double h = grid.node(i + 1) - grid.node(i);
      integral += 0.5 * h *
                  ((frozen.state(i)[0] + m) + (frozen.state(i + 1)[0] + m));
    }
    return frozen.state(grid.num_nodes() - 1)[0] + integral;
  };
  const auto grid = std::make_shared<const Grid>(Grid::uniform(32, 1.0));
  TrialRng rng(21, "game_witness_value", 0);
  const SampledPath base = random_xk_path(0.5, grid, 1, 1, dyn.c_star(), rng);
  for (double s0 : {-1.0, 0.0, 2.0}) {
    const std::vector<double> s{s0};
    const WitnessResult res =
        minimax_witness(dyn, phi, grid->node(8), base, s, MinimaxSign::kPlus);
    CHECK(res.residual <= 1e-10);
  }
}

TEST_CASE("greedy witness matches exhaustive search on a small tree") {
  // Asymmetric pursuit grids give a nonzero (state-independent) Hamiltonian
  // drift, so the optimal residual is genuinely positive; the scored
  // functional stays linear in the derivative samples with per-cell
  // coefficients, making the greedy choice provably optimal.  An exhaustive
  // sweep over all candidate tails must agree.
  const GameDynamics dyn = GameDynamics::pursuit_1d({0.5, 1.0}, {-0.25});
  const auto grid = std::make_shared<const Grid>(Grid::uniform(4, 1.0));
  const SampledPath base(0.5, {0.6}, grid, std::vector<double>(4, 0.0));
  const PathFunctional phi = [](double, const SampledPath& p) {
    return p.eval(p.grid().T())[0];
  };
  const std::vector<double> s{1.0};
  const WitnessResult greedy =
      minimax_witness(dyn, phi, 0.0, base, s, MinimaxSign::kPlus);

  // Candidate values of u - v over the grids, plus rest.
  const std::vector<double> candidates{0.75, 1.25, 0.0};
  double best = 0.0;
  bool first = true;
  std::vector<double> caputo(4, 0.0);
  const double phi0 = phi(0.0, SampledPath(0.5, {0.6}, grid, caputo));
  for (double c0 : candidates) {
    for (double c1 : candidates) {
      for (double c2 : candidates) {
        for (double c3 : candidates) {
          const std::vector<double> tail{c0, c1, c2, c3};
          double integral = 0.0;
          double worst = 0.0;
          for (std::size_t j = 0; j < 4; ++j) {
            std::fill(caputo.begin(), caputo.end(), 0.0);
            std::copy(tail.begin(), tail.begin() + j + 1, caputo.begin());
            const SampledPath partial(0.5, {0.6}, grid, caputo);
            const double h = grid->node(j + 1) - grid->node(j);
            const double h_left =
                hamiltonian(dyn, grid->node(j), partial.state(j), s).value;
            const double h_right =
                hamiltonian(dyn, grid->node(j + 1), partial.state(j + 1), s)
                    .value;
            integral = integral + h * (s[0] * tail[j]) -
                       0.5 * h * (h_left + h_right);
            const double score = phi(grid->node(j + 1), partial) - integral;
            worst = std::max(worst, score - phi0);
          }
          if (first || worst < best) best = worst;
          first = false;
        }
      }
    }
  }
  CHECK(greedy.residual == doctest::Approx(best).epsilon(1e-12));
  CHECK(greedy.residual >= best - 1e-12);
  CHECK(greedy.residual > 0.05);  // the drift makes a zero residual impossible
}

TEST_CASE("witness paths remain inside the admissible compact set") {
  const GameDynamics dyn = GameDynamics::pursuit_1d({-1.0, 1.0}, {-1.0, 1.0});
  const auto grid = std::make_shared<const Grid>(Grid::uniform(16, 1.0));
  TrialRng rng(17, "game_witness_xk", 0);
  const SampledPath base = random_xk_path(0.5, grid, 1, 1, dyn.c_star(), rng);
  const PathFunctional phi = [](double, const SampledPath& p) {
    return p.eval(p.grid().T())[0];
  };
  const std::vector<double> s{-0.4};
  const WitnessResult res =
      minimax_witness(dyn, phi, grid->node(4), base, s, MinimaxSign::kMinus);
  CHECK(xk_check(res.path, 1, dyn.c_star()).verdict);
}

TEST_CASE("game values obey the composite Lipschitz bound empirically") {
  const GameDynamics dyn = GameDynamics::pursuit_1d({-1.0, 1.0}, {-1.0, 1.0});
  const auto grid = std::make_shared<const Grid>(Grid::uniform(16, 1.0));
  const double alpha = 0.5;
  const double t = grid->node(8);
  TrialRng rng(29, "game_condition_L", 0);
  double fitted = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SampledPath x = random_xk_path(alpha, grid, 1, 2, dyn.c_star(), rng);
    const SampledPath y = random_xk_path(alpha, grid, 1, 2, dyn.c_star(), rng);
    const SampledPath ax = freeze(x, t);
    const SampledPath ay = freeze(y, t);
    std::vector<double> gap(grid->num_nodes());
    for (std::size_t i = 0; i < gap.size(); ++i) {
      gap[i] = vec_dist(ax.state(i), ay.state(i));
    }
    const double integral = singular_integral(*grid, gap, 1.0 - alpha);
    const double denom = gap.back() + integral;
    if (denom < 1e-12) continue;
    const double vx = value(dyn, x, t, 2, Commitment::kUpper).upper_value;
    const double vy = value(dyn, y, t, 2, Commitment::kUpper).upper_value;
    fitted = std::max(fitted, std::abs(vx - vy) / denom);
  }
  MESSAGE("fitted composite Lipschitz constant: ", fitted);
  CHECK(fitted < 10.0);
  CHECK(fitted > 0.0);
}

TEST_CASE("value trees serialize with witnesses and export trajectories") {
  const GameDynamics dyn = GameDynamics::pursuit_1d({-1.0, 1.0}, {-1.0, 1.0});
  const SampledPath base = constant_path(0.5, 3.0, 16);
  const ValueTree tree = value(dyn, base, 0.0, 2, Commitment::kUpper);
  const nlohmann::json j = tree.to_json();
  CHECK(j["upper_value"].get<double>() == tree.upper_value);
  CHECK(j["lower_value"].get<double>() == tree.lower_value);
  CHECK(j["bracket"].get<double>() ==
        tree.upper_value - tree.lower_value);
  CHECK(j["leaf_count"].get<std::size_t>() == 16);
  CHECK(j["decision_times"].size() == 3);
  CHECK(j["upper_witness"]["u"].size() == 2);

  const SampledPath traj = simulate(dyn, base, 0.0, tree.upper_witness,
                                    base.grid_ptr());
  const double witness_cost = cost(dyn, traj, 0.0, tree.upper_witness);
  CHECK(witness_cost == doctest::Approx(tree.upper_value).epsilon(1e-12));

  const std::string csv = trajectory_csv(traj);
  CHECK(csv.rfind("time,x0,caputo0\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 18);  // header + 17 nodes
}

}  // namespace
}  // namespace fracgame
