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

#ifndef FRACGAME_DYNAMICS_HPP_
#define FRACGAME_DYNAMICS_HPP_

// Game data and the Hamiltonian.
//
// A GameDynamics bundles the right-hand side f, running cost chi, terminal
// cost sigma and the two finite control grids P (minimizer) and Q
// (maximizer), together with declared constants:
//
//   c_star:      ||f(t,x,u,v)|| <= c_star (1 + ||x||)            (growth)
//   lambda_star: ||f(t,x,..) - f(t,y,..)|| + |chi(t,x,..) - chi(t,y,..)|
//                  <= lambda_star ||x - y||                      (Lipschitz)
//
// Dynamics come from a fixed catalog (configs cannot carry code); every entry
// keeps its controls scalar and its min/max searches exact over the grids, so
// Hamiltonian values are bit-reproducible.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracgame/paths.hpp"
#include "fracgame/report.hpp"

namespace fracgame {

enum class SigmaKind {
  kCoordinate,  // first state coordinate at the horizon
  kNorm,        // Euclidean norm of the terminal state
};

class GameDynamics {
 public:
  // f = a y + b u + c v, chi = d y + e_u u + e_v v, n = 1.
  static GameDynamics linear_scalar(double a, double b, double c, double d,
                                    double e_u, double e_v, SigmaKind sigma,
                                    std::vector<double> p_grid,
                                    std::vector<double> q_grid);
  // f = u - v, chi = 0, sigma = |y(T)|, n = 1.
  static GameDynamics pursuit_1d(std::vector<double> p_grid,
                                 std::vector<double> q_grid);
  // f_i = a_i y_i + b_i u + c_i v componentwise, chi = 0, n = 2.
  static GameDynamics decoupled_2d(std::array<double, 2> a,
                                   std::array<double, 2> b,
                                   std::array<double, 2> c, SigmaKind sigma,
                                   std::vector<double> p_grid,
                                   std::vector<double> q_grid);

  const std::string& catalog_id() const { return catalog_id_; }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& p_grid() const { return p_grid_; }
  const std::vector<double>& q_grid() const { return q_grid_; }
  double c_star() const { return c_star_; }
  double lambda_star() const { return lambda_star_; }
  double sigma_lambda() const { return 1.0; }  // declared bound for sigma
  // Additively separated in (u, v): the Isaacs equality holds exactly.
  bool separable() const { return true; }
  SigmaKind sigma_kind() const { return sigma_kind_; }

  void f(double t, std::span<const double> x, double u, double v,
         std::span<double> out) const;
  double chi(double t, std::span<const double> x, double u, double v) const;
  double sigma_terminal(std::span<const double> xT) const;
  double sigma(const SampledPath& path) const;

 private:
  GameDynamics() = default;

  std::string catalog_id_;
  std::size_t dim_ = 1;
  std::vector<double> p_grid_;
  std::vector<double> q_grid_;
  double c_star_ = 0.0;
  double lambda_star_ = 0.0;
  SigmaKind sigma_kind_ = SigmaKind::kCoordinate;
  // Coefficients shared by the catalog families (unused entries stay 0).
  std::array<double, 2> a_{};   // state feedback per component
  std::array<double, 2> b_{};   // first-player gain per component
  std::array<double, 2> c_{};   // second-player gain per component
  double d_ = 0.0, e_u_ = 0.0, e_v_ = 0.0;  // running-cost coefficients
};

// One exact Hamiltonian evaluation H(t, x, s) = min_u max_v <s, f> + chi over
// the control grids; ties broken toward the lowest index.
struct HamiltonianEval {
  double value = 0.0;
  double argmin_u = 0.0;
  double argmax_v = 0.0;
  std::size_t argmin_index = 0;
  std::size_t argmax_index = 0;
  double isaacs_gap = 0.0;  // minmax - maxmin; >= 0 for every real matrix
};

HamiltonianEval hamiltonian(const GameDynamics& dyn, double t,
                            std::span<const double> x,
                            std::span<const double> s);

// Sampling plan shared by the assumption and Hamiltonian-property sweeps.
struct SampleSpec {
  std::size_t count = 200;   // random draws per check
  double t_max = 1.0;
  double x_radius = 2.0;     // states drawn from this ball
  double s_radius = 2.0;     // adjoint vectors drawn from this ball
  std::size_t path_cells = 64;  // grid for the sigma Lipschitz estimate
  double alpha = 0.5;           // order of the sampled comparison paths
  std::uint64_t seed = 1;
};

// Empirical checks of the standing assumptions:
//   growth          max ||f|| / (1 + ||x||)            vs declared c_star
//   lipschitz       max (|df| + |dchi|) / ||x - y||    vs declared lambda_star
//   isaacs          max (minmax - maxmin) over samples vs 0
//   sigma_lipschitz max |dsigma| / (terminal + L1 gap) vs declared bound
// The two Lipschitz estimates are sampled lower bounds of the true constants
// and are reported as such.
std::vector<CheckReport> validate_assumptions(const GameDynamics& dyn,
                                              const SampleSpec& spec);

// Hamiltonian regularity over samples:
//   |H(t,x,s) - H(t,x,r)| <= c_star (1 + ||x||) ||s - r||
//   |H(t,x,s) - H(t,y,s)| <= lambda_star (1 + ||s||) ||x - y||
std::vector<CheckReport> hamiltonian_properties(const GameDynamics& dyn,
                                                const SampleSpec& spec);

}  // namespace fracgame

#endif  // FRACGAME_DYNAMICS_HPP_
