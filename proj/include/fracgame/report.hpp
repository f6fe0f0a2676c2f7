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

#ifndef FRACGAME_REPORT_HPP_
#define FRACGAME_REPORT_HPP_

#include <string>
#include <vector>

#include <json.hpp>

namespace fracgame {

// Structured pass/fail record for one numerical check.
//
// Margin convention: `margin` is the signed distance from the failure
// boundary, so `pass == (margin >= 0)` always.
//   * inequality checks lhs <= rhs:   margin = rhs - lhs + tol
//   * identity checks  lhs == rhs:    margin = tol - |lhs - rhs| (possibly
//     relative; each producer documents its normalization)
// `inputs_digest` identifies the concrete inputs of this one trial;
// `scenario` identifies the run configuration that produced it (filled in by
// the orchestration layer before serialization).
struct CheckReport {
  std::string lemma;          // stable identifier of the checked statement
  std::string inputs_digest;  // 16-hex-digit digest of the trial inputs
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;           // free-form context (witness, parameters, ...)
  std::string scenario;       // digest of the producing scenario config

  // Convenience constructors for the two margin conventions.
  static CheckReport inequality(std::string lemma, std::string inputs_digest,
                                double lhs, double rhs, double tol,
                                std::string note = "");
  static CheckReport identity(std::string lemma, std::string inputs_digest,
                              double lhs, double rhs, double tol,
                              std::string note = "");

  nlohmann::json to_json() const;
};

inline CheckReport CheckReport::inequality(std::string lemma,
                                           std::string inputs_digest,
                                           double lhs, double rhs, double tol,
                                           std::string note) {
  CheckReport r;
  r.lemma = std::move(lemma);
  r.inputs_digest = std::move(inputs_digest);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  r.margin = rhs - lhs + tol;
  r.pass = r.margin >= 0.0;
  r.note = std::move(note);
  return r;
}

inline CheckReport CheckReport::identity(std::string lemma,
                                         std::string inputs_digest, double lhs,
                                         double rhs, double tol,
                                         std::string note) {
  CheckReport r;
  r.lemma = std::move(lemma);
  r.inputs_digest = std::move(inputs_digest);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tol = tol;
  double diff = lhs - rhs;
  if (diff < 0) diff = -diff;
  r.margin = tol - diff;
  r.pass = r.margin >= 0.0;
  r.note = std::move(note);
  return r;
}

inline nlohmann::json CheckReport::to_json() const {
  nlohmann::json j;
  j["lemma"] = lemma;
  j["inputs_digest"] = inputs_digest;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["margin"] = margin;
  j["tol"] = tol;
  j["pass"] = pass;
  if (!note.empty()) j["note"] = note;
  if (!scenario.empty()) j["scenario"] = scenario;
  return j;
}

}  // namespace fracgame

#endif  // FRACGAME_REPORT_HPP_
