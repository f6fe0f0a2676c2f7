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

// The C surface is tested against the C++ core it wraps: same numbers,
// mapped error codes, and a usable thread-local diagnostic.

#include "fracgame/capi.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <doctest.h>

#include "fracgame/paths.hpp"
#include "fracgame/testfunc.hpp"

namespace fs = std::filesystem;

namespace {

struct PathDeleter {
  void operator()(fg_path* p) const { fg_path_destroy(p); }
};
using PathHandle = std::unique_ptr<fg_path, PathDeleter>;

PathHandle make_path(double alpha, const std::vector<double>& x0,
                     std::size_t cells, double horizon,
                     const std::vector<double>& caputo) {
  fg_path* raw = nullptr;
  REQUIRE(fg_path_create(alpha, x0.size(), x0.data(), cells, horizon,
                         caputo.data(), &raw) == FG_OK);
  REQUIRE(raw != nullptr);
  return PathHandle(raw);
}

}  // namespace

TEST_CASE("version and special functions round-trip through C") {
  CHECK(std::strcmp(fg_version(), "fracgame 1.0.0") == 0);

  double g = 0.0;
  REQUIRE(fg_gamma(0.5, &g) == FG_OK);
  CHECK(std::abs(g - std::sqrt(std::acos(-1.0))) < 1e-12);
  CHECK(fg_last_error()[0] == '\0');

  CHECK(fg_gamma(-1.0, &g) == FG_ERR_DOMAIN);
  CHECK(std::strlen(fg_last_error()) > 0);

  double ml = 0.0;
  REQUIRE(fg_mittag_leffler(0.5, 1.0, 1e-12, &ml) == FG_OK);
  CHECK(std::abs(ml - 5.00898008076228346630982459822) < 1e-11);
  CHECK(fg_mittag_leffler(0.5, 1.0, 0.0, &ml) == FG_ERR_DOMAIN);
  CHECK(fg_mittag_leffler(0.3, 50.0, 1e-10, &ml) == FG_ERR_NUMERIC);
  CHECK(fg_gamma(1.0, nullptr) == FG_ERR_ARGUMENT);
}

TEST_CASE("path handles agree with the underlying path type") {
  const double alpha = 0.5;
  const std::vector<double> x0 = {1.0, -0.5};
  const std::size_t cells = 8;
  std::vector<double> caputo(cells * 2);
  for (std::size_t j = 0; j < cells; ++j) {
    caputo[2 * j] = 0.25;
    caputo[2 * j + 1] = -0.125 * static_cast<double>(j);
  }
  PathHandle h = make_path(alpha, x0, cells, 1.0, caputo);

  std::size_t dim = 0, n = 0;
  REQUIRE(fg_path_dim(h.get(), &dim) == FG_OK);
  REQUIRE(fg_path_cells(h.get(), &n) == FG_OK);
  CHECK(dim == 2);
  CHECK(n == cells);

  auto grid = std::make_shared<const fracgame::Grid>(
      fracgame::Grid::uniform(cells, 1.0));
  const fracgame::SampledPath ref(alpha, x0, grid, caputo);
  for (double tau : {0.0, 0.31, 0.75, 1.0}) {
    double out[2] = {0.0, 0.0};
    REQUIRE(fg_path_eval(h.get(), tau, out) == FG_OK);
    const std::vector<double> want = ref.eval(tau);
    CHECK(out[0] == want[0]);
    CHECK(out[1] == want[1]);
  }
  CHECK(fg_path_eval(h.get(), 1.5, nullptr) == FG_ERR_ARGUMENT);
  double out[2];
  CHECK(fg_path_eval(h.get(), 1.5, out) == FG_ERR_DOMAIN);

  fg_path* frozen_raw = nullptr;
  REQUIRE(fg_path_freeze(h.get(), 0.5, &frozen_raw) == FG_OK);
  PathHandle frozen(frozen_raw);
  const fracgame::SampledPath want_frozen = fracgame::freeze(ref, 0.5);
  double fo[2];
  REQUIRE(fg_path_eval(frozen.get(), 1.0, fo) == FG_OK);
  const std::vector<double> wf = want_frozen.eval(1.0);
  CHECK(fo[0] == wf[0]);
  CHECK(fo[1] == wf[1]);

  double d = -1.0;
  REQUIRE(fg_path_sup_distance(h.get(), h.get(), &d) == FG_OK);
  CHECK(d == 0.0);
  REQUIRE(fg_path_sup_distance(h.get(), frozen.get(), &d) == FG_OK);
  CHECK(d == fracgame::sup_distance(ref, want_frozen));

  fg_path_destroy(nullptr);  // must be a safe no-op
}

TEST_CASE("separation functional through C matches the core") {
  const double alpha = 0.5;
  const std::size_t cells = 16;
  std::vector<double> cx(cells, 0.5), cy(cells, -0.25);
  PathHandle x = make_path(alpha, {1.0}, cells, 1.0, cx);
  PathHandle y = make_path(alpha, {0.2}, cells, 1.0, cy);

  double self = -1.0;
  REQUIRE(fg_nu(0.5, alpha, 0.125, 1.0, 0.5, x.get(), 0.5, x.get(), &self) ==
          FG_OK);
  CHECK(self == 0.0);

  double via_c = 0.0;
  REQUIRE(fg_nu(0.5, alpha, 0.125, 1.0, 0.25, x.get(), 0.5, y.get(),
                &via_c) == FG_OK);
  auto grid = std::make_shared<const fracgame::Grid>(
      fracgame::Grid::uniform(cells, 1.0));
  const fracgame::SampledPath rx(alpha, {1.0}, grid, cx);
  const fracgame::SampledPath ry(alpha, {0.2}, grid, cy);
  const fracgame::NuParams params =
      fracgame::NuParams::make(0.5, alpha, 0.125, 1.0);
  CHECK(via_c == fracgame::nu(params, 0.25, rx, 0.5, ry));

  // Parameter window and grid mismatch map to the domain code.
  double out = 0.0;
  CHECK(fg_nu(0.5, alpha, 0.4, 1.0, 0.25, x.get(), 0.5, y.get(), &out) ==
        FG_ERR_DOMAIN);
  PathHandle z = make_path(alpha, {0.0}, 8, 1.0, std::vector<double>(8, 0.1));
  CHECK(fg_nu(0.5, alpha, 0.125, 1.0, 0.25, x.get(), 0.5, z.get(), &out) ==
        FG_ERR_DOMAIN);
  CHECK(std::string(fg_last_error()).size() > 0);
  CHECK(fg_nu(0.5, alpha, 0.125, 1.0, 0.25, nullptr, 0.5, y.get(), &out) ==
        FG_ERR_ARGUMENT);
}

TEST_CASE("fg_run drives a suite end to end") {
  const fs::path base = fs::temp_directory_path() / "fracgame_capi";
  fs::create_directories(base);
  const fs::path config = base / "config.json";
  {
    std::ofstream out(config);
    out << R"({"T": 1.0, "fine_cells": 32, "trials": 6,
               "library": {"count": 2, "k": 2.0}, "seed": 5})";
  }

  const fs::path out_dir = base / "out";
  REQUIRE(fg_run("lemmas", config.string().c_str(), out_dir.string().c_str(),
                 0, 0, 2) == 0);
  CHECK(fs::exists(out_dir / "summary.json"));
  CHECK(fs::exists(out_dir / "reports.jsonl"));
  CHECK(fs::exists(out_dir / "trace.csv"));

  CHECK(fg_run("explore", config.string().c_str(),
               out_dir.string().c_str(), 0, 0, 1) == 2);
  CHECK(std::string(fg_last_error()).find("unknown subcommand") !=
        std::string::npos);
  CHECK(fg_run("lemmas", (base / "missing.json").string().c_str(), nullptr,
               0, 0, 1) == 2);
  CHECK(fg_run(nullptr, config.string().c_str(), nullptr, 0, 0, 1) == 2);

  // Seed override is visible in the canonical echo.
  REQUIRE(fg_run("validate", config.string().c_str(),
                 out_dir.string().c_str(), 77, 1, 1) == 0);
  std::ifstream in(out_dir / "summary.json");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("\"seed\": 77") != std::string::npos);
}
