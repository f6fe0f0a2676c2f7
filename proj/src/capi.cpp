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

#include "fracgame/capi.h"

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "fracgame/errors.hpp"
#include "fracgame/fraccalc.hpp"
#include "fracgame/paths.hpp"
#include "fracgame/scenario.hpp"
#include "fracgame/testfunc.hpp"

struct fg_path {
  fracgame::SampledPath path;
};

namespace {

thread_local std::string t_last_error;

int fail(int code, const std::string& what) {
  t_last_error = what;
  return code;
}

// Runs `body`, translating the error taxonomy onto the C codes: rejected
// inputs -> FG_ERR_DOMAIN, failed computations -> FG_ERR_NUMERIC.
template <typename Body>
int guarded(Body&& body) {
  t_last_error.clear();
  try {
    body();
    return FG_OK;
  } catch (const fracgame::ConfigError& e) {
    return fail(FG_ERR_DOMAIN, e.what());
  } catch (const fracgame::DomainError& e) {
    return fail(FG_ERR_DOMAIN, e.what());
  } catch (const fracgame::AlignmentError& e) {
    return fail(FG_ERR_DOMAIN, e.what());
  } catch (const fracgame::Error& e) {
    return fail(FG_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(FG_ERR_NUMERIC, e.what());
  }
}

}  // namespace

extern "C" {

const char* fg_version(void) { return "fracgame 1.0.0"; }

const char* fg_last_error(void) { return t_last_error.c_str(); }

int fg_path_create(double alpha, size_t dim, const double* x0, size_t cells,
                   double horizon, const double* caputo, fg_path** out) {
  if (out == nullptr) {
    return fail(FG_ERR_ARGUMENT, "fg_path_create: out must not be null");
  }
  *out = nullptr;
  if (x0 == nullptr || caputo == nullptr) {
    return fail(FG_ERR_ARGUMENT,
                "fg_path_create: x0 and caputo must not be null");
  }
  return guarded([&] {
    std::vector<double> start(x0, x0 + dim);
    std::vector<double> samples(caputo, caputo + cells * dim);
    auto grid = std::make_shared<const fracgame::Grid>(
        fracgame::Grid::uniform(cells, horizon));
    *out = new fg_path{fracgame::SampledPath(alpha, std::move(start), grid,
                                             std::move(samples))};
  });
}

void fg_path_destroy(fg_path* path) { delete path; }

int fg_path_dim(const fg_path* path, size_t* out) {
  if (path == nullptr || out == nullptr) {
    return fail(FG_ERR_ARGUMENT, "fg_path_dim: null argument");
  }
  t_last_error.clear();
  *out = path->path.dim();
  return FG_OK;
}

int fg_path_cells(const fg_path* path, size_t* out) {
  if (path == nullptr || out == nullptr) {
    return fail(FG_ERR_ARGUMENT, "fg_path_cells: null argument");
  }
  t_last_error.clear();
  *out = path->path.grid().num_cells();
  return FG_OK;
}

int fg_path_eval(const fg_path* path, double tau, double* out) {
  if (path == nullptr || out == nullptr) {
    return fail(FG_ERR_ARGUMENT, "fg_path_eval: null argument");
  }
  return guarded([&] {
    const std::vector<double> state = path->path.eval(tau);
    std::copy(state.begin(), state.end(), out);
  });
}

int fg_path_freeze(const fg_path* path, double t, fg_path** out) {
  if (out == nullptr) {
    return fail(FG_ERR_ARGUMENT, "fg_path_freeze: out must not be null");
  }
  *out = nullptr;
  if (path == nullptr) {
    return fail(FG_ERR_ARGUMENT, "fg_path_freeze: path must not be null");
  }
  return guarded([&] {
    *out = new fg_path{fracgame::freeze(path->path, t)};
  });
}

int fg_path_sup_distance(const fg_path* a, const fg_path* b, double* out) {
  if (a == nullptr || b == nullptr || out == nullptr) {
    return fail(FG_ERR_ARGUMENT, "fg_path_sup_distance: null argument");
  }
  return guarded([&] { *out = fracgame::sup_distance(a->path, b->path); });
}

int fg_nu(double eps, double alpha, double beta, double horizon, double t,
          const fg_path* x, double tau, const fg_path* y, double* out) {
  if (x == nullptr || y == nullptr || out == nullptr) {
    return fail(FG_ERR_ARGUMENT, "fg_nu: null argument");
  }
  return guarded([&] {
    const fracgame::NuParams params =
        fracgame::NuParams::make(eps, alpha, beta, horizon);
    *out = fracgame::nu(params, t, x->path, tau, y->path);
  });
}

int fg_gamma(double x, double* out) {
  if (out == nullptr) {
    return fail(FG_ERR_ARGUMENT, "fg_gamma: out must not be null");
  }
  return guarded([&] { *out = fracgame::gamma_fn(x); });
}

int fg_mittag_leffler(double alpha, double z, double tol, double* out) {
  if (out == nullptr) {
    return fail(FG_ERR_ARGUMENT, "fg_mittag_leffler: out must not be null");
  }
  return guarded([&] { *out = fracgame::mittag_leffler(alpha, z, tol); });
}

int fg_run(const char* subcommand, const char* config_path,
           const char* out_dir, uint64_t seed, int has_seed, int workers) {
  t_last_error.clear();
  if (subcommand == nullptr || config_path == nullptr) {
    return fail(FG_ERR_DOMAIN,
                "fg_run: subcommand and config_path are required");
  }
  std::string message;
  const std::uint64_t seed_value = seed;
  const int rc = fracgame::run_suite_exit(
      subcommand, config_path, out_dir == nullptr ? "" : out_dir,
      has_seed != 0 ? &seed_value : nullptr,
      workers < 1 ? 1 : static_cast<std::size_t>(workers), &message);
  if (rc == 1 && message.empty()) {
    message = "one or more checks failed; see reports.jsonl";
  }
  if (rc != 0) t_last_error = message;
  return rc;
}

}  // extern "C"
