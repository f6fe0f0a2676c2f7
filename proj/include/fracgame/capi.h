/* Copyright 2026 The fracgame Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FRACGAME_CAPI_H_
#define FRACGAME_CAPI_H_

/* C interface to the fracgame shared library.
 *
 * Conventions:
 *   - Every function that can fail returns an int code: FG_OK on success,
 *     FG_ERR_DOMAIN for rejected inputs (bad parameter windows, mismatched
 *     grids, unreadable or invalid configuration), FG_ERR_NUMERIC for
 *     failures of the computation itself (divergence, accuracy budgets),
 *     FG_ERR_ARGUMENT for null or malformed pointers.
 *   - fg_last_error() returns a thread-local description of the most
 *     recent failure on the calling thread (empty string after a success).
 *   - Objects returned through fg_path handles are immutable; destroy them
 *     with fg_path_destroy.  Handles may be shared across threads for
 *     read-only use.
 *   - fg_run returns the suite exit code directly: 0 all checks passed,
 *     1 at least one check failed, 2 configuration rejected, 3 numerical
 *     failure.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define FG_OK 0
#define FG_ERR_DOMAIN 2
#define FG_ERR_NUMERIC 3
#define FG_ERR_ARGUMENT 4

/* Library identification string, e.g. "fracgame 1.0.0". */
const char* fg_version(void);

/* Thread-local message for the most recent failed call on this thread. */
const char* fg_last_error(void);

/* A path with memory: initial point, uniform time grid, and a
 * piecewise-constant derivative of fractional order alpha.  `caputo` holds
 * cells x dim samples in row-major order (sample for cell j, coordinate i
 * at caputo[j * dim + i]). */
typedef struct fg_path fg_path;

int fg_path_create(double alpha, size_t dim, const double* x0, size_t cells,
                   double horizon, const double* caputo, fg_path** out);
void fg_path_destroy(fg_path* path);

int fg_path_dim(const fg_path* path, size_t* out);
int fg_path_cells(const fg_path* path, size_t* out);

/* State at time tau; `out` must hold dim doubles. */
int fg_path_eval(const fg_path* path, double tau, double* out);

/* Continuation of `path` past t with identically zero derivative. */
int fg_path_freeze(const fg_path* path, double t, fg_path** out);

/* Largest pointwise distance of two paths on their shared grid. */
int fg_path_sup_distance(const fg_path* a, const fg_path* b, double* out);

/* Doubled, singularly weighted separation of the continuations of x past t
 * and y past tau; both paths must live on the same grid.  beta must lie in
 * (0, min(1 - alpha, alpha / 2)). */
int fg_nu(double eps, double alpha, double beta, double horizon, double t,
          const fg_path* x, double tau, const fg_path* y, double* out);

/* Special functions. */
int fg_gamma(double x, double* out);
int fg_mittag_leffler(double alpha, double z, double tol, double* out);

/* Runs one verification suite.  `subcommand` is one of validate | simulate
 * | value | lemmas | viscosity | doubling; `config_path` names a JSON
 * scenario file.  `out_dir` overrides the configured output directory when
 * non-null and non-empty; the directory receives summary.json,
 * reports.jsonl and trace.csv.  When has_seed is nonzero, `seed` replaces
 * the configured seed.  `workers` <= 1 runs single-threaded; any worker
 * count produces byte-identical outputs. */
int fg_run(const char* subcommand, const char* config_path,
           const char* out_dir, uint64_t seed, int has_seed, int workers);

#ifdef __cplusplus
}
#endif

#endif /* FRACGAME_CAPI_H_ */
