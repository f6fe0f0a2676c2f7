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

// Command-line front end for the verification suites.  Talks to the shared
// library strictly through the C interface in fracgame/capi.h.

#include "fracgame/capi.h"

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static void print_usage(FILE* stream) {
  fprintf(stream,
          "usage: fracgame_cli SUBCOMMAND --config PATH [--out DIR]\n"
          "                    [--seed U64] [--workers N]\n"
          "\n"
          "subcommands:\n"
          "  validate   dynamics catalog assumptions and Hamiltonian bounds\n"
          "  simulate   trajectory under a sampled schedule + linear-rate\n"
          "             benchmark against the Mittag-Leffler solution\n"
          "  value      scenario-tree game values, consistency and boundary\n"
          "  lemmas     separation-functional and envelope checks\n"
          "  viscosity  sub/supersolution sign checks for the value\n"
          "  doubling   two-candidate uniqueness diagnostic\n"
          "\n"
          "Writes summary.json, reports.jsonl and trace.csv into the output\n"
          "directory (--out overrides the configured one).  --seed replaces\n"
          "the configured seed; --workers sets the pool size without\n"
          "changing a byte of the outputs.\n"
          "\n"
          "exit codes: 0 all checks passed, 1 check failures, 2 bad\n"
          "configuration or usage, 3 numerical failure.\n");
}

int main(int argc, char** argv) {
  if (argc >= 2 && (strcmp(argv[1], "--help") == 0 ||
                    strcmp(argv[1], "-h") == 0)) {
    print_usage(stdout);
    return 0;
  }
  if (argc < 2 || argv[1][0] == '-') {
    print_usage(stderr);
    return 2;
  }
  const char* subcommand = argv[1];
  const char* config = NULL;
  const char* out_dir = NULL;
  uint64_t seed = 0;
  int has_seed = 0;
  int workers = 1;

  for (int i = 2; i < argc; ++i) {
    const char* flag = argv[i];
    const char* value = (i + 1 < argc) ? argv[i + 1] : NULL;
    if (strcmp(flag, "--config") == 0 && value != NULL) {
      config = value;
      ++i;
    } else if (strcmp(flag, "--out") == 0 && value != NULL) {
      out_dir = value;
      ++i;
    } else if (strcmp(flag, "--seed") == 0 && value != NULL) {
      char* end = NULL;
      seed = strtoull(value, &end, 10);
      if (end == value || *end != '\0') {
        fprintf(stderr, "fracgame_cli: --seed needs an unsigned integer\n");
        return 2;
      }
      has_seed = 1;
      ++i;
    } else if (strcmp(flag, "--workers") == 0 && value != NULL) {
      char* end = NULL;
      const long n = strtol(value, &end, 10);
      if (end == value || *end != '\0' || n < 1) {
        fprintf(stderr, "fracgame_cli: --workers needs a positive integer\n");
        return 2;
      }
      workers = (int)n;
      ++i;
    } else {
      fprintf(stderr, "fracgame_cli: unrecognized argument \"%s\"\n", flag);
      print_usage(stderr);
      return 2;
    }
  }
  if (config == NULL) {
    fprintf(stderr, "fracgame_cli: --config PATH is required\n");
    return 2;
  }

  const int rc = fg_run(subcommand, config, out_dir, seed, has_seed, workers);
  if (rc != 0 && fg_last_error()[0] != '\0') {
    fprintf(stderr, "fracgame_cli: %s\n", fg_last_error());
  }
  return rc;
}
