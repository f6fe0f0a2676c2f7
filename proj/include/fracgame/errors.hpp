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

#ifndef FRACGAME_ERRORS_HPP_
#define FRACGAME_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fracgame {

// Base class for every error raised by the library.  The C layer maps each
// subclass to a stable integer code; inside the C++ core we simply throw.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of an operation
// (non-positive gamma argument, time outside [0, T], order outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A time argument was required to be a grid node and is not.  Times are never
// silently rounded to nodes; reproducibility of reports depends on it.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// A series or quadrature could not reach the requested accuracy within its
// fixed work budget.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

// A computation left the region where results are meaningful: a trajectory
// crossed the overflow guard, or a kernel exponent makes an integral diverge.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// An exhaustive search was refused because it would exceed the configured
// enumeration budget.  The message states the budget that would be required.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// A scenario configuration is malformed or inconsistent.  Messages are
// anchored to the offending key or byte position where possible.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A probe design for a finite-difference derivative estimate is singular or
// too ill-conditioned to solve.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracgame

#endif  // FRACGAME_ERRORS_HPP_
