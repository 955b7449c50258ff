// Copyright 2026 The lw-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LWLAB_COMMON_HPP_
#define LWLAB_COMMON_HPP_

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lwlab {

// Global comparison tolerance for values, budgets, bids and utility gains.
inline constexpr double kTolerance = 1e-9;

// Utility of a bidder whose payment exceeds the budget.
inline constexpr double kNegInfinity = -std::numeric_limits<double>::infinity();

inline bool approx_equal(double a, double b, double tol = kTolerance) {
  return std::fabs(a - b) <= tol;
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model data or a valuation class an operation does not support.
class ModelError : public Error {
 public:
  using Error::Error;
};

// An argument outside the operation's domain.
class InputError : public Error {
 public:
  using Error::Error;
};

// An exact enumeration would exceed its configured limit.
class SizeError : public Error {
 public:
  using Error::Error;
};

// The operation is only defined at an equilibrium (or similar state).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DegenerateEquilibriumError : public Error {
 public:
  using Error::Error;
};

// A broken internal invariant; indicates a bug rather than bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lwlab

#endif  // LWLAB_COMMON_HPP_
