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

#ifndef LWLAB_SIMPLEX_HPP_
#define LWLAB_SIMPLEX_HPP_

#include <limits>
#include <vector>

namespace lwlab {

// maximize c^T x  subject to  A x <= b,  0 <= x <= upper,  with b >= 0.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> constraints;
  std::vector<double> rhs;
  // Empty means unbounded above for every variable.
  std::vector<double> upper;
};

struct LpResult {
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

// Dense bounded-variable primal simplex with Bland's rule, started from the
// slack basis. Throws InputError on malformed input and InternalError if the
// problem is unbounded.
LpResult maximize(const LinearProgram& lp);

}  // namespace lwlab

#endif  // LWLAB_SIMPLEX_HPP_
