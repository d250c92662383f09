// Copyright 2026 The jcrf Authors.
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

#include "jcrf/masks.hpp"

#include <string>

#include "jcrf/errors.hpp"

namespace jcrf {

void ConstraintMask::check_feasible() const {
  for (Eigen::Index i = 0; i < allowed.rows(); ++i) {
    if (!allowed.row(i).any()) {
      throw InfeasibleError("constraint mask admits no label at position " + std::to_string(i));
    }
  }
}

ConstraintMask intersect(const ConstraintMask& a, const ConstraintMask& b) {
  if (a.length() != b.length() || a.labels() != b.labels()) {
    throw AlignmentError("cannot intersect masks of shape " + std::to_string(a.length()) + "x" +
                         std::to_string(a.labels()) + " and " + std::to_string(b.length()) +
                         "x" + std::to_string(b.labels()));
  }
  ConstraintMask out{a.allowed && b.allowed, Provenance::Combined};
  out.check_feasible();
  return out;
}

}  // namespace jcrf
