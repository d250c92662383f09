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

#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace jcrf {

/// Additive log-domain score for disallowed labels and transitions. Kept
/// finite so that log-sum-exp never sees -inf.
inline constexpr double kMaskPenalty = -1e9;

/// Any log score below this is treated as "no admissible path".
inline constexpr double kInfeasibleBelow = kMaskPenalty / 2;

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using BoolVector = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Hard BIO well-formedness over a label set: which label may follow which,
/// and which may open a sequence. Row = previous label, column = next.
struct ChainStructure {
  BoolMatrix transitions;
  BoolVector start;

  Eigen::Index size() const { return start.size(); }

  /// Everything allowed; the structure of an unconstrained chain.
  static ChainStructure unrestricted(Eigen::Index labels) {
    return {BoolMatrix::Constant(labels, labels, true), BoolVector::Constant(labels, true)};
  }
};

enum class Provenance { None, Semlink, Completion, Combined };

/// Per-position admissible labels, shape T x |labels|.
struct ConstraintMask {
  BoolMatrix allowed;
  Provenance provenance = Provenance::None;

  Eigen::Index length() const { return allowed.rows(); }
  Eigen::Index labels() const { return allowed.cols(); }

  static ConstraintMask all_true(Eigen::Index length, Eigen::Index labels) {
    return {BoolMatrix::Constant(length, labels, true), Provenance::None};
  }

  /// Throws InfeasibleError if some position admits no label.
  void check_feasible() const;
};

/// Elementwise AND; provenance becomes Combined. Throws AlignmentError on a
/// shape mismatch and InfeasibleError if a position ends up empty.
ConstraintMask intersect(const ConstraintMask& a, const ConstraintMask& b);

}  // namespace jcrf
