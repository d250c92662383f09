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

// Training objectives over lattices. Every loss is a negative log
// likelihood of a target set of paths,
//
//   loss = Lse_{y in D} s(y) - Lse_{y in N} s(y),   N a subset of D,
//
// and its gradient with respect to emissions and chain parameters is the
// difference of expected statistics, E_D[stats] - E_N[stats].

#include <span>

#include "jcrf/constraint_engine.hpp"
#include "jcrf/crf.hpp"
#include "jcrf/errors.hpp"
#include "jcrf/label_space.hpp"

namespace jcrf {

template <typename Scalar>
struct LossResult {
  Scalar value;
  ChainStatistics<Scalar> gradient;
};

/// -log P(gold). With `partition_mask`, the partition is restricted to that
/// mask; gold labels stay admissible regardless, so the loss is never
/// negative. Throws DataError if gold breaks the BIO structure.
template <typename Scalar>
LossResult<Scalar> joint_nll(const Lattice<Scalar>& lattice, std::span<const std::size_t> gold,
                             const ConstraintMask* partition_mask = nullptr) {
  if (static_cast<Eigen::Index>(gold.size()) != lattice.length()) {
    throw AlignmentError("gold length differs from lattice");
  }
  for (auto y : gold) {
    if (static_cast<Eigen::Index>(y) >= lattice.labels()) {
      throw DataError("gold label index " + std::to_string(y) + " out of range");
    }
  }
  if (!admissible(lattice, gold)) throw DataError("gold path violates the BIO structure");
  const Scalar gold_score = score_sequence(lattice, gold);
  ForwardBackward<Scalar> fb = [&] {
    if (partition_mask == nullptr) return forward_backward(lattice);
    ConstraintMask widened = *partition_mask;
    for (std::size_t t = 0; t < gold.size(); ++t) {
      widened.allowed(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(gold[t])) = true;
    }
    return forward_backward(lattice, &widened);
  }();
  return {fb.log_partition - gold_score,
          fb.expected - path_statistics<Scalar>(lattice.labels(), gold)};
}

namespace detail {

template <typename Scalar>
LossResult<Scalar> marginal_loss(const Lattice<Scalar>& lattice,
                                 std::span<const BioTag> observed_pb, const LabelSpace& space,
                                 const ConstraintMask* semlink) {
  if (static_cast<Eigen::Index>(observed_pb.size()) != lattice.length()) {
    throw AlignmentError("observed PB length differs from lattice");
  }
  auto completion = completion_mask(space, observed_pb);
  const ConstraintMask numerator_mask =
      semlink == nullptr ? completion : intersect(completion, *semlink);
  auto numerator = forward_backward(lattice, &numerator_mask);
  auto denominator = forward_backward(lattice, semlink);
  return {denominator.log_partition - numerator.log_partition,
          denominator.expected - numerator.expected};
}

}  // namespace detail

/// -log of the total probability of joint paths whose PB projection is
/// `observed_pb`, marginalizing over the VN side.
template <typename Scalar>
LossResult<Scalar> marginal_nll(const Lattice<Scalar>& lattice, std::span<const BioTag> observed_pb,
                                const LabelSpace& space) {
  return detail::marginal_loss(lattice, observed_pb, space, nullptr);
}

/// marginal_nll with both the numerator and the partition restricted to the
/// predicate's Semlink mask.
template <typename Scalar>
LossResult<Scalar> constrained_marginal_nll(const Lattice<Scalar>& lattice,
                                            std::span<const BioTag> observed_pb,
                                            const LabelSpace& space,
                                            const ConstraintMask& semlink_mask) {
  return detail::marginal_loss(lattice, observed_pb, space, &semlink_mask);
}

template <typename Scalar>
struct MultitaskLoss {
  Scalar value;
  ChainStatistics<Scalar> vn_gradient;
  ChainStatistics<Scalar> pb_gradient;
};

/// Sum of two independent single-scheme chain NLLs.
template <typename Scalar>
MultitaskLoss<Scalar> multitask_nll(const Lattice<Scalar>& vn_lattice,
                                    const Lattice<Scalar>& pb_lattice,
                                    std::span<const std::size_t> gold_vn,
                                    std::span<const std::size_t> gold_pb) {
  auto vn = joint_nll(vn_lattice, gold_vn);
  auto pb = joint_nll(pb_lattice, gold_pb);
  return {vn.value + pb.value, std::move(vn.gradient), std::move(pb.gradient)};
}

}  // namespace jcrf
