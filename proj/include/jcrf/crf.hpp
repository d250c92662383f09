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

// Linear-chain CRF dynamic programs in the log domain, templated on the
// scalar type. A label path y of length T scores
//
//   s(y) = start[y_0] + sum_t emissions(t, y_t)
//        + sum_{t>0} transitions(y_{t-1}, y_t) + end[y_{T-1}].
//
// Structure (BIO well-formedness) and constraint masks enter every DP as the
// additive kMaskPenalty, so all intermediate scores stay finite.

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jcrf/constraint_engine.hpp"
#include "jcrf/errors.hpp"
#include "jcrf/label_space.hpp"
#include "jcrf/masks.hpp"

namespace jcrf {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Path = std::vector<std::size_t>;

/// Learned transition scores. Row = previous label, column = next label.
template <typename Scalar>
struct ChainParameters {
  Matrix<Scalar> transitions;
  Vector<Scalar> start;
  Vector<Scalar> end;

  static ChainParameters zeros(Eigen::Index labels) {
    return {Matrix<Scalar>::Zero(labels, labels), Vector<Scalar>::Zero(labels),
            Vector<Scalar>::Zero(labels)};
  }
  Eigen::Index size() const { return start.size(); }
};

/// Sufficient statistics of a chain: per-position label occupancy, summed
/// transition counts, first and last label. Used both for expectations under
/// the model and for the indicator counts of a single path; a loss gradient
/// is the difference of two of these.
template <typename Scalar>
struct ChainStatistics {
  Matrix<Scalar> emissions;
  Matrix<Scalar> transitions;
  Vector<Scalar> start;
  Vector<Scalar> end;

  static ChainStatistics zeros(Eigen::Index length, Eigen::Index labels) {
    return {Matrix<Scalar>::Zero(length, labels), Matrix<Scalar>::Zero(labels, labels),
            Vector<Scalar>::Zero(labels), Vector<Scalar>::Zero(labels)};
  }

  ChainStatistics& operator+=(const ChainStatistics& o) {
    emissions += o.emissions;
    transitions += o.transitions;
    start += o.start;
    end += o.end;
    return *this;
  }
  ChainStatistics& operator-=(const ChainStatistics& o) {
    emissions -= o.emissions;
    transitions -= o.transitions;
    start -= o.start;
    end -= o.end;
    return *this;
  }
  friend ChainStatistics operator-(ChainStatistics a, const ChainStatistics& b) { return a -= b; }
  friend ChainStatistics operator+(ChainStatistics a, const ChainStatistics& b) { return a += b; }
};

/// Per-instance emissions over shared parameters and structure. The
/// parameters and structure must outlive the lattice.
template <typename Scalar>
class Lattice {
 public:
  Lattice(Matrix<Scalar> emissions, const ChainParameters<Scalar>& params,
          const ChainStructure& structure)
      : emissions_(std::move(emissions)), params_(&params), structure_(&structure) {
    if (emissions_.rows() < 1) throw DataError("lattice needs at least one position");
    if (emissions_.cols() != params.size() || params.size() != structure.size() ||
        params.transitions.rows() != params.size() || params.transitions.cols() != params.size() ||
        params.end.size() != params.size()) {
      throw AlignmentError("lattice emissions, parameters and structure disagree on label count");
    }
  }

  Eigen::Index length() const { return emissions_.rows(); }
  Eigen::Index labels() const { return emissions_.cols(); }
  const Matrix<Scalar>& emissions() const { return emissions_; }
  Matrix<Scalar>& emissions() { return emissions_; }
  const ChainParameters<Scalar>& params() const { return *params_; }
  const ChainStructure& structure() const { return *structure_; }

 private:
  Matrix<Scalar> emissions_;
  const ChainParameters<Scalar>* params_;
  const ChainStructure* structure_;
};

namespace detail {

template <typename Scalar>
Scalar penalty() {
  return static_cast<Scalar>(kMaskPenalty);
}

template <typename Scalar>
void check_mask(const Lattice<Scalar>& lattice, const ConstraintMask* mask) {
  if (mask == nullptr) return;
  if (mask->length() != lattice.length() || mask->labels() != lattice.labels()) {
    throw AlignmentError("constraint mask shape " + std::to_string(mask->length()) + "x" +
                         std::to_string(mask->labels()) + " does not match lattice " +
                         std::to_string(lattice.length()) + "x" +
                         std::to_string(lattice.labels()));
  }
  mask->check_feasible();
}

/// Emissions, transitions and start scores with structure and mask folded in.
template <typename Scalar>
struct Effective {
  Matrix<Scalar> emissions;
  Matrix<Scalar> transitions;
  RowVector<Scalar> start;
  RowVector<Scalar> end;

  Effective(const Lattice<Scalar>& lattice, const ConstraintMask* mask) {
    check_mask(lattice, mask);
    const Scalar pen = penalty<Scalar>();
    const auto& st = lattice.structure();
    const auto& p = lattice.params();
    emissions = lattice.emissions();
    if (mask != nullptr) {
      emissions.array() += (!mask->allowed).template cast<Scalar>() * pen;
    }
    transitions = p.transitions.array() + (!st.transitions).template cast<Scalar>() * pen;
    start = (p.start.array() + (!st.start).template cast<Scalar>() * pen).transpose();
    end = p.end.transpose();
  }
};

template <typename Scalar>
Scalar log_sum_exp(const RowVector<Scalar>& v) {
  const Scalar m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

template <typename Scalar>
void check_feasible_score(Scalar score, const char* what) {
  if (!(score > static_cast<Scalar>(kInfeasibleBelow))) {
    throw InfeasibleError(std::string(what) + ": no admissible label path");
  }
}

/// alpha(t, j): log-sum of all prefixes ending in label j at t.
template <typename Scalar>
Matrix<Scalar> forward(const Effective<Scalar>& eff) {
  const Eigen::Index T = eff.emissions.rows();
  const Eigen::Index L = eff.emissions.cols();
  Matrix<Scalar> alpha(T, L);
  alpha.row(0) = eff.start + eff.emissions.row(0);
  for (Eigen::Index t = 1; t < T; ++t) {
    Matrix<Scalar> scores = eff.transitions.colwise() + alpha.row(t - 1).transpose();
    RowVector<Scalar> m = scores.colwise().maxCoeff();
    RowVector<Scalar> sums = (scores.rowwise() - m).array().exp().colwise().sum();
    alpha.row(t) = m.array() + sums.array().log() + eff.emissions.row(t).array();
  }
  return alpha;
}

/// beta(t, i): log-sum of all suffixes after label i at t, end score included.
template <typename Scalar>
Matrix<Scalar> backward(const Effective<Scalar>& eff) {
  const Eigen::Index T = eff.emissions.rows();
  const Eigen::Index L = eff.emissions.cols();
  Matrix<Scalar> beta(T, L);
  beta.row(T - 1) = eff.end;
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    RowVector<Scalar> next = eff.emissions.row(t + 1) + beta.row(t + 1);
    Matrix<Scalar> scores = eff.transitions.rowwise() + next;
    Vector<Scalar> m = scores.rowwise().maxCoeff();
    Vector<Scalar> sums = (scores.colwise() - m).array().exp().rowwise().sum();
    beta.row(t) = (m.array() + sums.array().log()).transpose();
  }
  return beta;
}

}  // namespace detail

/// Unmasked path score. Throws AlignmentError on a length mismatch and
/// DataError on an out-of-range label index.
template <typename Scalar>
Scalar score_sequence(const Lattice<Scalar>& lattice, std::span<const std::size_t> path) {
  if (static_cast<Eigen::Index>(path.size()) != lattice.length()) {
    throw AlignmentError("path length " + std::to_string(path.size()) + " differs from lattice " +
                         std::to_string(lattice.length()));
  }
  for (auto y : path) {
    if (static_cast<Eigen::Index>(y) >= lattice.labels()) {
      throw DataError("label index " + std::to_string(y) + " out of range");
    }
  }
  const auto& p = lattice.params();
  const auto& e = lattice.emissions();
  auto at = [](std::size_t i) { return static_cast<Eigen::Index>(i); };
  Scalar s = p.start(at(path[0])) + e(0, at(path[0]));
  for (std::size_t t = 1; t < path.size(); ++t) {
    s = s + p.transitions(at(path[t - 1]), at(path[t])) + e(at(t), at(path[t]));
  }
  return s + p.end(at(path.back()));
}

/// True iff the path respects the structure (and the mask, when given).
template <typename Scalar>
bool admissible(const Lattice<Scalar>& lattice, std::span<const std::size_t> path,
                const ConstraintMask* mask = nullptr) {
  const auto& st = lattice.structure();
  for (std::size_t t = 0; t < path.size(); ++t) {
    const auto j = static_cast<Eigen::Index>(path[t]);
    if (mask != nullptr && !mask->allowed(static_cast<Eigen::Index>(t), j)) return false;
    if (t == 0 ? !st.start(j) : !st.transitions(static_cast<Eigen::Index>(path[t - 1]), j)) {
      return false;
    }
  }
  return true;
}

/// log Z: log-sum-exp of s(y) over admissible paths. Throws InfeasibleError
/// if no admissible path exists.
template <typename Scalar>
Scalar log_partition(const Lattice<Scalar>& lattice, const ConstraintMask* mask = nullptr) {
  detail::Effective<Scalar> eff(lattice, mask);
  auto alpha = detail::forward(eff);
  RowVector<Scalar> last = alpha.row(lattice.length() - 1) + eff.end;
  Scalar z = detail::log_sum_exp(last);
  detail::check_feasible_score(z, "log_partition");
  return z;
}

/// Log-sum-exp of s(y) over admissible paths whose PB projection equals
/// `observed_pb`, further restricted by `mask` when given.
template <typename Scalar>
Scalar log_marginal(const Lattice<Scalar>& lattice, std::span<const BioTag> observed_pb,
                    const LabelSpace& space, const ConstraintMask* mask = nullptr) {
  if (static_cast<Eigen::Index>(observed_pb.size()) != lattice.length()) {
    throw AlignmentError("observed PB length differs from lattice");
  }
  auto completion = completion_mask(space, observed_pb);
  if (mask == nullptr) return log_partition(lattice, &completion);
  auto combined = intersect(completion, *mask);
  return log_partition(lattice, &combined);
}

template <typename Scalar>
struct ViterbiResult {
  Path path;
  Scalar score;
};

/// Highest-scoring admissible path. Ties go to the lowest label index, both
/// for the final label and at every backpointer.
template <typename Scalar>
ViterbiResult<Scalar> viterbi(const Lattice<Scalar>& lattice, const ConstraintMask* mask = nullptr) {
  detail::Effective<Scalar> eff(lattice, mask);
  const Eigen::Index T = lattice.length();
  const Eigen::Index L = lattice.labels();
  // Masked targets are skipped and parked far below any penalized path.
  const Scalar blocked = detail::penalty<Scalar>() * static_cast<Scalar>(1e3);
  Matrix<Scalar> delta(T, L);
  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> back(T, L);
  auto allowed = [&](Eigen::Index t, Eigen::Index j) {
    return mask == nullptr || mask->allowed(t, j);
  };
  for (Eigen::Index j = 0; j < L; ++j) {
    delta(0, j) = allowed(0, j) ? eff.start(j) + eff.emissions(0, j) : blocked;
    back(0, j) = 0;
  }
  for (Eigen::Index t = 1; t < T; ++t) {
    for (Eigen::Index j = 0; j < L; ++j) {
      if (!allowed(t, j)) {
        delta(t, j) = blocked;
        back(t, j) = 0;
        continue;
      }
      Eigen::Index best_i = 0;
      Scalar best = delta(t - 1, 0) + eff.transitions(0, j);
      for (Eigen::Index i = 1; i < L; ++i) {
        const Scalar s = delta(t - 1, i) + eff.transitions(i, j);
        if (s > best) {
          best = s;
          best_i = i;
        }
      }
      delta(t, j) = best + eff.emissions(t, j);
      back(t, j) = best_i;
    }
  }
  Eigen::Index best_j = 0;
  Scalar best = delta(T - 1, 0) + eff.end(0);
  for (Eigen::Index j = 1; j < L; ++j) {
    const Scalar s = delta(T - 1, j) + eff.end(j);
    if (s > best) {
      best = s;
      best_j = j;
    }
  }
  detail::check_feasible_score(best, "viterbi");
  Path path(static_cast<std::size_t>(T));
  path[static_cast<std::size_t>(T - 1)] = static_cast<std::size_t>(best_j);
  for (Eigen::Index t = T - 1; t > 0; --t) {
    best_j = back(t, best_j);
    path[static_cast<std::size_t>(t - 1)] = static_cast<std::size_t>(best_j);
  }
  return {std::move(path), best};
}

template <typename Scalar>
struct ForwardBackward {
  Scalar log_partition;
  /// Expected statistics; `expected.emissions` holds the posterior marginals.
  ChainStatistics<Scalar> expected;
};

/// log Z and expected sufficient statistics under the (masked) distribution.
template <typename Scalar>
ForwardBackward<Scalar> forward_backward(const Lattice<Scalar>& lattice,
                                         const ConstraintMask* mask = nullptr) {
  detail::Effective<Scalar> eff(lattice, mask);
  const Eigen::Index T = lattice.length();
  const Eigen::Index L = lattice.labels();
  auto alpha = detail::forward(eff);
  auto beta = detail::backward(eff);
  RowVector<Scalar> last = alpha.row(T - 1) + eff.end;
  const Scalar z = detail::log_sum_exp(last);
  detail::check_feasible_score(z, "forward_backward");

  auto stats = ChainStatistics<Scalar>::zeros(T, L);
  stats.emissions = ((alpha + beta).array() - z).exp().matrix();
  stats.start = stats.emissions.row(0).transpose();
  stats.end = stats.emissions.row(T - 1).transpose();
  for (Eigen::Index t = 1; t < T; ++t) {
    RowVector<Scalar> next = eff.emissions.row(t) + beta.row(t);
    Matrix<Scalar> pair = (eff.transitions.colwise() + alpha.row(t - 1).transpose()).rowwise() + next;
    stats.transitions += (pair.array() - z).exp().matrix();
  }
  return {z, std::move(stats)};
}

/// Position-wise label posteriors, T x |labels|; rows sum to one.
template <typename Scalar>
Matrix<Scalar> posterior_marginals(const Lattice<Scalar>& lattice,
                                   const ConstraintMask* mask = nullptr) {
  return forward_backward(lattice, mask).expected.emissions;
}

/// Indicator statistics of one path.
template <typename Scalar>
ChainStatistics<Scalar> path_statistics(Eigen::Index labels, std::span<const std::size_t> path) {
  const auto T = static_cast<Eigen::Index>(path.size());
  auto stats = ChainStatistics<Scalar>::zeros(T, labels);
  for (Eigen::Index t = 0; t < T; ++t) {
    const auto j = static_cast<Eigen::Index>(path[static_cast<std::size_t>(t)]);
    stats.emissions(t, j) += Scalar(1);
    if (t > 0) stats.transitions(static_cast<Eigen::Index>(path[static_cast<std::size_t>(t - 1)]), j) += Scalar(1);
  }
  if (T > 0) {
    stats.start(static_cast<Eigen::Index>(path.front())) += Scalar(1);
    stats.end(static_cast<Eigen::Index>(path.back())) += Scalar(1);
  }
  return stats;
}

}  // namespace jcrf
