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

// Exhaustive-enumeration references for the chain DPs. Everything here works
// path by path over all L^T label sequences and shares no code with the
// forward/backward/Viterbi implementations it checks.

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "jcrf/bio.hpp"
#include "jcrf/label_space.hpp"
#include "jcrf/masks.hpp"

namespace jcrf::testing {

/// Plain-data lattice: no Eigen expressions, no library types.
struct BruteLattice {
  std::size_t length = 0;
  std::size_t labels = 0;
  std::vector<std::vector<double>> emissions;    // [t][l]
  std::vector<std::vector<double>> transitions;  // [prev][next]
  std::vector<double> start;
  std::vector<double> end;
  std::vector<std::vector<bool>> allowed_transition;  // [prev][next]
  std::vector<bool> allowed_start;
};

using Mask = std::vector<std::vector<bool>>;  // [t][l]

inline void for_each_path(std::size_t length, std::size_t labels,
                          const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> path(length, 0);
  while (true) {
    visit(path);
    std::size_t t = 0;
    while (t < length && ++path[t] == labels) path[t++] = 0;
    if (t == length) return;
  }
}

inline bool brute_admissible(const BruteLattice& b, const std::vector<std::size_t>& path,
                             const Mask* mask) {
  for (std::size_t t = 0; t < path.size(); ++t) {
    if (mask != nullptr && !(*mask)[t][path[t]]) return false;
    if (t == 0 ? !b.allowed_start[path[0]] : !b.allowed_transition[path[t - 1]][path[t]]) {
      return false;
    }
  }
  return true;
}

inline double brute_score(const BruteLattice& b, const std::vector<std::size_t>& path) {
  double s = b.start[path[0]] + b.end[path.back()];
  for (std::size_t t = 0; t < path.size(); ++t) {
    s += b.emissions[t][path[t]];
    if (t > 0) s += b.transitions[path[t - 1]][path[t]];
  }
  return s;
}

/// log sum exp over admissible paths; nullopt when none exists.
inline std::optional<double> brute_log_partition(const BruteLattice& b, const Mask* mask = nullptr) {
  std::vector<double> scores;
  for_each_path(b.length, b.labels, [&](const auto& p) {
    if (brute_admissible(b, p, mask)) scores.push_back(brute_score(b, p));
  });
  if (scores.empty()) return std::nullopt;
  double m = -std::numeric_limits<double>::infinity();
  for (double s : scores) m = std::max(m, s);
  long double sum = 0.0L;
  for (double s : scores) sum += std::exp(static_cast<long double>(s - m));
  return m + static_cast<double>(std::log(sum));
}

/// Posterior [t][l] under the masked distribution.
inline std::vector<std::vector<double>> brute_marginals(const BruteLattice& b,
                                                        const Mask* mask = nullptr) {
  const double z = *brute_log_partition(b, mask);
  std::vector<std::vector<double>> out(b.length, std::vector<double>(b.labels, 0.0));
  for_each_path(b.length, b.labels, [&](const auto& p) {
    if (!brute_admissible(b, p, mask)) return;
    const double w = std::exp(brute_score(b, p) - z);
    for (std::size_t t = 0; t < b.length; ++t) out[t][p[t]] += w;
  });
  return out;
}

/// Argmax over admissible paths. Among exact ties, the path that is smallest
/// when compared from the last position backwards wins.
inline std::optional<std::pair<std::vector<std::size_t>, double>> brute_argmax(
    const BruteLattice& b, const Mask* mask = nullptr) {
  std::optional<std::pair<std::vector<std::size_t>, double>> best;
  auto reverse_less = [](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    for (std::size_t k = x.size(); k-- > 0;) {
      if (x[k] != y[k]) return x[k] < y[k];
    }
    return false;
  };
  for_each_path(b.length, b.labels, [&](const auto& p) {
    if (!brute_admissible(b, p, mask)) return;
    const double s = brute_score(b, p);
    if (!best || s > best->second || (s == best->second && reverse_less(p, best->first))) {
      best = std::pair{p, s};
    }
  });
  return best;
}

/// Mask allowing, at each t, the labels whose PB projection equals observed[t].
inline Mask brute_completion(const LabelSpace& space, const std::vector<BioTag>& observed) {
  Mask m(observed.size(), std::vector<bool>(space.size(), false));
  for (std::size_t t = 0; t < observed.size(); ++t) {
    for (std::size_t l = 0; l < space.size(); ++l) m[t][l] = space.label(l).pb == observed[t];
  }
  return m;
}

inline Mask brute_and(const Mask& a, const Mask& b) {
  Mask out = a;
  for (std::size_t t = 0; t < a.size(); ++t) {
    for (std::size_t l = 0; l < a[t].size(); ++l) out[t][l] = a[t][l] && b[t][l];
  }
  return out;
}

// Conversions between the brute representation and the library's types.

inline Mask to_brute(const ConstraintMask& mask) {
  Mask m(static_cast<std::size_t>(mask.length()),
         std::vector<bool>(static_cast<std::size_t>(mask.labels())));
  for (Eigen::Index t = 0; t < mask.length(); ++t) {
    for (Eigen::Index l = 0; l < mask.labels(); ++l) {
      m[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)] = mask.allowed(t, l);
    }
  }
  return m;
}

inline ConstraintMask from_brute(const Mask& m) {
  ConstraintMask mask{BoolMatrix(static_cast<Eigen::Index>(m.size()),
                                 static_cast<Eigen::Index>(m.empty() ? 0 : m[0].size())),
                      Provenance::Combined};
  for (std::size_t t = 0; t < m.size(); ++t) {
    for (std::size_t l = 0; l < m[t].size(); ++l) {
      mask.allowed(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(l)) = m[t][l];
    }
  }
  return mask;
}

/// Random lattice data. `structure_density` is the probability that a
/// transition/start is allowed (before guaranteeing one admissible path).
inline BruteLattice random_brute(std::mt19937_64& rng, std::size_t length, std::size_t labels,
                                 double structure_density = 0.8, bool integer_scores = false) {
  std::normal_distribution<double> real(0.0, 1.5);
  std::uniform_int_distribution<int> small(-2, 2);
  std::bernoulli_distribution keep(structure_density);
  auto draw = [&] { return integer_scores ? static_cast<double>(small(rng)) : real(rng); };
  BruteLattice b;
  b.length = length;
  b.labels = labels;
  b.emissions.assign(length, std::vector<double>(labels));
  for (auto& row : b.emissions) {
    for (auto& x : row) x = draw();
  }
  b.transitions.assign(labels, std::vector<double>(labels));
  b.allowed_transition.assign(labels, std::vector<bool>(labels));
  for (std::size_t i = 0; i < labels; ++i) {
    for (std::size_t j = 0; j < labels; ++j) {
      b.transitions[i][j] = draw();
      b.allowed_transition[i][j] = keep(rng);
    }
  }
  b.start.resize(labels);
  b.end.resize(labels);
  b.allowed_start.resize(labels);
  for (std::size_t j = 0; j < labels; ++j) {
    b.start[j] = draw();
    b.end[j] = draw();
    b.allowed_start[j] = keep(rng);
  }
  // Label 0 acts like O: it may start and may follow / precede anything.
  b.allowed_start[0] = true;
  for (std::size_t i = 0; i < labels; ++i) {
    b.allowed_transition[i][0] = true;
    b.allowed_transition[0][i] = b.allowed_transition[0][i] || i == 0;
  }
  return b;
}

/// Random mask with at least one allowed label per position.
inline Mask random_mask(std::mt19937_64& rng, std::size_t length, std::size_t labels,
                        double density = 0.6) {
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<std::size_t> any(0, labels - 1);
  Mask m(length, std::vector<bool>(labels));
  for (auto& row : m) {
    for (std::size_t l = 0; l < labels; ++l) row[l] = keep(rng);
    row[any(rng)] = true;
  }
  return m;
}

}  // namespace jcrf::testing
