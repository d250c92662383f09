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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "jcrf/crf.hpp"
#include "jcrf/instance.hpp"
#include "jcrf/label_space.hpp"

namespace jcrf {

/// WP reads only the sentence and predicate descriptors; COMP may also read
/// the observed PropBank column.
enum class FeatureMode { WP, COMP };

std::string to_string(FeatureMode mode);
FeatureMode parse_feature_mode(std::string_view text);

enum class Template {
  Word,
  WordPrev1,
  WordNext1,
  WordPrev2,
  WordNext2,
  Lower,
  RelativePosition,
  Lemma,
  Sense,
  Class,
  IsPredicate,
  ObservedPb,
  ObservedPbPrev,
  ObservedPbNext,
};

/// Stable identifier that enters the feature hash, e.g. "w[-1]".
std::string_view template_id(Template t);
Template parse_template(std::string_view id);

/// Templates that depend only on the tokens (shared by all predicates of a
/// sentence).
bool token_only(Template t);
bool reads_observed_pb(Template t);

std::vector<Template> default_templates(FeatureMode mode);

struct Feature {
  std::uint32_t index = 0;
  double value = 0.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};
using SparseFeatures = std::vector<Feature>;

/// 64-bit FNV-1a over "<template id>\x1f<value>".
std::uint64_t feature_hash(std::string_view template_id, std::string_view value);

/// Signed hashing: bucket = hash mod dim, sign from the top bit.
Feature hash_feature(std::string_view template_id, std::string_view value, std::size_t hash_dim);

/// Hashed linear emission scorer: emissions(i, l) = sum_f value_f * W(f, l).
class FeatureExtractor {
 public:
  FeatureExtractor() = default;
  FeatureExtractor(FeatureMode mode, std::size_t hash_dim, std::size_t labels);
  /// Throws DataError if a WP extractor is given a template that reads the
  /// observed PB column.
  FeatureExtractor(FeatureMode mode, std::size_t hash_dim, std::size_t labels,
                   std::vector<Template> templates);

  FeatureMode mode() const { return mode_; }
  std::size_t hash_dim() const { return hash_dim_; }
  std::size_t labels() const { return static_cast<std::size_t>(weights_.cols()); }
  const std::vector<Template>& templates() const { return templates_; }

  Matrix<double>& weights() { return weights_; }
  const Matrix<double>& weights() const { return weights_; }

  /// Token-template features followed by predicate-template features.
  SparseFeatures featurize(const PredicateInstance& instance, std::size_t position) const;
  SparseFeatures token_features(const std::vector<std::string>& tokens, std::size_t position) const;
  SparseFeatures predicate_features(const PredicateInstance& instance, std::size_t position) const;

  /// The token-template part of the emissions; may be computed once per
  /// sentence and passed to score_emissions for each of its predicates.
  Matrix<double> token_emissions(const std::vector<std::string>& tokens) const;

  Matrix<double> score_emissions(const PredicateInstance& instance) const;
  /// Same result as score_emissions(instance), reusing a precomputed
  /// token_emissions(instance.tokens).
  Matrix<double> score_emissions(const PredicateInstance& instance,
                                 const Matrix<double>& token_part) const;

  /// W += sum_i featurize(instance, i) (x) scale * gradient.row(i), written
  /// into a sparse row accumulator.
  template <typename Accumulator>
  void accumulate(const PredicateInstance& instance, const Matrix<double>& emission_gradient,
                  double scale, Accumulator& rows) const {
    for (std::size_t i = 0; i < instance.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      for (const auto& f : featurize(instance, i)) {
        auto [it, fresh] = rows.try_emplace(f.index);
        if (fresh) it->second = RowVector<double>::Zero(weights_.cols());
        it->second += (scale * f.value) * emission_gradient.row(r);
      }
    }
  }

  friend bool operator==(const FeatureExtractor&, const FeatureExtractor&) = default;

 private:
  void add_features(Template t, const PredicateInstance* instance,
                    const std::vector<std::string>& tokens, std::size_t position,
                    SparseFeatures& out) const;

  FeatureMode mode_ = FeatureMode::WP;
  std::size_t hash_dim_ = 1u << 20;
  std::vector<Template> templates_;
  Matrix<double> weights_;
};

/// Emissions for a joint label space; AlignmentError if the extractor was
/// sized for a different label count.
Matrix<double> score_emissions(const PredicateInstance& instance, const FeatureExtractor& extractor,
                               const LabelSpace& space);

}  // namespace jcrf
