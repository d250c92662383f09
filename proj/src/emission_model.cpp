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

#include "jcrf/emission_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "jcrf/errors.hpp"

namespace jcrf {

std::string to_string(FeatureMode mode) { return mode == FeatureMode::WP ? "WP" : "COMP"; }

FeatureMode parse_feature_mode(std::string_view text) {
  if (text == "WP") return FeatureMode::WP;
  if (text == "COMP") return FeatureMode::COMP;
  throw ParseError("unknown feature mode '" + std::string(text) + "'", 0);
}

namespace {

constexpr std::array<std::pair<Template, std::string_view>, 14> kTemplateIds{{
    {Template::Word, "w[0]"},
    {Template::WordPrev1, "w[-1]"},
    {Template::WordNext1, "w[+1]"},
    {Template::WordPrev2, "w[-2]"},
    {Template::WordNext2, "w[+2]"},
    {Template::Lower, "lc"},
    {Template::RelativePosition, "rel"},
    {Template::Lemma, "lemma"},
    {Template::Sense, "sense"},
    {Template::Class, "class"},
    {Template::IsPredicate, "is_pred"},
    {Template::ObservedPb, "pb[0]"},
    {Template::ObservedPbPrev, "pb[-1]"},
    {Template::ObservedPbNext, "pb[+1]"},
}};

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string word_at(const std::vector<std::string>& tokens, std::ptrdiff_t i) {
  if (i < 0) return "<BOS>";
  if (i >= static_cast<std::ptrdiff_t>(tokens.size())) return "<EOS>";
  return tokens[static_cast<std::size_t>(i)];
}

std::string relative_position(std::size_t position, std::size_t predicate) {
  if (position == predicate) return "0";
  const std::size_t d = position < predicate ? predicate - position : position - predicate;
  const char* side = position < predicate ? "L:" : "R:";
  const char* bucket = d == 1 ? "1" : d == 2 ? "2" : d <= 4 ? "3-4" : d <= 7 ? "5-7" : "8+";
  return std::string(side) + bucket;
}

}  // namespace

std::string_view template_id(Template t) {
  for (const auto& [tmpl, id] : kTemplateIds) {
    if (tmpl == t) return id;
  }
  return {};
}

Template parse_template(std::string_view id) {
  for (const auto& [tmpl, name] : kTemplateIds) {
    if (name == id) return tmpl;
  }
  throw ParseError("unknown feature template '" + std::string(id) + "'", 0);
}

bool token_only(Template t) {
  switch (t) {
    case Template::Word:
    case Template::WordPrev1:
    case Template::WordNext1:
    case Template::WordPrev2:
    case Template::WordNext2:
    case Template::Lower:
      return true;
    default:
      return false;
  }
}

bool reads_observed_pb(Template t) {
  return t == Template::ObservedPb || t == Template::ObservedPbPrev ||
         t == Template::ObservedPbNext;
}

std::vector<Template> default_templates(FeatureMode mode) {
  std::vector<Template> t{Template::Word,      Template::WordPrev1,        Template::WordNext1,
                          Template::WordPrev2, Template::WordNext2,        Template::Lower,
                          Template::RelativePosition, Template::Lemma,     Template::Sense,
                          Template::Class,     Template::IsPredicate};
  if (mode == FeatureMode::COMP) {
    t.insert(t.end(), {Template::ObservedPb, Template::ObservedPbPrev, Template::ObservedPbNext});
  }
  return t;
}

std::uint64_t feature_hash(std::string_view template_id, std::string_view value) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (char c : template_id) mix(static_cast<unsigned char>(c));
  mix(0x1f);
  for (char c : value) mix(static_cast<unsigned char>(c));
  return h;
}

Feature hash_feature(std::string_view template_id, std::string_view value, std::size_t hash_dim) {
  const auto h = feature_hash(template_id, value);
  return {static_cast<std::uint32_t>(h % hash_dim), (h >> 63) != 0 ? -1.0 : 1.0};
}

FeatureExtractor::FeatureExtractor(FeatureMode mode, std::size_t hash_dim, std::size_t labels)
    : FeatureExtractor(mode, hash_dim, labels, default_templates(mode)) {}

FeatureExtractor::FeatureExtractor(FeatureMode mode, std::size_t hash_dim, std::size_t labels,
                                   std::vector<Template> templates)
    : mode_(mode),
      hash_dim_(hash_dim),
      templates_(std::move(templates)),
      weights_(Matrix<double>::Zero(static_cast<Eigen::Index>(hash_dim),
                                    static_cast<Eigen::Index>(labels))) {
  if (hash_dim == 0 || hash_dim > (std::size_t{1} << 32)) {
    throw DataError("hash dimension must be in [1, 2^32]");
  }
  if (mode == FeatureMode::WP) {
    for (auto t : templates_) {
      if (reads_observed_pb(t)) {
        throw DataError("WP extractor cannot use template '" + std::string(template_id(t)) + "'");
      }
    }
  }
}

void FeatureExtractor::add_features(Template t, const PredicateInstance* instance,
                                    const std::vector<std::string>& tokens, std::size_t position,
                                    SparseFeatures& out) const {
  const auto i = static_cast<std::ptrdiff_t>(position);
  const auto id = template_id(t);
  auto emit = [&](std::string_view value) { out.push_back(hash_feature(id, value, hash_dim_)); };
  auto observed = [&](std::ptrdiff_t j) -> std::string {
    if (!instance->has_pb()) {
      throw DataError(instance->instance_id + ": COMP features need an observed PB column");
    }
    if (j < 0) return "<BOS>";
    if (j >= static_cast<std::ptrdiff_t>(instance->size())) return "<EOS>";
    return (*instance->pb_tags)[static_cast<std::size_t>(j)].str();
  };
  switch (t) {
    case Template::Word:
      emit(word_at(tokens, i));
      break;
    case Template::WordPrev1:
      emit(word_at(tokens, i - 1));
      break;
    case Template::WordNext1:
      emit(word_at(tokens, i + 1));
      break;
    case Template::WordPrev2:
      emit(word_at(tokens, i - 2));
      break;
    case Template::WordNext2:
      emit(word_at(tokens, i + 2));
      break;
    case Template::Lower:
      emit(lowercase(word_at(tokens, i)));
      break;
    case Template::RelativePosition:
      emit(relative_position(position, instance->predicate_index));
      break;
    case Template::Lemma:
      emit(instance->lemma());
      break;
    case Template::Sense:
      emit(instance->pb_sense);
      break;
    case Template::Class:
      emit(instance->vn_class);
      break;
    case Template::IsPredicate:
      if (position == instance->predicate_index) emit("1");
      break;
    case Template::ObservedPb:
      emit(observed(i));
      break;
    case Template::ObservedPbPrev:
      emit(observed(i - 1));
      break;
    case Template::ObservedPbNext:
      emit(observed(i + 1));
      break;
  }
}

SparseFeatures FeatureExtractor::token_features(const std::vector<std::string>& tokens,
                                                std::size_t position) const {
  SparseFeatures out;
  for (auto t : templates_) {
    if (token_only(t)) add_features(t, nullptr, tokens, position, out);
  }
  return out;
}

SparseFeatures FeatureExtractor::predicate_features(const PredicateInstance& instance,
                                                    std::size_t position) const {
  SparseFeatures out;
  for (auto t : templates_) {
    if (!token_only(t)) add_features(t, &instance, instance.tokens, position, out);
  }
  return out;
}

SparseFeatures FeatureExtractor::featurize(const PredicateInstance& instance,
                                           std::size_t position) const {
  auto out = token_features(instance.tokens, position);
  auto rest = predicate_features(instance, position);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

Matrix<double> FeatureExtractor::token_emissions(const std::vector<std::string>& tokens) const {
  Matrix<double> e = Matrix<double>::Zero(static_cast<Eigen::Index>(tokens.size()), weights_.cols());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (const auto& f : token_features(tokens, i)) {
      e.row(static_cast<Eigen::Index>(i)) += f.value * weights_.row(f.index);
    }
  }
  return e;
}

Matrix<double> FeatureExtractor::score_emissions(const PredicateInstance& instance) const {
  return score_emissions(instance, token_emissions(instance.tokens));
}

Matrix<double> FeatureExtractor::score_emissions(const PredicateInstance& instance,
                                                 const Matrix<double>& token_part) const {
  if (token_part.rows() != static_cast<Eigen::Index>(instance.size()) ||
      token_part.cols() != weights_.cols()) {
    throw AlignmentError(instance.instance_id + ": cached token emissions have the wrong shape");
  }
  Matrix<double> e = token_part;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    for (const auto& f : predicate_features(instance, i)) {
      e.row(static_cast<Eigen::Index>(i)) += f.value * weights_.row(f.index);
    }
  }
  return e;
}

Matrix<double> score_emissions(const PredicateInstance& instance, const FeatureExtractor& extractor,
                               const LabelSpace& space) {
  if (extractor.labels() != space.size()) {
    throw AlignmentError("extractor has " + std::to_string(extractor.labels()) +
                         " label columns, space has " + std::to_string(space.size()));
  }
  return extractor.score_emissions(instance);
}

}  // namespace jcrf
