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
#include <optional>
#include <string>
#include <vector>

#include "jcrf/bio.hpp"

namespace jcrf {

/// One tagging problem: a sentence, one predicate in it, the predicate's
/// VerbNet class and PropBank roleset, and whatever label columns are known.
struct PredicateInstance {
  std::string instance_id;
  std::string sentence_id;
  std::vector<std::string> tokens;
  std::size_t predicate_index = 0;
  std::string vn_class;  // empty when not annotated
  std::string pb_sense;  // roleset id, e.g. "run.01"
  std::optional<std::vector<BioTag>> vn_tags;
  std::optional<std::vector<BioTag>> pb_tags;

  std::size_t size() const { return tokens.size(); }
  bool has_vn() const { return vn_tags.has_value(); }
  bool has_pb() const { return pb_tags.has_value(); }
  bool has_joint() const { return has_vn() && has_pb(); }

  /// Lemma part of the roleset id ("run.01" -> "run").
  std::string lemma() const;

  /// Checks predicate position and label lengths, and that annotated
  /// sequences carry the Verb tag at the predicate and nowhere else.
  /// Throws DataError naming the instance.
  void validate() const;

  friend bool operator==(const PredicateInstance&, const PredicateInstance&) = default;
};

}  // namespace jcrf
