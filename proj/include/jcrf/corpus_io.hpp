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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jcrf/instance.hpp"
#include "jcrf/label_space.hpp"

namespace jcrf {

// Column format, tab-separated, one token per line, blank line between
// sentences:
//
//   TOKEN  PRED_FLAG  VN_CLASS  (VN_k  PB_k) for each predicate k
//
// PRED_FLAG holds the roleset id ("run.01") at the row of each predicate and
// "-" elsewhere; VN_CLASS holds the predicate's class at that row ("-" when
// unknown or elsewhere). The k-th flagged row owns the k-th column pair. A
// label column made entirely of "-" is absent (e.g. VN in PB-only data).

struct CorpusOptions {
  /// When set, every tag must belong to the corresponding BIO expansion.
  const RoleInventory* vn = nullptr;
  const RoleInventory* pb = nullptr;
};

/// Throws ParseError with a 1-based line number on ragged rows, malformed
/// or unknown tags, and predicate-marker/column-count mismatches.
std::vector<PredicateInstance> read_corpus(std::istream& in, const CorpusOptions& options = {});
std::vector<PredicateInstance> read_corpus_file(const std::string& path,
                                                const CorpusOptions& options = {});

/// Writes instances back in the column format, grouping consecutive
/// instances of the same sentence.
void write_corpus(std::ostream& out, std::span<const PredicateInstance> instances);
void write_corpus_file(const std::string& path, std::span<const PredicateInstance> instances);

}  // namespace jcrf
