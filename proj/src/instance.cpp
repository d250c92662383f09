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

#include "jcrf/instance.hpp"

#include "jcrf/errors.hpp"

namespace jcrf {

std::string PredicateInstance::lemma() const {
  auto dot = pb_sense.rfind('.');
  return dot == std::string::npos ? pb_sense : pb_sense.substr(0, dot);
}

namespace {

void check_column(const PredicateInstance& inst, const std::vector<BioTag>& tags,
                  const char* which) {
  if (tags.size() != inst.size()) {
    throw DataError(inst.instance_id + ": " + which + " column has " +
                    std::to_string(tags.size()) + " tags for " + std::to_string(inst.size()) +
                    " tokens");
  }
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i].is_verb() != (i == inst.predicate_index)) {
      throw DataError(inst.instance_id + ": " + which + " column must carry the verb tag at " +
                      "the predicate position " + std::to_string(inst.predicate_index) +
                      " only (position " + std::to_string(i) + " has '" + tags[i].str() + "')");
    }
  }
  try {
    check_well_formed(tags);
  } catch (const DataError& e) {
    throw DataError(inst.instance_id + ": " + which + " column: " + e.what());
  }
}

}  // namespace

void PredicateInstance::validate() const {
  if (tokens.empty()) throw DataError(instance_id + ": empty token sequence");
  if (predicate_index >= tokens.size()) {
    throw DataError(instance_id + ": predicate index " + std::to_string(predicate_index) +
                    " out of range");
  }
  if (vn_tags) check_column(*this, *vn_tags, "VN");
  if (pb_tags) check_column(*this, *pb_tags, "PB");
}

}  // namespace jcrf
