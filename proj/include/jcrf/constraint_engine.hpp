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
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jcrf/label_space.hpp"
#include "jcrf/masks.hpp"

namespace jcrf {

/// (VN class, PB roleset) -> the set of legal (VN role, PB role) argument
/// pairs for a predicate with that class and roleset.
class SemlinkMapping {
 public:
  struct Entry {
    RolePairSet pairs;
    /// False when some pair names a role the inventories do not define.
    bool resolved = true;
  };
  using Key = std::pair<std::string, std::string>;

  /// Throws DataError on an empty pair set.
  void add(const std::string& vn_class, const std::string& pb_sense, RolePairSet pairs);

  const RolePairSet* find(const std::string& vn_class, const std::string& pb_sense) const;
  bool covers(const PredicateInstance& instance) const {
    return find(instance.vn_class, instance.pb_sense) != nullptr;
  }

  const std::map<Key, Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Marks entries whose role names are unknown to the inventories and
  /// returns one diagnostic line per unresolved name.
  std::vector<std::string> resolve(const RoleInventory& vn, const RoleInventory& pb);

 private:
  std::map<Key, Entry> entries_;
};

/// JSON object keyed by "<vn_class>|<pb_sense>", each value an array of
/// [vn_role, pb_role] arrays.
SemlinkMapping read_semlink(std::istream& in);
SemlinkMapping read_semlink_file(const std::string& path);
void write_semlink(std::ostream& out, const SemlinkMapping& mapping);

/// Role-level admissibility of one tag pair under seml(u). O and Verb sides
/// are wildcards; otherwise a role mentioned in seml(u) may only pair with
/// the partners seml(u) lists for it.
bool pair_allowed(const BioTag& vn, const BioTag& pb, const RolePairSet& seml);

struct SemlinkOptions {
  /// Throw instead of returning an all-true mask for an uncovered predicate.
  bool strict = false;
};

/// Position-uniform mask realizing the Semlink constraint for one predicate.
/// Uncovered predicates yield an all-true mask with provenance None.
ConstraintMask compile_semlink_mask(const PredicateInstance& instance,
                                    const SemlinkMapping& mapping, const LabelSpace& space,
                                    const SemlinkOptions& options = {});

/// Allows at position i exactly the labels whose PB side equals observed[i].
/// Throws InfeasibleError naming the first position with no such label.
ConstraintMask completion_mask(const LabelSpace& space, std::span<const BioTag> observed_pb);

/// completion_mask over the instance's PB column; DataError if it has none.
ConstraintMask compile_completion_mask(const PredicateInstance& instance, const LabelSpace& space);

struct Violation {
  std::size_t position = 0;
  BioTag vn;
  BioTag pb;
};

/// Positions of (vn[i], pb[i]) that disagree with the instance's Semlink
/// entry; empty for uncovered predicates.
std::vector<Violation> find_violations(std::span<const BioTag> vn, std::span<const BioTag> pb,
                                       const PredicateInstance& instance,
                                       const SemlinkMapping& mapping);

bool count_violations(std::span<const BioTag> vn, std::span<const BioTag> pb,
                      const PredicateInstance& instance, const SemlinkMapping& mapping);

/// True iff any label of `prediction` is disallowed by the instance's mask.
bool count_violations(std::span<const std::size_t> prediction, const PredicateInstance& instance,
                      const SemlinkMapping& mapping, const LabelSpace& space);

/// Ids of jointly labeled instances whose gold pairs violate their entry.
std::vector<std::string> audit_gold(std::span<const PredicateInstance> corpus,
                                    const SemlinkMapping& mapping);

}  // namespace jcrf
