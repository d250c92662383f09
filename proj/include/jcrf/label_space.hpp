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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jcrf/bio.hpp"
#include "jcrf/instance.hpp"
#include "jcrf/masks.hpp"

namespace jcrf {

struct RoleLabel {
  Scheme scheme = Scheme::VN;
  std::string name;
  RoleKind kind = RoleKind::CoreArgument;

  friend bool operator==(const RoleLabel&, const RoleLabel&) = default;
};

std::string to_string(Scheme scheme);
std::string to_string(RoleKind kind);
Scheme parse_scheme(std::string_view text);
RoleKind parse_role_kind(std::string_view text);

/// The roles of one scheme. Names are unique; exactly one Verb and one
/// Outside role exist.
class RoleInventory {
 public:
  RoleInventory() = default;
  /// Throws InventoryError on duplicates, a foreign scheme, or a missing or
  /// repeated Verb/Outside role.
  RoleInventory(Scheme scheme, std::vector<RoleLabel> roles);

  Scheme scheme() const { return scheme_; }
  const std::vector<RoleLabel>& roles() const { return roles_; }
  const RoleLabel* find(std::string_view name) const;
  const RoleLabel& verb() const { return roles_[verb_]; }

  /// Argument roles (core and modifier), in inventory order.
  std::vector<const RoleLabel*> arguments() const;

  /// O, the Verb tag, then B-/I- for each argument role.
  std::vector<BioTag> bio_tags() const;

  /// True iff `tag` is in this scheme's BIO expansion.
  bool admits(const BioTag& tag) const;

  friend bool operator==(const RoleInventory&, const RoleInventory&) = default;

 private:
  Scheme scheme_ = Scheme::VN;
  std::vector<RoleLabel> roles_;
  std::size_t verb_ = 0;
};

/// Splits a mixed-scheme role list (as read from an inventory file).
std::pair<RoleInventory, RoleInventory> split_inventories(const std::vector<RoleLabel>& roles);

/// (VN role name, PB role name).
using RolePair = std::pair<std::string, std::string>;
using RolePairSet = std::set<RolePair>;

/// The BIO expansion of a single scheme, indexed. Used by the single-scheme
/// chains of the multitask and dedicated-PB configurations.
class TagSet {
 public:
  TagSet() = default;
  explicit TagSet(const RoleInventory& inventory);

  std::size_t size() const { return tags_.size(); }
  const BioTag& tag(std::size_t index) const { return tags_[index]; }
  const std::vector<BioTag>& tags() const { return tags_; }
  std::optional<std::size_t> find(const BioTag& tag) const;
  /// Throws ReferenceError when absent.
  std::size_t index_of(const BioTag& tag) const;
  ChainStructure structure() const;

 private:
  std::vector<BioTag> tags_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct JointLabel {
  BioTag vn;
  BioTag pb;
  std::size_t index = 0;

  /// "<vn>|<pb>"
  std::string str() const { return vn.str() + "|" + pb.str(); }
};

/// The structural rules on a pair: no B/I or I/B mixing across schemes, and
/// a Verb tag pairs only with the other scheme's Verb tag.
bool structurally_admissible(const BioTag& vn, const BioTag& pb);

/// Immutable reduced joint label inventory.
class LabelSpace {
 public:
  LabelSpace() = default;

  std::size_t size() const { return labels_.size(); }
  const std::vector<JointLabel>& labels() const { return labels_; }
  const JointLabel& label(std::size_t index) const { return labels_[index]; }

  std::optional<std::size_t> find(const BioTag& vn, const BioTag& pb) const;
  /// Throws ReferenceError when the pair is not a label of this space.
  std::size_t index_of(const BioTag& vn, const BioTag& pb) const;

  const RoleInventory& vn_inventory() const { return vn_; }
  const RoleInventory& pb_inventory() const { return pb_; }
  const RolePairSet& cooccurrence_filter() const { return filter_; }

  /// Transition (row = previous) and start admissibility; I-X must continue
  /// B-X or I-X on each scheme's projection independently.
  ChainStructure structure() const;

  friend LabelSpace build_label_space(RoleInventory vn, RoleInventory pb, RolePairSet filter);

 private:
  std::vector<JointLabel> labels_;
  RoleInventory vn_;
  RoleInventory pb_;
  RolePairSet filter_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// BIO cross product of the two inventories minus structurally inadmissible
/// pairs and pairs whose role names are in `filter`. Labels are ordered by
/// (vn tag string, pb tag string). Throws ReferenceError if the filter names
/// a role neither inventory defines.
LabelSpace build_label_space(RoleInventory vn, RoleInventory pb, RolePairSet filter = {});

BioTag project(const JointLabel& label, Scheme scheme);

/// Projects a sequence of label indices onto one scheme.
std::vector<BioTag> project(const LabelSpace& space, std::span<const std::size_t> path, Scheme scheme);

struct CooccurrenceOptions {
  /// Also drop every (VN argument, PB modifier) pair, on the grounds that
  /// VerbNet roles align with PropBank core arguments rather than modifiers.
  bool drop_vn_modifier_pairs = false;
};

/// Argument role pairs never attested together at a token of a jointly
/// annotated instance. Instances without both label columns are ignored.
/// Throws AlignmentError on gold sequences of unequal length.
RolePairSet derive_cooccurrence_filter(std::span<const PredicateInstance> corpus,
                                       const RoleInventory& vn, const RoleInventory& pb,
                                       const CooccurrenceOptions& options = {});

/// Maps each token of a jointly labeled instance to its label index. Throws
/// DataError (with the instance id) for pairs outside the space.
std::vector<std::size_t> joint_indices(const PredicateInstance& instance, const LabelSpace& space);

// Text formats: "<scheme>\t<name>\t<kind>" per inventory line and
// "<vn_name>\t<pb_name>" per filter line; '#' starts a comment line.
std::vector<RoleLabel> read_inventory(std::istream& in);
std::vector<RoleLabel> read_inventory_file(const std::string& path);
void write_inventory(std::ostream& out, const RoleInventory& vn, const RoleInventory& pb);
RolePairSet read_filter(std::istream& in);
RolePairSet read_filter_file(const std::string& path);
void write_filter(std::ostream& out, const RolePairSet& filter);

}  // namespace jcrf
