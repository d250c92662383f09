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

#include "jcrf/label_space.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "jcrf/errors.hpp"

namespace jcrf {

std::string to_string(Scheme scheme) { return scheme == Scheme::VN ? "VN" : "PB"; }

std::string to_string(RoleKind kind) {
  switch (kind) {
    case RoleKind::CoreArgument:
      return "CoreArgument";
    case RoleKind::Modifier:
      return "Modifier";
    case RoleKind::Verb:
      return "Verb";
    case RoleKind::Outside:
      return "Outside";
  }
  return {};
}

Scheme parse_scheme(std::string_view text) {
  if (text == "VN") return Scheme::VN;
  if (text == "PB") return Scheme::PB;
  throw ParseError("unknown scheme '" + std::string(text) + "'", 0);
}

RoleKind parse_role_kind(std::string_view text) {
  if (text == "CoreArgument") return RoleKind::CoreArgument;
  if (text == "Modifier") return RoleKind::Modifier;
  if (text == "Verb") return RoleKind::Verb;
  if (text == "Outside") return RoleKind::Outside;
  throw ParseError("unknown role kind '" + std::string(text) + "'", 0);
}

RoleInventory::RoleInventory(Scheme scheme, std::vector<RoleLabel> roles)
    : scheme_(scheme), roles_(std::move(roles)) {
  const std::string where = to_string(scheme) + " inventory: ";
  if (roles_.empty()) throw InventoryError(where + "empty");
  int verbs = 0;
  int outsides = 0;
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    const auto& r = roles_[i];
    if (r.scheme != scheme) throw InventoryError(where + "role '" + r.name + "' has foreign scheme");
    if (r.name.empty()) throw InventoryError(where + "empty role name");
    for (std::size_t j = 0; j < i; ++j) {
      if (roles_[j].name == r.name) throw InventoryError(where + "duplicate role '" + r.name + "'");
    }
    if (r.kind == RoleKind::Verb) {
      BioTag probe = BioTag::parse(r.name);
      if (!probe.is_verb()) {
        throw InventoryError(where + "verb role name '" + r.name + "' reads as a BIO tag");
      }
      verb_ = i;
      ++verbs;
    }
    if (r.kind == RoleKind::Outside) ++outsides;
  }
  if (verbs != 1) throw InventoryError(where + "needs exactly one Verb role");
  if (outsides != 1) throw InventoryError(where + "needs exactly one Outside role");
}

const RoleLabel* RoleInventory::find(std::string_view name) const {
  auto it = std::find_if(roles_.begin(), roles_.end(),
                         [&](const RoleLabel& r) { return r.name == name; });
  return it == roles_.end() ? nullptr : &*it;
}

std::vector<const RoleLabel*> RoleInventory::arguments() const {
  std::vector<const RoleLabel*> out;
  for (const auto& r : roles_) {
    if (r.kind == RoleKind::CoreArgument || r.kind == RoleKind::Modifier) out.push_back(&r);
  }
  return out;
}

std::vector<BioTag> RoleInventory::bio_tags() const {
  std::vector<BioTag> out{BioTag::outside(), BioTag::verb(verb().name)};
  for (const auto* r : arguments()) {
    out.push_back(BioTag::begin(r->name));
    out.push_back(BioTag::inside(r->name));
  }
  return out;
}

bool RoleInventory::admits(const BioTag& tag) const {
  switch (tag.prefix) {
    case Prefix::Outside:
      return true;
    case Prefix::Verb:
      return tag.role == verb().name;
    case Prefix::Begin:
    case Prefix::Inside: {
      const auto* r = find(tag.role);
      return r != nullptr && (r->kind == RoleKind::CoreArgument || r->kind == RoleKind::Modifier);
    }
  }
  return false;
}

std::pair<RoleInventory, RoleInventory> split_inventories(const std::vector<RoleLabel>& roles) {
  std::vector<RoleLabel> vn;
  std::vector<RoleLabel> pb;
  for (const auto& r : roles) (r.scheme == Scheme::VN ? vn : pb).push_back(r);
  return {RoleInventory(Scheme::VN, std::move(vn)), RoleInventory(Scheme::PB, std::move(pb))};
}

TagSet::TagSet(const RoleInventory& inventory) : tags_(inventory.bio_tags()) {
  std::sort(tags_.begin(), tags_.end(),
            [](const BioTag& a, const BioTag& b) { return a.str() < b.str(); });
  for (std::size_t i = 0; i < tags_.size(); ++i) index_.emplace(tags_[i].str(), i);
}

std::optional<std::size_t> TagSet::find(const BioTag& tag) const {
  auto it = index_.find(tag.str());
  if (it == index_.end() || tags_[it->second] != tag) return std::nullopt;
  return it->second;
}

std::size_t TagSet::index_of(const BioTag& tag) const {
  auto found = find(tag);
  if (!found) throw ReferenceError("tag '" + tag.str() + "' is not in the tag set");
  return *found;
}

ChainStructure TagSet::structure() const {
  const auto n = static_cast<Eigen::Index>(tags_.size());
  ChainStructure s{BoolMatrix(n, n), BoolVector(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    s.start(j) = bio_can_start(tags_[j]);
    for (Eigen::Index i = 0; i < n; ++i) s.transitions(i, j) = bio_follows(tags_[i], tags_[j]);
  }
  return s;
}

bool structurally_admissible(const BioTag& vn, const BioTag& pb) {
  if (vn.is_verb() || pb.is_verb()) return vn.is_verb() && pb.is_verb();
  if (vn.prefix == Prefix::Begin && pb.prefix == Prefix::Inside) return false;
  if (vn.prefix == Prefix::Inside && pb.prefix == Prefix::Begin) return false;
  return true;
}

namespace {

std::string pair_key(const BioTag& vn, const BioTag& pb) { return vn.str() + '\t' + pb.str(); }

}  // namespace

std::optional<std::size_t> LabelSpace::find(const BioTag& vn, const BioTag& pb) const {
  auto it = index_.find(pair_key(vn, pb));
  if (it == index_.end()) return std::nullopt;
  const auto& l = labels_[it->second];
  if (l.vn != vn || l.pb != pb) return std::nullopt;
  return it->second;
}

std::size_t LabelSpace::index_of(const BioTag& vn, const BioTag& pb) const {
  auto found = find(vn, pb);
  if (!found) throw ReferenceError("(" + vn.str() + ", " + pb.str() + ") is not a joint label");
  return *found;
}

ChainStructure LabelSpace::structure() const {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  ChainStructure s{BoolMatrix(n, n), BoolVector(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& next = labels_[j];
    s.start(j) = bio_can_start(next.vn) && bio_can_start(next.pb);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& prev = labels_[i];
      s.transitions(i, j) = bio_follows(prev.vn, next.vn) && bio_follows(prev.pb, next.pb);
    }
  }
  return s;
}

LabelSpace build_label_space(RoleInventory vn, RoleInventory pb, RolePairSet filter) {
  for (const auto& [v, p] : filter) {
    if (vn.find(v) == nullptr) throw ReferenceError("filter names unknown VN role '" + v + "'");
    if (pb.find(p) == nullptr) throw ReferenceError("filter names unknown PB role '" + p + "'");
  }
  LabelSpace space;
  for (const auto& v : vn.bio_tags()) {
    for (const auto& p : pb.bio_tags()) {
      if (!structurally_admissible(v, p)) continue;
      if (v.is_argument() && p.is_argument() && filter.count({v.role, p.role}) != 0) continue;
      space.labels_.push_back({v, p, 0});
    }
  }
  std::sort(space.labels_.begin(), space.labels_.end(),
            [](const JointLabel& a, const JointLabel& b) {
              return std::pair(a.vn.str(), a.pb.str()) < std::pair(b.vn.str(), b.pb.str());
            });
  for (std::size_t i = 0; i < space.labels_.size(); ++i) {
    space.labels_[i].index = i;
    space.index_.emplace(pair_key(space.labels_[i].vn, space.labels_[i].pb), i);
  }
  space.vn_ = std::move(vn);
  space.pb_ = std::move(pb);
  space.filter_ = std::move(filter);
  return space;
}

BioTag project(const JointLabel& label, Scheme scheme) {
  return scheme == Scheme::VN ? label.vn : label.pb;
}

std::vector<BioTag> project(const LabelSpace& space, std::span<const std::size_t> path,
                            Scheme scheme) {
  std::vector<BioTag> out;
  out.reserve(path.size());
  for (auto index : path) out.push_back(project(space.label(index), scheme));
  return out;
}

RolePairSet derive_cooccurrence_filter(std::span<const PredicateInstance> corpus,
                                       const RoleInventory& vn, const RoleInventory& pb,
                                       const CooccurrenceOptions& options) {
  RolePairSet attested;
  for (const auto& inst : corpus) {
    if (!inst.has_joint()) continue;
    const auto& v = *inst.vn_tags;
    const auto& p = *inst.pb_tags;
    if (v.size() != p.size()) {
      throw AlignmentError(inst.instance_id + ": VN and PB sequences differ in length");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_argument() && p[i].is_argument()) attested.emplace(v[i].role, p[i].role);
    }
  }
  RolePairSet filter;
  for (const auto* v : vn.arguments()) {
    for (const auto* p : pb.arguments()) {
      RolePair pair{v->name, p->name};
      bool modifier_pair = options.drop_vn_modifier_pairs && p->kind == RoleKind::Modifier;
      if (modifier_pair || attested.count(pair) == 0) filter.insert(std::move(pair));
    }
  }
  return filter;
}

std::vector<std::size_t> joint_indices(const PredicateInstance& instance, const LabelSpace& space) {
  if (!instance.has_joint()) throw DataError(instance.instance_id + ": not jointly labeled");
  const auto& v = *instance.vn_tags;
  const auto& p = *instance.pb_tags;
  if (v.size() != p.size()) {
    throw AlignmentError(instance.instance_id + ": VN and PB sequences differ in length");
  }
  std::vector<std::size_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto found = space.find(v[i], p[i]);
    if (!found) {
      throw DataError(instance.instance_id + ": position " + std::to_string(i) + " pair (" +
                      v[i].str() + ", " + p[i].str() + ") is outside the label space");
    }
    out[i] = *found;
  }
  return out;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    auto end = line.find('\t', begin);
    out.push_back(line.substr(begin, end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return out;
}

bool skip_line(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line.empty() || line.front() == '#';
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return in;
}

}  // namespace

std::vector<RoleLabel> read_inventory(std::istream& in) {
  std::vector<RoleLabel> roles;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 3) throw ParseError("inventory line needs 3 tab-separated fields", lineno);
    try {
      roles.push_back({parse_scheme(fields[0]), fields[1], parse_role_kind(fields[2])});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return roles;
}

std::vector<RoleLabel> read_inventory_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_inventory(in);
}

void write_inventory(std::ostream& out, const RoleInventory& vn, const RoleInventory& pb) {
  out << "# scheme\tname\tkind\n";
  for (const auto* inv : {&vn, &pb}) {
    for (const auto& r : inv->roles()) {
      out << to_string(r.scheme) << '\t' << r.name << '\t' << to_string(r.kind) << '\n';
    }
  }
}

RolePairSet read_filter(std::istream& in) {
  RolePairSet filter;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2) throw ParseError("filter line needs 2 tab-separated fields", lineno);
    filter.emplace(fields[0], fields[1]);
  }
  return filter;
}

RolePairSet read_filter_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_filter(in);
}

void write_filter(std::ostream& out, const RolePairSet& filter) {
  out << "# vn_role\tpb_role\n";
  for (const auto& [v, p] : filter) out << v << '\t' << p << '\n';
}

}  // namespace jcrf
