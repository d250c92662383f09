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

#include "jcrf/constraint_engine.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "jcrf/errors.hpp"
#include "json.hpp"

namespace jcrf {

void SemlinkMapping::add(const std::string& vn_class, const std::string& pb_sense,
                         RolePairSet pairs) {
  if (pairs.empty()) {
    throw DataError("Semlink entry " + vn_class + "|" + pb_sense + " has no role pairs");
  }
  entries_[{vn_class, pb_sense}] = Entry{std::move(pairs), true};
}

const RolePairSet* SemlinkMapping::find(const std::string& vn_class,
                                        const std::string& pb_sense) const {
  auto it = entries_.find({vn_class, pb_sense});
  return it == entries_.end() ? nullptr : &it->second.pairs;
}

std::vector<std::string> SemlinkMapping::resolve(const RoleInventory& vn, const RoleInventory& pb) {
  std::vector<std::string> report;
  for (auto& [key, entry] : entries_) {
    entry.resolved = true;
    for (const auto& [v, p] : entry.pairs) {
      for (const auto& [inv, name] : {std::pair{&vn, &v}, std::pair{&pb, &p}}) {
        if (inv->find(*name) == nullptr) {
          entry.resolved = false;
          report.push_back(key.first + "|" + key.second + ": unknown " +
                           to_string(inv->scheme()) + " role '" + *name + "'");
        }
      }
    }
  }
  return report;
}

SemlinkMapping read_semlink(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("Semlink JSON: ") + e.what(), 0);
  }
  if (!doc.is_object()) throw ParseError("Semlink JSON: top level must be an object", 0);
  SemlinkMapping mapping;
  for (const auto& [key, value] : doc.items()) {
    auto bar = key.find('|');
    if (bar == std::string::npos) {
      throw ParseError("Semlink key '" + key + "' is not <vn_class>|<pb_sense>", 0);
    }
    if (!value.is_array()) throw ParseError("Semlink entry '" + key + "' must be an array", 0);
    RolePairSet pairs;
    for (const auto& pair : value) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
        throw ParseError("Semlink entry '" + key + "' holds a non-[vn, pb] element", 0);
      }
      pairs.emplace(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    mapping.add(key.substr(0, bar), key.substr(bar + 1), std::move(pairs));
  }
  return mapping;
}

SemlinkMapping read_semlink_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_semlink(in);
}

void write_semlink(std::ostream& out, const SemlinkMapping& mapping) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, entry] : mapping.entries()) {
    auto& arr = doc[key.first + "|" + key.second] = nlohmann::json::array();
    for (const auto& [v, p] : entry.pairs) arr.push_back({v, p});
  }
  out << doc.dump(2) << '\n';
}

namespace {

struct SemlinkIndex {
  std::set<std::string> vn_roles;
  std::set<std::string> pb_roles;
  const RolePairSet* pairs;

  explicit SemlinkIndex(const RolePairSet& seml) : pairs(&seml) {
    for (const auto& [v, p] : seml) {
      vn_roles.insert(v);
      pb_roles.insert(p);
    }
  }

  bool allows(const BioTag& vn, const BioTag& pb) const {
    if (!vn.is_argument() || !pb.is_argument()) return true;
    if (pairs->count({vn.role, pb.role}) != 0) return true;
    return vn_roles.count(vn.role) == 0 && pb_roles.count(pb.role) == 0;
  }
};

}  // namespace

bool pair_allowed(const BioTag& vn, const BioTag& pb, const RolePairSet& seml) {
  return SemlinkIndex(seml).allows(vn, pb);
}

ConstraintMask compile_semlink_mask(const PredicateInstance& instance,
                                    const SemlinkMapping& mapping, const LabelSpace& space,
                                    const SemlinkOptions& options) {
  const auto length = static_cast<Eigen::Index>(instance.size());
  const auto labels = static_cast<Eigen::Index>(space.size());
  if (length == 0) throw DataError(instance.instance_id + ": empty instance");
  const auto* seml = mapping.find(instance.vn_class, instance.pb_sense);
  if (seml == nullptr) {
    if (options.strict) {
      throw DataError(instance.instance_id + ": no Semlink entry for " + instance.vn_class + "|" +
                      instance.pb_sense);
    }
    return ConstraintMask::all_true(length, labels);
  }
  SemlinkIndex index(*seml);
  BoolVector row(labels);
  for (Eigen::Index j = 0; j < labels; ++j) {
    const auto& l = space.label(static_cast<std::size_t>(j));
    row(j) = index.allows(l.vn, l.pb);
  }
  if (!row.any()) {
    throw InfeasibleError(instance.instance_id + ": Semlink entry disallows every label");
  }
  ConstraintMask mask{row.transpose().replicate(length, 1), Provenance::Semlink};
  return mask;
}

ConstraintMask completion_mask(const LabelSpace& space, std::span<const BioTag> observed_pb) {
  const auto length = static_cast<Eigen::Index>(observed_pb.size());
  const auto labels = static_cast<Eigen::Index>(space.size());
  ConstraintMask mask{BoolMatrix(length, labels), Provenance::Completion};
  for (Eigen::Index i = 0; i < length; ++i) {
    const auto& observed = observed_pb[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < labels; ++j) {
      mask.allowed(i, j) = space.label(static_cast<std::size_t>(j)).pb == observed;
    }
    if (!mask.allowed.row(i).any()) {
      throw InfeasibleError("no joint label has PB tag '" + observed.str() + "' (position " +
                            std::to_string(i) + ")");
    }
  }
  return mask;
}

ConstraintMask compile_completion_mask(const PredicateInstance& instance,
                                       const LabelSpace& space) {
  if (!instance.has_pb()) throw DataError(instance.instance_id + ": no observed PB column");
  if (instance.pb_tags->size() != instance.size()) {
    throw AlignmentError(instance.instance_id + ": PB column length differs from tokens");
  }
  try {
    return completion_mask(space, *instance.pb_tags);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(instance.instance_id + ": " + e.what());
  }
}

std::vector<Violation> find_violations(std::span<const BioTag> vn, std::span<const BioTag> pb,
                                       const PredicateInstance& instance,
                                       const SemlinkMapping& mapping) {
  if (vn.size() != pb.size()) throw AlignmentError(instance.instance_id + ": VN/PB length mismatch");
  std::vector<Violation> out;
  const auto* seml = mapping.find(instance.vn_class, instance.pb_sense);
  if (seml == nullptr) return out;
  SemlinkIndex index(*seml);
  for (std::size_t i = 0; i < vn.size(); ++i) {
    if (!index.allows(vn[i], pb[i])) out.push_back({i, vn[i], pb[i]});
  }
  return out;
}

bool count_violations(std::span<const BioTag> vn, std::span<const BioTag> pb,
                      const PredicateInstance& instance, const SemlinkMapping& mapping) {
  return !find_violations(vn, pb, instance, mapping).empty();
}

bool count_violations(std::span<const std::size_t> prediction, const PredicateInstance& instance,
                      const SemlinkMapping& mapping, const LabelSpace& space) {
  if (prediction.size() != instance.size()) {
    throw AlignmentError(instance.instance_id + ": prediction length differs from tokens");
  }
  auto mask = compile_semlink_mask(instance, mapping, space);
  for (std::size_t i = 0; i < prediction.size(); ++i) {
    if (!mask.allowed(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(prediction[i]))) {
      return true;
    }
  }
  return false;
}

std::vector<std::string> audit_gold(std::span<const PredicateInstance> corpus,
                                    const SemlinkMapping& mapping) {
  std::vector<std::string> out;
  for (const auto& inst : corpus) {
    if (!inst.has_joint()) continue;
    if (count_violations(*inst.vn_tags, *inst.pb_tags, inst, mapping)) {
      out.push_back(inst.instance_id);
    }
  }
  return out;
}

}  // namespace jcrf
