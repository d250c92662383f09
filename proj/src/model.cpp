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

#include "jcrf/model.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "jcrf/errors.hpp"
#include "json.hpp"

namespace jcrf {

using nlohmann::json;

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Joint:
      return "joint";
    case Regime::Multitask:
      return "multitask";
    case Regime::JointPB:
      return "joint-pb";
    case Regime::Marginal:
      return "marginal";
    case Regime::MarginalSeml:
      return "marginal-seml";
  }
  return {};
}

Regime parse_regime(std::string_view text) {
  for (auto r : {Regime::Joint, Regime::Multitask, Regime::JointPB, Regime::Marginal,
                 Regime::MarginalSeml}) {
    if (to_string(r) == text) return r;
  }
  throw ParseError("unknown regime '" + std::string(text) + "'", 0);
}

ChainModel::ChainModel(FeatureMode mode, std::size_t hash_dim, ChainStructure s)
    : extractor(mode, hash_dim, static_cast<std::size_t>(s.size())),
      params(ChainParameters<double>::zeros(s.size())),
      structure(std::move(s)) {}

Model Model::create(Regime regime, LabelSpace space, FeatureMode mode, std::size_t hash_dim) {
  Model m;
  m.regime = regime;
  m.vn_tags = TagSet(space.vn_inventory());
  m.pb_tags = TagSet(space.pb_inventory());
  if (regime != Regime::Multitask) m.joint.emplace(mode, hash_dim, space.structure());
  if (regime == Regime::Multitask) m.vn.emplace(mode, hash_dim, m.vn_tags.structure());
  if (regime == Regime::Multitask || regime == Regime::JointPB) {
    m.pb.emplace(mode, hash_dim, m.pb_tags.structure());
  }
  m.space = std::move(space);
  return m;
}

namespace {

Prediction decode_multitask(const Model& model, const PredicateInstance& instance,
                            const SemlinkMapping* mapping, const DecodeOptions& options) {
  Prediction out;
  auto vn_lattice = model.vn->lattice(instance);
  std::optional<ConstraintMask> vn_mask;
  if (options.completion) {
    if (!instance.has_pb()) throw DataError(instance.instance_id + ": completion needs a PB column");
    const auto& observed = *instance.pb_tags;
    const RolePairSet* seml = mapping != nullptr
                                  ? mapping->find(instance.vn_class, instance.pb_sense)
                                  : nullptr;
    if (seml == nullptr && options.strict_semlink && mapping != nullptr) {
      throw DataError(instance.instance_id + ": no Semlink entry");
    }
    vn_mask = ConstraintMask{BoolMatrix(vn_lattice.length(), vn_lattice.labels()),
                             Provenance::Completion};
    for (Eigen::Index i = 0; i < vn_lattice.length(); ++i) {
      const auto& p = observed[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < vn_lattice.labels(); ++j) {
        const auto& v = model.vn_tags.tag(static_cast<std::size_t>(j));
        vn_mask->allowed(i, j) =
            structurally_admissible(v, p) && (seml == nullptr || pair_allowed(v, p, *seml));
      }
    }
    out.pb = observed;
  } else {
    auto pb_lattice = model.pb->lattice(instance);
    auto pb_best = viterbi(pb_lattice);
    for (auto j : pb_best.path) out.pb.push_back(model.pb_tags.tag(j));
  }
  auto vn_best = viterbi(vn_lattice, vn_mask ? &*vn_mask : nullptr);
  for (auto j : vn_best.path) out.vn.push_back(model.vn_tags.tag(j));
  return out;
}

}  // namespace

Prediction decode(const Model& model, const PredicateInstance& instance,
                  const SemlinkMapping* mapping, const DecodeOptions& options) {
  if (instance.size() == 0) throw DataError(instance.instance_id + ": empty instance");
  if (model.regime == Regime::Multitask) return decode_multitask(model, instance, mapping, options);

  const auto& chain = *model.joint;
  auto lattice = chain.lattice(instance);
  std::optional<ConstraintMask> mask;
  if (mapping != nullptr && (options.use_semlink || options.completion)) {
    SemlinkOptions so{options.strict_semlink};
    mask = compile_semlink_mask(instance, *mapping, model.space, so);
  }
  if (options.completion) {
    auto completion = compile_completion_mask(instance, model.space);
    mask = mask ? intersect(completion, *mask) : std::move(completion);
  }
  auto best = viterbi(lattice, mask ? &*mask : nullptr);
  Prediction out;
  out.vn = project(model.space, best.path, Scheme::VN);
  out.pb = project(model.space, best.path, Scheme::PB);
  out.joint = std::move(best.path);
  return out;
}

PredicateInstance with_prediction(PredicateInstance instance, const Prediction& prediction) {
  instance.vn_tags = prediction.vn;
  instance.pb_tags = prediction.pb;
  return instance;
}

namespace {

json vector_json(const Vector<double>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector<double> vector_from(const json& a, Eigen::Index n, const char* what) {
  if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != n) {
    throw ParseError(std::string("model: '") + what + "' has the wrong size", 0);
  }
  Vector<double> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = a[static_cast<std::size_t>(i)].get<double>();
  return v;
}

json chain_json(const ChainModel& chain, const std::vector<std::string>& label_names) {
  const auto& ex = chain.extractor;
  json j;
  j["labels"] = label_names;
  j["mode"] = to_string(ex.mode());
  j["hash_dim"] = ex.hash_dim();
  json templates = json::array();
  for (auto t : ex.templates()) templates.push_back(std::string(template_id(t)));
  j["templates"] = templates;
  j["start"] = vector_json(chain.params.start);
  j["end"] = vector_json(chain.params.end);
  json trans = json::array();
  for (Eigen::Index r = 0; r < chain.params.transitions.rows(); ++r) {
    trans.push_back(vector_json(chain.params.transitions.row(r).transpose()));
  }
  j["transitions"] = trans;
  json rows = json::array();
  const auto& w = ex.weights();
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    if ((w.row(r).array() == 0.0).all()) continue;
    rows.push_back(json::array({r, vector_json(w.row(r).transpose())}));
  }
  j["weights"] = rows;
  return j;
}

ChainModel chain_from(const json& j, ChainStructure structure,
                      const std::vector<std::string>& label_names) {
  if (j.at("labels").get<std::vector<std::string>>() != label_names) {
    throw ParseError("model: chain labels do not match the rebuilt label set", 0);
  }
  std::vector<Template> templates;
  for (const auto& t : j.at("templates")) templates.push_back(parse_template(t.get<std::string>()));
  const auto n = structure.size();
  ChainModel chain;
  chain.extractor = FeatureExtractor(parse_feature_mode(j.at("mode").get<std::string>()),
                                     j.at("hash_dim").get<std::size_t>(),
                                     static_cast<std::size_t>(n), std::move(templates));
  chain.params.start = vector_from(j.at("start"), n, "start");
  chain.params.end = vector_from(j.at("end"), n, "end");
  const auto& trans = j.at("transitions");
  if (static_cast<Eigen::Index>(trans.size()) != n) {
    throw ParseError("model: 'transitions' has the wrong size", 0);
  }
  chain.params.transitions.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    chain.params.transitions.row(r) =
        vector_from(trans[static_cast<std::size_t>(r)], n, "transitions").transpose();
  }
  auto& w = chain.extractor.weights();
  for (const auto& entry : j.at("weights")) {
    const auto r = entry.at(0).get<Eigen::Index>();
    if (r < 0 || r >= w.rows()) throw ParseError("model: weight row out of range", 0);
    w.row(r) = vector_from(entry.at(1), n, "weights").transpose();
  }
  chain.structure = std::move(structure);
  return chain;
}

std::vector<std::string> joint_names(const LabelSpace& space) {
  std::vector<std::string> out;
  for (const auto& l : space.labels()) out.push_back(l.str());
  return out;
}

std::vector<std::string> tag_names(const TagSet& tags) { return tag_strings(tags.tags()); }

}  // namespace

void save_model(std::ostream& out, const Model& model) {
  json j;
  j["format"] = "jcrf-model";
  j["version"] = Model::kFormatVersion;
  j["regime"] = to_string(model.regime);
  json inventory = json::array();
  for (const auto* inv : {&model.space.vn_inventory(), &model.space.pb_inventory()}) {
    for (const auto& r : inv->roles()) {
      inventory.push_back({to_string(r.scheme), r.name, to_string(r.kind)});
    }
  }
  j["inventory"] = inventory;
  json filter = json::array();
  for (const auto& [v, p] : model.space.cooccurrence_filter()) filter.push_back({v, p});
  j["filter"] = filter;
  json chains = json::object();
  if (model.joint) chains["joint"] = chain_json(*model.joint, joint_names(model.space));
  if (model.vn) chains["vn"] = chain_json(*model.vn, tag_names(model.vn_tags));
  if (model.pb) chains["pb"] = chain_json(*model.pb, tag_names(model.pb_tags));
  j["chains"] = chains;
  out << j.dump(1) << '\n';
}

Model load_model(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
    if (j.at("format") != "jcrf-model") throw ParseError("not a jcrf model file", 0);
    if (j.at("version").get<int>() != Model::kFormatVersion) {
      throw ParseError("unsupported model version " + j.at("version").dump(), 0);
    }
    std::vector<RoleLabel> roles;
    for (const auto& r : j.at("inventory")) {
      roles.push_back({parse_scheme(r.at(0).get<std::string>()), r.at(1).get<std::string>(),
                       parse_role_kind(r.at(2).get<std::string>())});
    }
    auto [vn, pb] = split_inventories(roles);
    RolePairSet filter;
    for (const auto& p : j.at("filter")) {
      filter.emplace(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    }
    Model m;
    m.regime = parse_regime(j.at("regime").get<std::string>());
    m.space = build_label_space(std::move(vn), std::move(pb), std::move(filter));
    m.vn_tags = TagSet(m.space.vn_inventory());
    m.pb_tags = TagSet(m.space.pb_inventory());
    const auto& chains = j.at("chains");
    if (chains.contains("joint")) {
      m.joint = chain_from(chains["joint"], m.space.structure(), joint_names(m.space));
    }
    if (chains.contains("vn")) {
      m.vn = chain_from(chains["vn"], m.vn_tags.structure(), tag_names(m.vn_tags));
    }
    if (chains.contains("pb")) {
      m.pb = chain_from(chains["pb"], m.pb_tags.structure(), tag_names(m.pb_tags));
    }
    bool ok = m.regime == Regime::Multitask ? (m.vn && m.pb) : m.joint.has_value();
    if (!ok) throw ParseError("model lacks the chains its regime needs", 0);
    return m;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what(), 0);
  }
}

void save_model_file(const std::string& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  save_model(out, model);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return load_model(in);
}

}  // namespace jcrf
