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

#include "jcrf/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>

#include "jcrf/errors.hpp"
#include "jcrf/evaluator.hpp"
#include "jcrf/losses.hpp"
#include "json.hpp"

namespace jcrf {

using nlohmann::json;

TrainConfig read_train_config(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("training config: ") + e.what(), 0);
  }
  if (!j.is_object()) throw ParseError("training config must be a JSON object", 0);
  TrainConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "regime") c.regime = parse_regime(value.get<std::string>());
      else if (key == "epochs") c.epochs = value.get<int>();
      else if (key == "step_size") c.step_size = value.get<double>();
      else if (key == "momentum") c.momentum = value.get<double>();
      else if (key == "l2") c.l2 = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "hash_dim") c.hash_dim = value.get<std::size_t>();
      else if (key == "batch_size") c.batch_size = value.get<std::size_t>();
      else if (key == "pb_upsampling") c.pb_upsampling = value.get<double>();
      else if (key == "joint_weight") c.joint_weight = value.get<double>();
      else if (key == "pb_only_weight") c.pb_only_weight = value.get<double>();
      else if (key == "feature_mode") c.feature_mode = parse_feature_mode(value.get<std::string>());
      else if (key == "semlink_in_joint_partition") c.semlink_in_joint_partition = value.get<bool>();
      else if (key == "init_scale") c.init_scale = value.get<double>();
      else if (key == "corpus") c.corpus = value.get<std::string>();
      else if (key == "dev") c.dev = value.get<std::string>();
      else if (key == "semlink") c.semlink = value.get<std::string>();
      else if (key == "inventory") c.inventory = value.get<std::string>();
      else if (key == "filter") c.filter = value.get<std::string>();
      else throw ParseError("training config: unknown key '" + key + "'", 0);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("training config: ") + e.what(), 0);
  }
  if (c.epochs < 0) throw ParseError("training config: epochs must be >= 0", 0);
  if (c.batch_size == 0) throw ParseError("training config: batch_size must be >= 1", 0);
  if (c.pb_upsampling < 0) throw ParseError("training config: pb_upsampling must be >= 0", 0);
  return c;
}

TrainConfig read_train_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_train_config(in);
}

std::string to_json(const TrainConfig& c) {
  json j{{"regime", to_string(c.regime)},
         {"epochs", c.epochs},
         {"step_size", c.step_size},
         {"momentum", c.momentum},
         {"l2", c.l2},
         {"seed", c.seed},
         {"hash_dim", c.hash_dim},
         {"batch_size", c.batch_size},
         {"pb_upsampling", c.pb_upsampling},
         {"joint_weight", c.joint_weight},
         {"pb_only_weight", c.pb_only_weight},
         {"feature_mode", to_string(c.feature_mode)},
         {"semlink_in_joint_partition", c.semlink_in_joint_partition},
         {"init_scale", c.init_scale},
         {"corpus", c.corpus},
         {"dev", c.dev},
         {"semlink", c.semlink},
         {"inventory", c.inventory},
         {"filter", c.filter}};
  return j.dump(2);
}

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Skip:
      return "skip";
    case LossKind::Joint:
      return "joint_nll";
    case LossKind::Multitask:
      return "multitask_nll";
    case LossKind::MultitaskPb:
      return "multitask_pb_nll";
    case LossKind::DedicatedPb:
      return "dedicated_pb_nll";
    case LossKind::Marginal:
      return "marginal_nll";
    case LossKind::ConstrainedMarginal:
      return "constrained_marginal_nll";
  }
  return {};
}

LossKind route_instance(const PredicateInstance& instance, Regime regime) {
  if (instance.has_joint()) return regime == Regime::Multitask ? LossKind::Multitask : LossKind::Joint;
  if (!instance.has_pb()) {
    throw DataError(instance.instance_id + ": training needs a joint annotation or a PB column");
  }
  switch (regime) {
    case Regime::Joint:
      return LossKind::Skip;
    case Regime::Multitask:
      return LossKind::MultitaskPb;
    case Regime::JointPB:
      return LossKind::DedicatedPb;
    case Regime::Marginal:
      return LossKind::Marginal;
    case Regime::MarginalSeml:
      return LossKind::ConstrainedMarginal;
  }
  return LossKind::Skip;
}

std::string EpochMetrics::to_json() const {
  json j{{"epoch", epoch}, {"loss", loss}, {"instances", instances}, {"skipped", skipped}};
  if (dev_vn_f1) j["dev_vn_f1"] = *dev_vn_f1;
  if (dev_pb_f1) j["dev_pb_f1"] = *dev_pb_f1;
  return j.dump();
}

namespace {

using SparseRows = std::unordered_map<std::uint32_t, RowVector<double>>;

struct ChainGradient {
  Matrix<double> transitions;
  Vector<double> start;
  Vector<double> end;
  SparseRows rows;

  explicit ChainGradient(const ChainModel& chain)
      : transitions(Matrix<double>::Zero(chain.params.size(), chain.params.size())),
        start(Vector<double>::Zero(chain.params.size())),
        end(Vector<double>::Zero(chain.params.size())) {}

  void add(const ChainModel& chain, const PredicateInstance& inst,
           const ChainStatistics<double>& g, double scale) {
    transitions += scale * g.transitions;
    start += scale * g.start;
    end += scale * g.end;
    chain.extractor.accumulate(inst, g.emissions, scale, rows);
  }
};

struct ChainVelocity {
  Matrix<double> weights;
  Matrix<double> transitions;
  Vector<double> start;
  Vector<double> end;
};

class Optimizer {
 public:
  explicit Optimizer(const TrainConfig& config) : config_(config) {}

  void step(ChainModel& chain, const ChainGradient& g, ChainVelocity* velocity) const {
    const double lr = config_.step_size;
    const double l2 = config_.l2;
    auto& w = chain.extractor.weights();
    auto& p = chain.params;
    if (velocity == nullptr) {
      w *= 1.0 - lr * l2;
      for (const auto& [r, row] : g.rows) w.row(r) -= lr * row;
      p.transitions -= lr * (g.transitions + l2 * p.transitions);
      p.start -= lr * (g.start + l2 * p.start);
      p.end -= lr * (g.end + l2 * p.end);
      return;
    }
    const double mu = config_.momentum;
    auto& v = *velocity;
    v.weights = mu * v.weights + l2 * w;
    for (const auto& [r, row] : g.rows) v.weights.row(r) += row;
    w -= lr * v.weights;
    v.transitions = mu * v.transitions + g.transitions + l2 * p.transitions;
    v.start = mu * v.start + g.start + l2 * p.start;
    v.end = mu * v.end + g.end + l2 * p.end;
    p.transitions -= lr * v.transitions;
    p.start -= lr * v.start;
    p.end -= lr * v.end;
  }

 private:
  const TrainConfig& config_;
};

ChainVelocity zero_velocity(const ChainModel& chain) {
  const auto& w = chain.extractor.weights();
  const auto n = chain.params.size();
  return {Matrix<double>::Zero(w.rows(), w.cols()), Matrix<double>::Zero(n, n),
          Vector<double>::Zero(n), Vector<double>::Zero(n)};
}

/// Per-chain gradient buffers for one batch.
struct BatchGradient {
  std::optional<ChainGradient> joint, vn, pb;

  explicit BatchGradient(const Model& m) {
    if (m.joint) joint.emplace(*m.joint);
    if (m.vn) vn.emplace(*m.vn);
    if (m.pb) pb.emplace(*m.pb);
  }
};

std::vector<std::size_t> tag_indices(const TagSet& tags, const std::vector<BioTag>& seq,
                                     const std::string& id) {
  std::vector<std::size_t> out;
  out.reserve(seq.size());
  for (const auto& t : seq) {
    auto found = tags.find(t);
    if (!found) throw DataError(id + ": tag '" + t.str() + "' is not in the tag set");
    out.push_back(*found);
  }
  return out;
}

/// Loss of one instance; adds scale * gradient into `grad` when given.
double instance_loss(const Model& model, const PredicateInstance& inst, LossKind kind,
                     const TrainConfig& config, const SemlinkMapping* mapping,
                     BatchGradient* grad, double scale) {
  try {
    switch (kind) {
      case LossKind::Skip:
        return 0.0;
      case LossKind::Joint: {
        auto lattice = model.joint->lattice(inst);
        auto gold = joint_indices(inst, model.space);
        std::optional<ConstraintMask> mask;
        if (config.semlink_in_joint_partition && mapping != nullptr) {
          mask = compile_semlink_mask(inst, *mapping, model.space);
        }
        auto r = joint_nll(lattice, gold, mask ? &*mask : nullptr);
        if (grad) grad->joint->add(*model.joint, inst, r.gradient, scale);
        return r.value;
      }
      case LossKind::Marginal:
      case LossKind::ConstrainedMarginal: {
        auto lattice = model.joint->lattice(inst);
        LossResult<double> r = [&] {
          if (kind == LossKind::Marginal) return marginal_nll(lattice, *inst.pb_tags, model.space);
          auto mask = mapping != nullptr
                          ? compile_semlink_mask(inst, *mapping, model.space)
                          : ConstraintMask::all_true(lattice.length(), lattice.labels());
          return constrained_marginal_nll(lattice, *inst.pb_tags, model.space, mask);
        }();
        if (grad) grad->joint->add(*model.joint, inst, r.gradient, scale);
        return r.value;
      }
      case LossKind::Multitask: {
        auto vn_lattice = model.vn->lattice(inst);
        auto pb_lattice = model.pb->lattice(inst);
        auto r = multitask_nll(vn_lattice, pb_lattice,
                               tag_indices(model.vn_tags, *inst.vn_tags, inst.instance_id),
                               tag_indices(model.pb_tags, *inst.pb_tags, inst.instance_id));
        if (grad) {
          grad->vn->add(*model.vn, inst, r.vn_gradient, scale);
          grad->pb->add(*model.pb, inst, r.pb_gradient, scale);
        }
        return r.value;
      }
      case LossKind::MultitaskPb:
      case LossKind::DedicatedPb: {
        auto lattice = model.pb->lattice(inst);
        auto r = joint_nll(lattice, tag_indices(model.pb_tags, *inst.pb_tags, inst.instance_id));
        if (grad) grad->pb->add(*model.pb, inst, r.gradient, scale);
        return r.value;
      }
    }
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(inst.instance_id + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(inst.instance_id + ": " + e.what());
  }
  return 0.0;
}

double instance_weight(const PredicateInstance& inst, const TrainConfig& config) {
  return inst.has_joint() ? config.joint_weight : config.pb_only_weight;
}

void randomize(ChainModel& chain, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, scale);
  auto fill = [&](auto& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = dist(rng);
    }
  };
  fill(chain.extractor.weights());
  fill(chain.params.transitions);
  fill(chain.params.start);
  fill(chain.params.end);
}

std::pair<double, double> dev_scores(const Model& model, std::span<const PredicateInstance> dev,
                                     const SemlinkMapping* mapping) {
  std::vector<Prediction> preds;
  preds.reserve(dev.size());
  DecodeOptions options;
  options.use_semlink = mapping != nullptr;
  for (const auto& inst : dev) preds.push_back(decode(model, inst, mapping, options));
  auto report = evaluate(dev, preds, nullptr);
  return {report.vn.f1, report.pb.f1};
}

}  // namespace

Model initialize_model(const LabelSpace& space, const TrainConfig& config) {
  Model model = Model::create(config.regime, space, config.feature_mode, config.hash_dim);
  if (config.init_scale > 0.0) {
    std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ull);
    for (auto* chain : {&model.joint, &model.vn, &model.pb}) {
      if (*chain) randomize(**chain, config.init_scale, rng);
    }
  }
  return model;
}

double mean_loss(const Model& model, std::span<const PredicateInstance> corpus,
                 const TrainConfig& config, const SemlinkMapping* mapping) {
  double total = 0.0;
  double weight = 0.0;
  for (const auto& inst : corpus) {
    auto kind = route_instance(inst, model.regime);
    if (kind == LossKind::Skip) continue;
    const double w = instance_weight(inst, config);
    total += w * instance_loss(model, inst, kind, config, mapping, nullptr, 0.0);
    weight += 1.0;
  }
  return weight == 0.0 ? 0.0 : total / weight;
}

TrainResult train(std::span<const PredicateInstance> corpus, const LabelSpace& space,
                  const TrainConfig& config, const SemlinkMapping* mapping,
                  std::span<const PredicateInstance> dev, std::ostream* metrics) {
  if (corpus.empty()) throw DataError("training corpus is empty");
  std::vector<LossKind> kinds;
  kinds.reserve(corpus.size());
  for (const auto& inst : corpus) {
    inst.validate();
    kinds.push_back(route_instance(inst, config.regime));
  }

  TrainResult result{initialize_model(space, config), {}, 0};
  Model& model = result.model;
  std::optional<Model> best;
  double best_dev = -1.0;
  if (!dev.empty()) {
    auto [vn, pb] = dev_scores(model, dev, mapping);
    best_dev = 0.5 * (vn + pb);
  }

  const bool use_momentum = config.momentum != 0.0;
  std::optional<ChainVelocity> v_joint, v_vn, v_pb;
  if (use_momentum) {
    if (model.joint) v_joint = zero_velocity(*model.joint);
    if (model.vn) v_vn = zero_velocity(*model.vn);
    if (model.pb) v_pb = zero_velocity(*model.pb);
  }
  Optimizer optimizer(config);
  std::mt19937_64 rng(config.seed);
  const double whole = std::floor(config.pb_upsampling);
  const double frac = config.pb_upsampling - whole;
  std::bernoulli_distribution extra(frac);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      std::size_t copies = 1;
      if (!corpus[i].has_joint()) {
        copies = static_cast<std::size_t>(whole);
        if (frac > 0.0 && extra(rng)) ++copies;
      }
      order.insert(order.end(), copies, i);
    }
    std::shuffle(order.begin(), order.end(), rng);

    EpochMetrics m;
    m.epoch = epoch;
    double epoch_loss = 0.0;
    for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
      const auto batch = std::span(order).subspan(b, std::min(config.batch_size, order.size() - b));
      std::size_t used = 0;
      for (auto i : batch) used += kinds[i] == LossKind::Skip ? 0 : 1;
      m.skipped += batch.size() - used;
      if (used == 0) continue;
      BatchGradient grad(model);
      for (auto i : batch) {
        if (kinds[i] == LossKind::Skip) continue;
        const double w = instance_weight(corpus[i], config);
        epoch_loss += w * instance_loss(model, corpus[i], kinds[i], config, mapping, &grad,
                                        w / static_cast<double>(used));
      }
      m.instances += used;
      if (model.joint) optimizer.step(*model.joint, *grad.joint, v_joint ? &*v_joint : nullptr);
      if (model.vn) optimizer.step(*model.vn, *grad.vn, v_vn ? &*v_vn : nullptr);
      if (model.pb) optimizer.step(*model.pb, *grad.pb, v_pb ? &*v_pb : nullptr);
    }
    m.loss = m.instances == 0 ? 0.0 : epoch_loss / static_cast<double>(m.instances);
    if (!dev.empty()) {
      auto [vn, pb] = dev_scores(model, dev, mapping);
      m.dev_vn_f1 = vn;
      m.dev_pb_f1 = pb;
      if (0.5 * (vn + pb) > best_dev) {
        best_dev = 0.5 * (vn + pb);
        best = model;
        result.best_epoch = epoch;
      }
    }
    if (metrics != nullptr) *metrics << m.to_json() << '\n';
    result.history.push_back(m);
  }
  if (dev.empty()) {
    result.best_epoch = config.epochs;
  } else if (best) {
    model = std::move(*best);
  } else {
    // No epoch beat the initialization; keep it.
    result.model = initialize_model(space, config);
    result.best_epoch = 0;
  }
  return result;
}

}  // namespace jcrf
