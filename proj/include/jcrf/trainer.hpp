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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jcrf/constraint_engine.hpp"
#include "jcrf/emission_model.hpp"
#include "jcrf/instance.hpp"
#include "jcrf/label_space.hpp"
#include "jcrf/model.hpp"

namespace jcrf {

struct TrainConfig {
  Regime regime = Regime::Joint;
  int epochs = 10;
  double step_size = 0.1;
  double momentum = 0.0;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  std::size_t hash_dim = std::size_t{1} << 20;
  std::size_t batch_size = 8;
  /// Expected number of times each PB-only instance is visited per epoch.
  double pb_upsampling = 1.0;
  double joint_weight = 1.0;
  double pb_only_weight = 1.0;
  FeatureMode feature_mode = FeatureMode::WP;
  /// Restrict the partition of the joint loss to the Semlink mask.
  bool semlink_in_joint_partition = false;
  /// Standard deviation of the Gaussian initialization; 0 means zeros.
  double init_scale = 0.0;

  std::string corpus;
  std::string dev;
  std::string semlink;
  std::string inventory;
  std::string filter;
};

/// JSON object with the field names above ("feature_mode": "WP"|"COMP",
/// "regime" as in parse_regime). Unknown keys are rejected.
TrainConfig read_train_config(std::istream& in);
TrainConfig read_train_config_file(const std::string& path);
std::string to_json(const TrainConfig& config);

enum class LossKind {
  Skip,
  Joint,
  Multitask,
  MultitaskPb,
  DedicatedPb,
  Marginal,
  ConstrainedMarginal,
};

std::string to_string(LossKind kind);

/// Chooses the objective for one instance. Throws DataError for an instance
/// carrying neither a joint annotation nor a PB column.
LossKind route_instance(const PredicateInstance& instance, Regime regime);

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;
  std::size_t instances = 0;
  std::size_t skipped = 0;
  std::optional<double> dev_vn_f1;
  std::optional<double> dev_pb_f1;

  std::string to_json() const;
};

struct TrainResult {
  Model model;
  std::vector<EpochMetrics> history;
  /// Epoch whose weights were kept (0 = initialization).
  int best_epoch = 0;
};

/// Model with the regime's chains, initialized per config.
Model initialize_model(const LabelSpace& space, const TrainConfig& config);

/// Mean (weighted) loss of the model over the routed instances, no update.
double mean_loss(const Model& model, std::span<const PredicateInstance> corpus,
                 const TrainConfig& config, const SemlinkMapping* mapping);

/// Seeded mini-batch gradient descent. With a dev set, the checkpoint with
/// the best mean of VN and PB dev F1 is returned; otherwise the final one.
/// One JSON line per epoch goes to `metrics` when given.
TrainResult train(std::span<const PredicateInstance> corpus, const LabelSpace& space,
                  const TrainConfig& config, const SemlinkMapping* mapping = nullptr,
                  std::span<const PredicateInstance> dev = {}, std::ostream* metrics = nullptr);

}  // namespace jcrf
