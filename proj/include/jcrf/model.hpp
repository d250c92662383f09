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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jcrf/constraint_engine.hpp"
#include "jcrf/crf.hpp"
#include "jcrf/emission_model.hpp"
#include "jcrf/label_space.hpp"

namespace jcrf {

/// Training regimes. Joint trains one joint chain on jointly labeled data;
/// Multitask trains independent VN and PB chains; JointPB adds a dedicated
/// PB chain for PB-only data; Marginal and MarginalSeml train the joint chain
/// on PB-only data by marginalizing over the VN side.
enum class Regime { Joint, Multitask, JointPB, Marginal, MarginalSeml };

/// "joint", "multitask", "joint-pb", "marginal", "marginal-seml".
std::string to_string(Regime regime);
Regime parse_regime(std::string_view text);

/// One chain: a hashed emission scorer plus transition parameters over a
/// fixed label set.
struct ChainModel {
  FeatureExtractor extractor;
  ChainParameters<double> params;
  ChainStructure structure;

  ChainModel() = default;
  ChainModel(FeatureMode mode, std::size_t hash_dim, ChainStructure structure);

  std::size_t labels() const { return extractor.labels(); }
  Lattice<double> lattice(const PredicateInstance& instance) const {
    return {extractor.score_emissions(instance), params, structure};
  }
};

struct Model {
  static constexpr int kFormatVersion = 1;

  Regime regime = Regime::Joint;
  LabelSpace space;
  TagSet vn_tags;
  TagSet pb_tags;
  /// Present for every regime except Multitask.
  std::optional<ChainModel> joint;
  /// Present for Multitask.
  std::optional<ChainModel> vn;
  /// Present for Multitask and JointPB.
  std::optional<ChainModel> pb;

  /// Zero-initialized model with the chains the regime needs.
  static Model create(Regime regime, LabelSpace space, FeatureMode mode, std::size_t hash_dim);

  /// Chain used at inference for joint predictions; null for Multitask.
  const ChainModel* decoding_chain() const { return joint ? &*joint : nullptr; }
};

struct DecodeOptions {
  /// Apply the predicate's Semlink mask (joint chains only).
  bool use_semlink = true;
  /// Infer VN given the instance's PB column. Semlink is always applied in
  /// this mode when a mapping is available.
  bool completion = false;
  bool strict_semlink = false;
};

struct Prediction {
  std::vector<BioTag> vn;
  std::vector<BioTag> pb;
  /// Joint label path; empty for Multitask models.
  Path joint;
};

/// Viterbi decoding of one predicate. Throws InfeasibleError when the
/// constraints admit no path and DataError when completion is requested for
/// an instance without a PB column.
Prediction decode(const Model& model, const PredicateInstance& instance,
                  const SemlinkMapping* mapping, const DecodeOptions& options = {});

/// The instance with its label columns replaced by the prediction.
PredicateInstance with_prediction(PredicateInstance instance, const Prediction& prediction);

// JSON container; see docs/model_format.md.
void save_model(std::ostream& out, const Model& model);
Model load_model(std::istream& in);
void save_model_file(const std::string& path, const Model& model);
Model load_model_file(const std::string& path);

}  // namespace jcrf
