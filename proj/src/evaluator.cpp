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

#include "jcrf/evaluator.hpp"

#include <algorithm>
#include <ostream>

#include "jcrf/errors.hpp"
#include "json.hpp"

namespace jcrf {

std::vector<Span> extract_spans(std::span<const BioTag> tags) {
  std::vector<Span> spans;
  bool open = false;
  Span current;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const auto& t = tags[i];
    const bool continues = open && t.prefix == Prefix::Inside && t.role == current.role;
    if (continues) {
      current.end = i;
      continue;
    }
    if (open) spans.push_back(current);
    open = t.is_argument();
    if (open) current = Span{t.role, i, i};
  }
  if (open) spans.push_back(current);
  return spans;
}

SpanScore span_f1(std::span<const std::vector<BioTag>> predictions,
                  std::span<const std::vector<BioTag>> golds) {
  if (predictions.size() != golds.size()) {
    throw AlignmentError("span_f1: " + std::to_string(predictions.size()) + " predictions for " +
                         std::to_string(golds.size()) + " gold sequences");
  }
  SpanScore s;
  for (std::size_t k = 0; k < golds.size(); ++k) {
    if (predictions[k].size() != golds[k].size()) {
      throw AlignmentError("span_f1: sequence " + std::to_string(k) + " length mismatch");
    }
    auto pred = extract_spans(predictions[k]);
    auto gold = extract_spans(golds[k]);
    std::sort(pred.begin(), pred.end());
    std::sort(gold.begin(), gold.end());
    std::vector<Span> common;
    std::set_intersection(pred.begin(), pred.end(), gold.begin(), gold.end(),
                          std::back_inserter(common));
    s.predicted += pred.size();
    s.gold += gold.size();
    s.correct += common.size();
  }
  s.precision = s.predicted == 0 ? 0.0 : static_cast<double>(s.correct) / s.predicted;
  s.recall = s.gold == 0 ? 0.0 : static_cast<double>(s.correct) / s.gold;
  s.f1 = s.precision + s.recall == 0.0 ? 0.0
                                        : 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

double violation_rate(std::span<const Prediction> predictions,
                      std::span<const PredicateInstance> instances, const SemlinkMapping& mapping) {
  if (predictions.size() != instances.size()) {
    throw AlignmentError("violation_rate: prediction and instance counts differ");
  }
  std::size_t covered = 0;
  std::size_t violating = 0;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    if (!mapping.covers(instances[k])) continue;
    ++covered;
    if (count_violations(predictions[k].vn, predictions[k].pb, instances[k], mapping)) ++violating;
  }
  return covered == 0 ? 0.0 : 100.0 * static_cast<double>(violating) / static_cast<double>(covered);
}

double violation_rate(std::span<const Path> predictions,
                      std::span<const PredicateInstance> instances, const SemlinkMapping& mapping,
                      const LabelSpace& space) {
  if (predictions.size() != instances.size()) {
    throw AlignmentError("violation_rate: prediction and instance counts differ");
  }
  std::size_t covered = 0;
  std::size_t violating = 0;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    if (!mapping.covers(instances[k])) continue;
    ++covered;
    if (count_violations(predictions[k], instances[k], mapping, space)) ++violating;
  }
  return covered == 0 ? 0.0 : 100.0 * static_cast<double>(violating) / static_cast<double>(covered);
}

std::string EvalReport::to_json() const {
  auto prf = [](const SpanScore& s) {
    return nlohmann::json{{"p", s.precision}, {"r", s.recall}, {"f1", s.f1}};
  };
  nlohmann::json j{{"vn", prf(vn)},
                   {"pb", prf(pb)},
                   {"rho", rho},
                   {"n_instances", n_instances},
                   {"n_covered", n_covered}};
  return j.dump();
}

void EvalReport::write_diagnostics(std::ostream& out) const {
  out << "instance_id\tposition\tvn\tpb\tentry\tlegal_pairs\n";
  for (const auto& d : diagnostics) {
    out << d.instance_id << '\t' << d.position << '\t' << d.vn.str() << '\t' << d.pb.str() << '\t'
        << d.entry << '\t' << d.legal << '\n';
  }
}

EvalReport evaluate(std::span<const PredicateInstance> gold, std::span<const Prediction> predictions,
                    const SemlinkMapping* mapping) {
  if (gold.size() != predictions.size()) {
    throw AlignmentError("evaluate: " + std::to_string(predictions.size()) + " predictions for " +
                         std::to_string(gold.size()) + " gold instances");
  }
  std::vector<std::vector<BioTag>> vn_pred, vn_gold, pb_pred, pb_gold;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    if (gold[k].has_vn()) {
      vn_gold.push_back(*gold[k].vn_tags);
      vn_pred.push_back(predictions[k].vn);
    }
    if (gold[k].has_pb()) {
      pb_gold.push_back(*gold[k].pb_tags);
      pb_pred.push_back(predictions[k].pb);
    }
  }
  EvalReport report;
  report.vn = span_f1(vn_pred, vn_gold);
  report.pb = span_f1(pb_pred, pb_gold);
  report.n_instances = gold.size();
  if (mapping != nullptr) {
    report.rho = violation_rate(predictions, gold, *mapping);
    for (std::size_t k = 0; k < gold.size(); ++k) {
      const auto* seml = mapping->find(gold[k].vn_class, gold[k].pb_sense);
      if (seml == nullptr) continue;
      ++report.n_covered;
      std::string legal;
      for (const auto& [v, p] : *seml) legal += (legal.empty() ? "" : ",") + v + ":" + p;
      for (const auto& viol : find_violations(predictions[k].vn, predictions[k].pb, gold[k], *mapping)) {
        report.diagnostics.push_back({gold[k].instance_id, viol.position, viol.vn, viol.pb,
                                      gold[k].vn_class + "|" + gold[k].pb_sense, legal});
      }
    }
  }
  return report;
}

CompletionScore completion_f1(const Model& model, std::span<const PredicateInstance> instances,
                              const SemlinkMapping* mapping) {
  CompletionScore out;
  std::vector<std::vector<BioTag>> pred, gold;
  std::size_t tokens = 0;
  std::size_t agree = 0;
  DecodeOptions options;
  options.completion = true;
  for (const auto& inst : instances) {
    if (!inst.has_vn() || !inst.has_pb()) {
      throw DataError(inst.instance_id + ": completion scoring needs gold VN and observed PB");
    }
    std::vector<BioTag> vn;
    std::vector<BioTag> pb;
    try {
      auto p = decode(model, inst, mapping, options);
      vn = std::move(p.vn);
      pb = std::move(p.pb);
    } catch (const InfeasibleError&) {
      out.infeasible.push_back(inst.instance_id);
      vn.assign(inst.size(), BioTag::outside());
      pb.assign(inst.size(), BioTag::outside());
    }
    for (std::size_t i = 0; i < inst.size(); ++i) agree += pb[i] == (*inst.pb_tags)[i] ? 1 : 0;
    tokens += inst.size();
    pred.push_back(std::move(vn));
    gold.push_back(*inst.vn_tags);
  }
  out.vn = span_f1(pred, gold);
  out.pb_agreement = tokens == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(tokens);
  return out;
}

}  // namespace jcrf
