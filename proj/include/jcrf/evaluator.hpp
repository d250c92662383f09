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
#include <span>
#include <string>
#include <vector>

#include "jcrf/bio.hpp"
#include "jcrf/constraint_engine.hpp"
#include "jcrf/instance.hpp"
#include "jcrf/model.hpp"

namespace jcrf {

/// A labeled span [start, end] (inclusive) over argument tags.
struct Span {
  std::string role;
  std::size_t start = 0;
  std::size_t end = 0;

  friend auto operator<=>(const Span&, const Span&) = default;
};

/// Maximal B-X (I-X)* runs. A stray I-X (not continuing an X span) opens a
/// new span, as in conlleval. O and Verb tags are never part of spans.
std::vector<Span> extract_spans(std::span<const BioTag> tags);

struct SpanScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t correct = 0;
};

/// Micro-averaged exact-match span P/R/F1. Empty denominators score 0.
/// Throws AlignmentError on a count or length mismatch.
SpanScore span_f1(std::span<const std::vector<BioTag>> predictions,
                  std::span<const std::vector<BioTag>> golds);

/// 100 x (covered instances with a Semlink violation) / (covered instances).
/// Instances without an entry in `mapping` are left out of both counts; 0
/// when nothing is covered.
double violation_rate(std::span<const Prediction> predictions,
                      std::span<const PredicateInstance> instances, const SemlinkMapping& mapping);

/// Index-path variant for joint-chain predictions.
double violation_rate(std::span<const Path> predictions,
                      std::span<const PredicateInstance> instances, const SemlinkMapping& mapping,
                      const LabelSpace& space);

struct Diagnostic {
  std::string instance_id;
  std::size_t position = 0;
  BioTag vn;
  BioTag pb;
  std::string entry;  // "<class>|<sense>"
  std::string legal;  // the entry's pairs, "v:p,v:p"
};

struct EvalReport {
  SpanScore vn;
  SpanScore pb;
  double rho = 0.0;
  std::size_t n_instances = 0;
  std::size_t n_covered = 0;
  std::vector<Diagnostic> diagnostics;

  /// {vn: {p, r, f1}, pb: {p, r, f1}, rho, n_instances, n_covered}
  std::string to_json() const;
  void write_diagnostics(std::ostream& out) const;
};

/// Scores predictions against gold instances. VN (PB) scores use only
/// instances whose gold has a VN (PB) column; rho needs `mapping` and is 0
/// otherwise.
EvalReport evaluate(std::span<const PredicateInstance> gold, std::span<const Prediction> predictions,
                    const SemlinkMapping* mapping);

struct CompletionScore {
  SpanScore vn;
  /// Fraction of tokens whose decoded PB tag equals the observed one.
  double pb_agreement = 0.0;
  std::vector<std::string> infeasible;
};

/// Decodes each instance in completion mode (completion mask intersected
/// with the Semlink mask) and scores the VN projection against gold VN.
/// Instances whose masks are infeasible are listed and scored as all-O.
CompletionScore completion_f1(const Model& model, std::span<const PredicateInstance> instances,
                              const SemlinkMapping* mapping);

}  // namespace jcrf
