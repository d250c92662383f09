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

#include "jcrf/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "jcrf/errors.hpp"

namespace jcrf {

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

struct Row {
  std::vector<std::string> fields;
  std::size_t line;
};

class SentenceParser {
 public:
  SentenceParser(const CorpusOptions& options, std::vector<PredicateInstance>& out)
      : options_(options), out_(out) {}

  void finish(std::vector<Row>& rows) {
    if (rows.empty()) return;
    parse(rows);
    rows.clear();
  }

 private:
  void parse(const std::vector<Row>& rows) {
    const std::size_t columns = rows.front().fields.size();
    const std::size_t first_line = rows.front().line;
    if (columns < 3 || (columns - 3) % 2 != 0) {
      throw ParseError("expected 3 + 2k columns, found " + std::to_string(columns), first_line);
    }
    const std::size_t n_preds = (columns - 3) / 2;
    std::vector<std::size_t> predicate_rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (r.fields.size() != columns) {
        throw ParseError("row has " + std::to_string(r.fields.size()) + " columns, sentence has " +
                             std::to_string(columns),
                         r.line);
      }
      if (r.fields[0].empty()) throw ParseError("empty token", r.line);
      if (r.fields[1] != "-") predicate_rows.push_back(i);
    }
    if (predicate_rows.size() != n_preds) {
      throw ParseError("sentence has " + std::to_string(n_preds) + " label column pairs but " +
                           std::to_string(predicate_rows.size()) + " predicate markers",
                       first_line);
    }
    if (n_preds == 0) return;
    const std::string sentence_id = "s" + std::to_string(sentences_++);
    std::vector<std::string> tokens;
    for (const auto& r : rows) tokens.push_back(r.fields[0]);
    for (std::size_t k = 0; k < n_preds; ++k) {
      const auto& pred_row = rows[predicate_rows[k]];
      PredicateInstance inst;
      inst.instance_id = sentence_id + ":" + std::to_string(k);
      inst.sentence_id = sentence_id;
      inst.tokens = tokens;
      inst.predicate_index = predicate_rows[k];
      inst.pb_sense = pred_row.fields[1];
      inst.vn_class = pred_row.fields[2] == "-" ? std::string() : pred_row.fields[2];
      inst.vn_tags = column(rows, 3 + 2 * k, options_.vn);
      inst.pb_tags = column(rows, 4 + 2 * k, options_.pb);
      try {
        inst.validate();
      } catch (const DataError& e) {
        throw ParseError(e.what(), pred_row.line);
      }
      out_.push_back(std::move(inst));
    }
  }

  std::optional<std::vector<BioTag>> column(const std::vector<Row>& rows, std::size_t c,
                                            const RoleInventory* inventory) const {
    std::size_t dashes = 0;
    for (const auto& r : rows) dashes += r.fields[c] == "-" ? 1 : 0;
    if (dashes == rows.size()) return std::nullopt;
    std::vector<BioTag> tags;
    for (const auto& r : rows) {
      if (r.fields[c] == "-") throw ParseError("'-' inside a labeled column", r.line);
      BioTag tag;
      try {
        tag = BioTag::parse(r.fields[c]);
      } catch (const ParseError& e) {
        throw ParseError(e.what(), r.line);
      }
      if (inventory != nullptr && !inventory->admits(tag)) {
        throw ParseError("unknown " + to_string(inventory->scheme()) + " tag '" + r.fields[c] + "'",
                         r.line);
      }
      tags.push_back(std::move(tag));
    }
    return tags;
  }

  const CorpusOptions& options_;
  std::vector<PredicateInstance>& out_;
  std::size_t sentences_ = 0;
};

}  // namespace

std::vector<PredicateInstance> read_corpus(std::istream& in, const CorpusOptions& options) {
  std::vector<PredicateInstance> out;
  SentenceParser parser(options, out);
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      parser.finish(rows);
      continue;
    }
    rows.push_back({split_tabs(line), lineno});
  }
  parser.finish(rows);
  return out;
}

std::vector<PredicateInstance> read_corpus_file(const std::string& path,
                                                const CorpusOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_corpus(in, options);
}

void write_corpus(std::ostream& out, std::span<const PredicateInstance> instances) {
  std::size_t begin = 0;
  while (begin < instances.size()) {
    std::size_t end = begin + 1;
    while (end < instances.size() && instances[end].sentence_id == instances[begin].sentence_id &&
           instances[end].tokens == instances[begin].tokens) {
      ++end;
    }
    const auto group = instances.subspan(begin, end - begin);
    const auto& tokens = group.front().tokens;
    std::vector<const PredicateInstance*> at_row(tokens.size(), nullptr);
    for (const auto& inst : group) {
      if (inst.predicate_index >= tokens.size()) {
        throw DataError(inst.instance_id + ": predicate index out of range");
      }
      if (at_row[inst.predicate_index] != nullptr) {
        throw DataError(inst.instance_id + ": two predicates share token " +
                        std::to_string(inst.predicate_index));
      }
      at_row[inst.predicate_index] = &inst;
    }
    // Column pairs follow predicate row order, so sort the group by position.
    std::vector<const PredicateInstance*> ordered;
    for (const auto* p : at_row) {
      if (p != nullptr) ordered.push_back(p);
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      out << tokens[i];
      if (at_row[i] != nullptr) {
        out << '\t' << at_row[i]->pb_sense << '\t'
            << (at_row[i]->vn_class.empty() ? "-" : at_row[i]->vn_class);
      } else {
        out << "\t-\t-";
      }
      for (const auto* p : ordered) {
        for (const auto* column : {&p->vn_tags, &p->pb_tags}) {
          out << '\t' << (column->has_value() ? (**column)[i].str() : std::string("-"));
        }
      }
      out << '\n';
    }
    out << '\n';
    begin = end;
  }
}

void write_corpus_file(const std::string& path, std::span<const PredicateInstance> instances) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_corpus(out, instances);
}

}  // namespace jcrf
