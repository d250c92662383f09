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

// jcrf: train, tag, complete and evaluate joint VerbNet/PropBank CRF taggers.
//
// Exit status: 0 success, 1 internal error, 2 usage error (bad flags or
// missing files), 3 data error (malformed input, infeasible constraints).

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jcrf/constraint_engine.hpp"
#include "jcrf/corpus_io.hpp"
#include "jcrf/errors.hpp"
#include "jcrf/evaluator.hpp"
#include "jcrf/label_space.hpp"
#include "jcrf/model.hpp"
#include "jcrf/trainer.hpp"

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus;
  std::string dev;
  std::string semlink;
  std::string inventory;
  std::string filter;
  std::string model;
  std::string regime;
  std::string config;
  std::string out;
  std::string pred;
  std::string metrics;
  std::optional<std::uint64_t> seed;
  bool no_semlink = false;
  bool completion = false;
  bool strict = false;
  bool drop_vn_modifier = false;
};

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string("missing required ") + flag);
  if (!std::filesystem::is_regular_file(path)) {
    throw UsageError(std::string(flag) + ": no such file '" + path + "'");
  }
}

void require_flag(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required ") + flag);
}

std::pair<jcrf::RoleInventory, jcrf::RoleInventory> load_inventories(const std::string& path) {
  require_file(path, "--inventory");
  return jcrf::split_inventories(jcrf::read_inventory_file(path));
}

std::vector<jcrf::PredicateInstance> load_corpus(const std::string& path,
                                                 const jcrf::CorpusOptions& options = {}) {
  require_file(path, "--corpus");
  auto corpus = jcrf::read_corpus_file(path, options);
  spdlog::info("read {} predicate instances from {}", corpus.size(), path);
  return corpus;
}

std::optional<jcrf::SemlinkMapping> load_semlink(const std::string& path,
                                                 const jcrf::LabelSpace* space) {
  if (path.empty()) return std::nullopt;
  require_file(path, "--semlink");
  auto mapping = jcrf::read_semlink_file(path);
  if (space != nullptr) {
    for (const auto& line : mapping.resolve(space->vn_inventory(), space->pb_inventory())) {
      spdlog::warn("semlink: {}", line);
    }
  }
  spdlog::info("read {} Semlink entries", mapping.size());
  return mapping;
}

int run_build_space(const Options& o) {
  require_flag(o.out, "--out");
  auto [vn, pb] = load_inventories(o.inventory);
  auto corpus = load_corpus(o.corpus, {&vn, &pb});
  jcrf::CooccurrenceOptions co{o.drop_vn_modifier};
  auto filter = jcrf::derive_cooccurrence_filter(corpus, vn, pb, co);
  auto space = jcrf::build_label_space(vn, pb, filter);
  std::filesystem::create_directories(o.out);
  const auto dir = std::filesystem::path(o.out);
  {
    std::ofstream f(dir / "filter.tsv");
    jcrf::write_filter(f, filter);
  }
  {
    std::ofstream f(dir / "inventory.tsv");
    jcrf::write_inventory(f, space.vn_inventory(), space.pb_inventory());
  }
  {
    std::ofstream f(dir / "labels.tsv");
    f << "# index\tvn\tpb\n";
    for (const auto& l : space.labels()) f << l.index << '\t' << l.vn.str() << '\t' << l.pb.str() << '\n';
  }
  const auto vn_tags = vn.bio_tags().size();
  const auto pb_tags = pb.bio_tags().size();
  std::cout << "labels\t" << space.size() << "\tcross_product\t" << vn_tags * pb_tags
            << "\tfiltered_pairs\t" << filter.size() << '\n';
  return 0;
}

int run_train(const Options& o) {
  jcrf::TrainConfig config;
  if (!o.config.empty()) {
    require_file(o.config, "--config");
    config = jcrf::read_train_config_file(o.config);
  }
  if (!o.regime.empty()) config.regime = jcrf::parse_regime(o.regime);
  if (o.seed) config.seed = *o.seed;
  const std::string corpus_path = o.corpus.empty() ? config.corpus : o.corpus;
  const std::string inventory_path = o.inventory.empty() ? config.inventory : o.inventory;
  const std::string filter_path = o.filter.empty() ? config.filter : o.filter;
  const std::string semlink_path = o.semlink.empty() ? config.semlink : o.semlink;
  const std::string dev_path = o.dev.empty() ? config.dev : o.dev;
  const std::string out = o.out.empty() ? o.model : o.out;
  require_flag(out, "--out");

  auto [vn, pb] = load_inventories(inventory_path);
  jcrf::CorpusOptions co{&vn, &pb};
  auto corpus = load_corpus(corpus_path, co);
  jcrf::RolePairSet filter;
  if (!filter_path.empty()) {
    require_file(filter_path, "--filter");
    filter = jcrf::read_filter_file(filter_path);
  } else {
    filter = jcrf::derive_cooccurrence_filter(corpus, vn, pb);
  }
  auto space = jcrf::build_label_space(vn, pb, filter);
  spdlog::info("label space: {} joint labels", space.size());
  auto mapping = load_semlink(semlink_path, &space);
  if (mapping) {
    for (const auto& id : jcrf::audit_gold(corpus, *mapping)) {
      spdlog::warn("gold labels of {} violate their Semlink entry; kept as annotated", id);
    }
  }
  std::vector<jcrf::PredicateInstance> dev;
  if (!dev_path.empty()) {
    require_file(dev_path, "--dev");
    dev = jcrf::read_corpus_file(dev_path, co);
  }
  std::ofstream metrics_file;
  std::ostream* metrics = &std::cerr;
  if (!o.metrics.empty()) {
    metrics_file.open(o.metrics);
    metrics = &metrics_file;
  }
  spdlog::info("training regime {} for {} epochs", jcrf::to_string(config.regime), config.epochs);
  auto result = jcrf::train(corpus, space, config, mapping ? &*mapping : nullptr, dev, metrics);
  jcrf::save_model_file(out, result.model);
  spdlog::info("saved model (epoch {}) to {}", result.best_epoch, out);
  return 0;
}

int run_decode(const Options& o, bool completion) {
  require_file(o.model, "--model");
  require_flag(o.out, "--out");
  if (!completion && o.semlink.empty() && !o.no_semlink) {
    throw UsageError("tag applies Semlink constraints by default: pass --semlink or --no-semlink");
  }
  auto model = jcrf::load_model_file(o.model);
  jcrf::CorpusOptions co{&model.space.vn_inventory(), &model.space.pb_inventory()};
  auto corpus = load_corpus(o.corpus, co);
  if (completion) {
    for (const auto& inst : corpus) {
      if (!inst.has_pb()) throw UsageError(inst.instance_id + ": completion needs PB columns");
    }
  }
  auto mapping = o.no_semlink && !completion ? std::nullopt : load_semlink(o.semlink, &model.space);
  jcrf::DecodeOptions options;
  options.use_semlink = !o.no_semlink;
  options.completion = completion;
  options.strict_semlink = o.strict;
  std::vector<jcrf::PredicateInstance> output;
  output.reserve(corpus.size());
  for (const auto& inst : corpus) {
    auto prediction = jcrf::decode(model, inst, mapping ? &*mapping : nullptr, options);
    output.push_back(jcrf::with_prediction(inst, prediction));
  }
  jcrf::write_corpus_file(o.out, output);
  spdlog::info("wrote {} predictions to {}", output.size(), o.out);
  return 0;
}

int run_eval(const Options& o) {
  auto gold = load_corpus(o.corpus);
  require_file(o.pred, "--pred");
  auto predicted = jcrf::read_corpus_file(o.pred);
  if (predicted.size() != gold.size()) {
    throw jcrf::AlignmentError("prediction file has " + std::to_string(predicted.size()) +
                               " instances, gold has " + std::to_string(gold.size()));
  }
  std::vector<jcrf::Prediction> preds;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto& p = predicted[k];
    if (p.tokens != gold[k].tokens || p.predicate_index != gold[k].predicate_index) {
      throw jcrf::AlignmentError(p.instance_id + ": prediction does not match gold instance");
    }
    jcrf::Prediction pr;
    pr.vn = p.vn_tags.value_or(std::vector<jcrf::BioTag>(p.size(), jcrf::BioTag::outside()));
    pr.pb = p.pb_tags.value_or(std::vector<jcrf::BioTag>(p.size(), jcrf::BioTag::outside()));
    preds.push_back(std::move(pr));
  }
  auto mapping = load_semlink(o.semlink, nullptr);
  auto report = jcrf::evaluate(gold, preds, mapping ? &*mapping : nullptr);
  std::cout << report.to_json() << '\n';
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    report.write_diagnostics(f);
  }
  return 0;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("jcrf");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("JCRF_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Joint VerbNet/PropBank semantic role tagging with a linear-chain CRF"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build-space", "derive the co-occurrence filter and label space");
  build->add_option("--corpus", o.corpus, "training corpus")->required();
  build->add_option("--inventory", o.inventory, "role inventory file")->required();
  build->add_option("--out", o.out, "output directory")->required();
  build->add_flag("--drop-vn-modifier", o.drop_vn_modifier,
                  "also filter every (VN role, PB modifier) pair");

  auto* train = app.add_subcommand("train", "train a model");
  train->add_option("--corpus", o.corpus, "training corpus");
  train->add_option("--dev", o.dev, "development corpus for checkpoint selection");
  train->add_option("--inventory", o.inventory, "role inventory file");
  train->add_option("--filter", o.filter, "co-occurrence filter (derived from --corpus if absent)");
  train->add_option("--semlink", o.semlink, "Semlink mapping (JSON)");
  train->add_option("--regime", o.regime, "joint|multitask|joint-pb|marginal|marginal-seml")
      ->check(CLI::IsMember({"joint", "multitask", "joint-pb", "marginal", "marginal-seml"}));
  train->add_option("--config", o.config, "training config (JSON)");
  train->add_option("--seed", o.seed, "random seed");
  train->add_option("--out,--model", o.out, "output model file");
  train->add_option("--metrics", o.metrics, "per-epoch metrics log (default: stderr)");

  auto add_decode_flags = [&o](CLI::App* sub) {
    sub->add_option("--model", o.model, "model file")->required();
    sub->add_option("--corpus", o.corpus, "input corpus")->required();
    sub->add_option("--semlink", o.semlink, "Semlink mapping (JSON)");
    sub->add_option("--out", o.out, "output corpus with predicted columns")->required();
    sub->add_flag("--strict-semlink", o.strict, "fail on predicates without a Semlink entry");
  };
  auto* tag = app.add_subcommand("tag", "Viterbi-decode joint labels");
  add_decode_flags(tag);
  tag->add_flag("--no-semlink", o.no_semlink, "decode without Semlink masks");
  tag->add_flag("--completion", o.completion, "same as the complete subcommand");
  auto* complete = app.add_subcommand("complete", "infer VN labels from observed PB labels");
  add_decode_flags(complete);

  auto* eval = app.add_subcommand("eval", "span F1 and Semlink violation rate");
  eval->add_option("--corpus", o.corpus, "gold corpus")->required();
  eval->add_option("--pred", o.pred, "predicted corpus")->required();
  eval->add_option("--semlink", o.semlink, "Semlink mapping for the violation rate");
  eval->add_option("--out", o.out, "per-instance violation diagnostics (TSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*build) return run_build_space(o);
    if (*train) return run_train(o);
    if (*tag) return run_decode(o, o.completion);
    if (*complete) return run_decode(o, true);
    if (*eval) return run_eval(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const jcrf::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const jcrf::ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const jcrf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
