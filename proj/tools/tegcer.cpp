// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tegcer/corpus.hpp"
#include "tegcer/diagnostics.hpp"
#include "tegcer/error.hpp"
#include "tegcer/model.hpp"
#include "tegcer/service.hpp"
#include "tegcer/suggester.hpp"
#include "tegcer/synth.hpp"

namespace {

using namespace tegcer;

CompilerConfig compiler_config(const std::string& fixtures, bool fixture_only) {
  auto config = CompilerConfig::from_env();
  if (!fixtures.empty()) config.fixture_path = fixtures;
  config.fixture_only = fixture_only;
  return config;
}

std::vector<ProgramPair> read_corpus(const std::string& path) {
  auto load = load_corpus(path);
  if (!load.skipped.empty()) std::cerr << "corpus: skipped " << load.skipped.size() << " malformed records\n";
  return std::move(load.pairs);
}

void print_skips(const std::vector<SkipRecord>& skipped) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : skipped) ++counts[s.reason];
  for (const auto& [reason, n] : counts) std::cerr << "skipped " << reason << ": " << n << "\n";
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

struct TrainArgs {
  std::string corpus, out, fixtures, skip_report;
  bool fixture_only = false;
  std::size_t min_class_size = 10;
  NetworkConfig net;
};

int run_train(const TrainArgs& args) {
  const Compiler compiler(compiler_config(args.fixtures, args.fixture_only));
  const auto pairs = read_corpus(args.corpus);
  const auto dataset = build_dataset(pairs, compiler, args.min_class_size);
  print_skips(dataset.skipped);
  if (!args.skip_report.empty()) {
    std::ofstream out(args.skip_report);
    write_skip_report(out, dataset.skipped);
  }
  std::cerr << "examples: " << dataset.examples.size() << ", classes: " << dataset.classes.size()
            << ", templates: " << dataset.templates.size() << "\n";
  const auto training = train_model(dataset, args.net);
  const auto& m = training.model;
  for (std::size_t e = 0; e < m.metrics.epoch_loss.size(); ++e) {
    std::cerr << "epoch " << e + 1 << " loss " << fixed(m.metrics.epoch_loss[e]) << " val_pred@1 "
              << fixed(m.metrics.validation_pred_at_1[e]) << "\n";
  }
  std::vector<LabeledVector> test;
  for (auto i : training.split.test) test.push_back(training.vectors[i]);
  if (!test.empty()) {
    const auto report = evaluate(m.net, test);
    for (const auto& [k, v] : report.pred_at_k) std::cerr << "test pred@" << k << " " << fixed(v) << "\n";
  }
  save_model(m, args.out);
  std::cout << "wrote " << args.out << " (version " << m.version << ", best epoch " << m.metrics.best_epoch
            << ")\n";
  return 0;
}

int run_eval(const std::string& model_path, const std::string& corpus, const std::string& fixtures,
             bool fixture_only, const std::string& split) {
  const auto model = load_model(model_path);
  const Compiler compiler(compiler_config(fixtures, fixture_only));
  const auto pairs = read_corpus(corpus);
  const auto dataset = label_with_classes(pairs, compiler, model.templates, model.classes);
  print_skips(dataset.skipped);
  auto vectors = vectorize_examples(model, dataset.examples);
  if (split == "test") {
    std::vector<ClassId> labels;
    for (const auto& v : vectors) labels.push_back(v.label);
    const auto indices = stratified_split(labels, model.config.split, model.config.seed);
    std::vector<LabeledVector> test;
    for (auto i : indices.test) test.push_back(vectors[i]);
    vectors = std::move(test);
  }
  if (vectors.empty()) throw DatasetError("no labeled examples to evaluate");
  const auto report = evaluate(model.net, vectors);
  std::cout << "metric,value\n";
  for (const auto& [k, v] : report.pred_at_k) std::cout << "pred@" << k << "," << fixed(v) << "\n";
  std::cout << "examples," << report.test_size << "\n\n";
  std::cout << "class_id,class_key,support,predicted,precision,recall,top_confusion,top_confusion_count\n";
  for (const auto& [id, s] : report.per_class) {
    std::string key = model.classes.at(id).key.render();
    std::string quoted = "\"";
    for (char c : key) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    quoted += '"';
    std::cout << id << "," << quoted << "," << s.support << "," << s.predicted << "," << fixed(s.precision) << ","
              << fixed(s.recall) << "," << (s.top_confusion ? std::to_string(*s.top_confusion) : std::string()) << ","
              << s.top_confusion_count << "\n";
  }
  return 0;
}

int run_suggest(const std::string& model_path, const std::string& file, const std::string& fixtures,
                std::size_t top_k, std::size_t examples, bool repaired_only, bool as_json) {
  const auto model = load_model(model_path);
  const Compiler compiler(compiler_config(fixtures, false));
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto source = buf.str();
  SuggestOptions opts;
  opts.top_k = top_k;
  opts.examples_per_page = examples;
  opts.mode = repaired_only ? ExampleMode::kRepairedOnly : ExampleMode::kBoth;
  const auto suggestions = suggest(source, model, model.examples, compiler, opts);

  if (as_json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : suggestions) {
      nlohmann::json ex = nlohmann::json::array();
      for (const auto& e : s.examples) {
        ex.push_back({{"erroneous", e.erroneous}, {"repaired", e.repaired}, {"frequency", e.frequency}});
      }
      nlohmann::json pred = nlohmann::json::array();
      for (const auto& [id, p] : s.predicted) pred.push_back({{"class_id", id}, {"probability", p}});
      arr.push_back({{"line_no", s.line_no}, {"line", s.line}, {"diagnostics", s.diagnostics}, {"predicted", pred},
                     {"examples", ex}, {"has_more", s.has_more}});
    }
    std::cout << arr.dump(2) << "\n";
    return 0;
  }
  if (suggestions.empty()) {
    std::cout << "compiled cleanly\n";
    return 0;
  }
  for (const auto& s : suggestions) {
    std::cout << "line " << s.line_no << ": " << s.line << "\n";
    for (const auto& d : s.diagnostics) std::cout << "  error: " << d << "\n";
    for (const auto& [id, p] : s.predicted) {
      std::cout << "  class " << id << " " << model.classes.at(id).key.render() << " p=" << fixed(p) << "\n";
    }
    for (const auto& e : s.examples) {
      if (!e.erroneous.empty()) std::cout << "    - " << e.erroneous << "\n";
      std::cout << "    + " << e.repaired << "\n";
    }
  }
  return 0;
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const std::string& model_path, const std::string& addr, const std::string& fixtures) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--addr must be host:port");
  const auto host = addr.substr(0, colon);
  const int port = std::stoi(addr.substr(colon + 1));
  auto model = std::make_shared<const TrainedModel>(load_model(model_path));
  auto config = compiler_config(fixtures, false);
  const Compiler compiler(config);
  FeedbackService service(model, compiler);
  HttpServer server(service);
  const int bound = server.bind(host, port);
  std::cerr << "serving model " << model->version << " on " << host << ":" << bound << "\n";
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  return 0;
}

int run_synth(const std::string& out, std::size_t pairs, std::uint64_t seed) {
  const auto corpus = synthesize_corpus({pairs, seed});
  std::ofstream file(out);
  if (!file) throw ConfigError("cannot write " + out);
  write_corpus(file, corpus);
  std::cout << "wrote " << corpus.size() << " pairs to " << out << "\n";
  return 0;
}

int run_record(const std::string& corpus, const std::vector<std::string>& programs, const std::string& out) {
  std::vector<std::string> sources;
  if (!corpus.empty()) {
    for (const auto& p : read_corpus(corpus)) {
      sources.push_back(p.buggy_source);
      sources.push_back(p.repaired_source);
    }
  }
  for (const auto& path : programs) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    sources.push_back(buf.str());
  }
  const Compiler compiler(CompilerConfig::from_env());
  write_fixtures(out, sources, compiler);
  std::cout << "recorded " << sources.size() << " sources to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tegcer: example-based feedback for C compilation errors"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Label a corpus and train a model");
  train_cmd->add_option("--corpus", train.corpus, "JSONL corpus of program pairs")->required();
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  train_cmd->add_option("--min-class-size", train.min_class_size)->capture_default_str();
  train_cmd->add_option("--epochs", train.net.epochs)->capture_default_str();
  train_cmd->add_option("--hidden", train.net.hidden_units)->capture_default_str();
  train_cmd->add_option("--dropout", train.net.dropout_rate)->capture_default_str();
  train_cmd->add_option("--seed", train.net.seed)->capture_default_str();
  train_cmd->add_option("--batch-size", train.net.batch_size)->capture_default_str();
  train_cmd->add_option("--learning-rate", train.net.learning_rate)->capture_default_str();
  train_cmd->add_option("--fixtures", train.fixtures, "Recorded diagnostics (JSONL)");
  train_cmd->add_flag("--fixture-only", train.fixture_only, "Fail on sources missing from the fixture");
  train_cmd->add_option("--skip-report", train.skip_report, "Write skipped pairs as JSONL");

  std::string model_path, corpus, fixtures, split = "all";
  bool fixture_only = false;
  auto* eval_cmd = app.add_subcommand("eval", "Pred@1/3/5 and per-class CSV on a corpus");
  eval_cmd->add_option("--model", model_path)->required();
  eval_cmd->add_option("--corpus", corpus)->required();
  eval_cmd->add_option("--fixtures", fixtures);
  eval_cmd->add_flag("--fixture-only", fixture_only);
  eval_cmd->add_option("--split", split, "Evaluate all examples or the model's test split")
      ->check(CLI::IsMember({"all", "test"}))
      ->capture_default_str();

  std::string file;
  std::size_t top_k = 3, examples = 3;
  bool repaired_only = false, as_json = false;
  auto* suggest_cmd = app.add_subcommand("suggest", "Per-line example fixes for a C file");
  suggest_cmd->add_option("--model", model_path)->required();
  suggest_cmd->add_option("file", file)->required();
  suggest_cmd->add_option("--top-k", top_k)->capture_default_str();
  suggest_cmd->add_option("--examples", examples)->check(CLI::Range(1, 10))->capture_default_str();
  suggest_cmd->add_option("--fixtures", fixtures);
  suggest_cmd->add_flag("--repaired-only", repaired_only, "Show only repaired example lines");
  suggest_cmd->add_flag("--json", as_json);

  std::string addr = "127.0.0.1:8080";
  auto* serve_cmd = app.add_subcommand("serve", "Run the feedback HTTP service");
  serve_cmd->add_option("--model", model_path)->required();
  serve_cmd->add_option("--addr", addr)->capture_default_str();
  serve_cmd->add_option("--fixtures", fixtures);

  std::string out;
  std::size_t pairs = 2000;
  std::uint64_t seed = 7;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic mutation corpus");
  synth_cmd->add_option("--out", out)->required();
  synth_cmd->add_option("--pairs", pairs)->capture_default_str();
  synth_cmd->add_option("--seed", seed)->capture_default_str();

  std::vector<std::string> programs;
  auto* record_cmd = app.add_subcommand("record-fixtures", "Run the compiler and record diagnostics");
  record_cmd->add_option("--corpus", corpus);
  record_cmd->add_option("--program", programs, "Extra C files");
  record_cmd->add_option("--out", out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return run_train(train);
    if (*eval_cmd) return run_eval(model_path, corpus, fixtures, fixture_only, split);
    if (*suggest_cmd) return run_suggest(model_path, file, fixtures, top_k, examples, repaired_only, as_json);
    if (*serve_cmd) return run_serve(model_path, addr, fixtures);
    if (*synth_cmd) return run_synth(out, pairs, seed);
    if (*record_cmd) return run_record(corpus, programs, out);
  } catch (const tegcer::Error& e) {
    std::cerr << "tegcer: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
