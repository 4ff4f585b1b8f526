// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks A1-A7. One line per criterion; exit status is the number
// of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tegcer/abstraction.hpp"
#include "tegcer/classifier.hpp"
#include "tegcer/corpus.hpp"
#include "tegcer/diagnostics.hpp"
#include "tegcer/encoder.hpp"
#include "tegcer/error.hpp"
#include "tegcer/model.hpp"
#include "tegcer/repair.hpp"
#include "tegcer/suggester.hpp"
#include "tegcer/synth.hpp"
#include "test_support.hpp"

namespace tegcer {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* name, double limit_seconds, const std::function<Outcome()>& check) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = check();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (secs >= limit_seconds) {
    out.pass = false;
    out.detail += " over time limit";
  }
  if (!out.pass) ++failures;
  std::printf("%s %s %s: %s (%.2fs, limit %.0fs)\n", id, out.pass ? "PASS" : "FAIL", name, out.detail.c_str(), secs,
              limit_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// A3 corpus, dataset and model, shared by A3 and A5-A7.
struct Benchmark {
  std::vector<ProgramPair> pairs;
  Dataset dataset;
  NetworkConfig config;
  ModelTraining training;
};

NetworkConfig benchmark_config() {
  NetworkConfig config;
  config.seed = 2026;
  return config;
}

Benchmark& benchmark() {
  static Benchmark b = [] {
    Benchmark out;
    const Compiler compiler(testing::fixture_config());
    out.pairs = synthesize_corpus({testing::kSynthPairs, testing::kSynthSeed});
    out.dataset = build_dataset(out.pairs, compiler, 10);
    out.config = benchmark_config();
    out.training = train_model(out.dataset, out.config);
    return out;
  }();
  return b;
}

Outcome a1_gradients() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  double worst = 0;
  std::size_t params = 0;
  for (int n = 0; n < 20; ++n) {
    GradientCheckConfig c;
    c.inputs = dim(rng);
    c.hidden = dim(rng);
    c.classes = std::max<std::size_t>(2, dim(rng));
    c.batch = dim(rng);
    c.seed = rng();
    const auto r = gradient_check(c, 1e-4);
    worst = std::max(worst, r.max_relative_error);
    params += r.parameters_checked;
  }
  return {worst < 1e-4, "20 nets, " + std::to_string(params) + " params, max relative error " + fmt("%.3g", worst)};
}

Outcome a2_diff_oracle() {
  static const std::vector<std::string> alphabet = {"INT", "=", "INVALID", ";", "(", ")"};
  std::mt19937_64 rng(5);
  std::size_t mismatches = 0, non_optimal = 0;
  const std::size_t trials = 10'000;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t sigma = 1 + rng() % alphabet.size();
    auto draw = [&] {
      std::vector<std::string> toks(rng() % 13);
      for (auto& s : toks) s = alphabet[rng() % sigma];
      return toks;
    };
    const auto a = draw();
    const auto b = draw();
    const auto got = diff_repair(AbstractLine{a}, AbstractLine{b});
    const oracle::SignedSet signed_set{{got.insertions.begin(), got.insertions.end()},
                                       {got.deletions.begin(), got.deletions.end()}};
    if (signed_set != oracle::canonical_set(a, b)) ++mismatches;
    if (!oracle::all_optimal_sets(a, b).count(signed_set)) ++non_optimal;
  }
  return {mismatches == 0 && non_optimal == 0, std::to_string(trials) + " pairs, " + std::to_string(mismatches) +
                                                   " oracle mismatches, " + std::to_string(non_optimal) +
                                                   " non-optimal scripts"};
}

Outcome a3_benchmark() {
  auto& b = benchmark();
  std::vector<LabeledVector> test_set;
  for (auto i : b.training.split.test) test_set.push_back(b.training.vectors[i]);
  const auto eval = evaluate(b.training.model.net, test_set);
  const double p1 = eval.pred_at_k.at(1), p3 = eval.pred_at_k.at(3);
  const bool pass = b.pairs.size() >= 1000 && b.dataset.classes.size() >= 20 && p1 >= 0.90 && p3 >= 0.98;
  return {pass, std::to_string(b.pairs.size()) + " pairs, " + std::to_string(b.dataset.examples.size()) +
                    " labeled, " + std::to_string(b.dataset.classes.size()) + " classes, test " +
                    std::to_string(test_set.size()) + ", Pred@1 " + fmt("%.4f", p1) + " (>= 0.90), Pred@3 " +
                    fmt("%.4f", p3) + " (>= 0.98)"};
}

Outcome a4_golden() {
  const std::string program = "int main() {\n  int a, b;\n  b=xyz;\n  b=a;\n}\n";
  const auto symtab = build_symbol_table(program);
  const auto bad = abstract_line("b=xyz;", symtab);
  const auto good = abstract_line("b=a;", symtab);
  const auto repair = diff_repair(bad, good);
  const auto tokens = feature_tokens(bad, ErrorGroup::of({3}));
  const std::vector<std::string> expected = {"<ERR>", "E_3", "<UNI>", "INT",       "=",        "INVALID",
                                             ";",     "<BI>", "INT_=", "=_INVALID", "INVALID_;", "<EOS>"};
  std::string joined;
  for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
  const bool pass = bad.render() == "INT = INVALID ;" && good.render() == "INT = INT ;" &&
                    repair.render() == "+INT -INVALID" && tokens == expected;
  return {pass, "'" + bad.render() + "' -> '" + good.render() + "', " + repair.render() + ", [" + joined + "]"};
}

Outcome a5_invariants() {
  std::mt19937_64 rng(17);
  std::vector<std::string> failed;

  double worst_sum = 0;
  bool monotone = true;
  for (int n = 0; n < 50; ++n) {
    const std::size_t v = 4 + rng() % 20, h = 2 + rng() % 16, k = 2 + rng() % 10;
    auto net = DenseNet<float>::he_normal(v, h, k, rng);
    for (auto& bias : net.b2) bias = static_cast<float>(std::normal_distribution<double>(0, 1)(rng));
    std::vector<LabeledVector> data;
    for (int i = 0; i < 40; ++i) {
      std::vector<std::size_t> active;
      for (std::size_t c = 0; c < v; ++c)
        if (rng() % 3 == 0) active.push_back(c);
      FeatureVector x(v, active);
      const auto probs = forward(net, x).probabilities;
      double sum = 0;
      for (float p : probs) sum += p;
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
      data.push_back({x, rng() % k});
    }
    const auto eval = evaluate(net, data);
    if (!(eval.pred_at_k.at(1) <= eval.pred_at_k.at(3) && eval.pred_at_k.at(3) <= eval.pred_at_k.at(5)))
      monotone = false;
  }
  if (worst_sum > 1e-6) failed.push_back("softmax");
  if (!monotone) failed.push_back("pred@k order");

  auto& b = benchmark();
  const auto& model = b.training.model;
  bool one_hot = true;
  for (std::size_t c = 0; c < model.class_count(); ++c) {
    const auto label = encode_label(c, model.class_count());
    if (std::count(label.begin(), label.end(), 1.0f) != 1 || label[c] != 1.0f ||
        std::count(label.begin(), label.end(), 0.0f) != static_cast<long>(label.size()) - 1)
      one_hot = false;
  }
  for (std::size_t i = 0; i < b.dataset.examples.size(); ++i) {
    const auto& ex = b.dataset.examples[i];
    const auto tokens = feature_tokens(ex.abstract_buggy, ex.templates);
    std::set<std::string> distinct;
    for (const auto& t : tokens)
      if (!is_sentinel(t)) distinct.insert(t);
    const auto dense = b.training.vectors[i].x.dense();
    if (static_cast<std::size_t>(std::count(dense.begin(), dense.end(), 1.0f)) != distinct.size() ||
        static_cast<std::size_t>(std::count(dense.begin(), dense.end(), 0.0f)) + distinct.size() != dense.size())
      one_hot = false;
  }
  if (!one_hot) failed.push_back("one-hot counts");

  std::size_t messages = 0;
  bool idempotent = true;
  const Compiler compiler(testing::fixture_config());
  for (std::size_t i = 0; i < b.pairs.size(); i += 7) {
    for (const auto& d : compiler.compile(b.pairs[i].buggy_source)) {
      ++messages;
      const auto once = generalize(d.message);
      if (generalize(once) != once) idempotent = false;
    }
  }
  for (const char* m : {"use of undeclared identifier 'x'", "a 'b' \"c\" d", "unmatched 'quote", "''", "x"}) {
    if (generalize(generalize(m)) != generalize(m)) idempotent = false;
  }
  if (!idempotent) failed.push_back("generalize idempotence");

  const auto retrain = train_model(b.dataset, b.config);
  const bool identical = serialize_model(retrain.model) == serialize_model(model);
  if (!identical) failed.push_back("retrain bytes");

  std::string detail = "max |sum p - 1| " + fmt("%.2g", worst_sum) + ", " + std::to_string(messages) +
                       " messages generalized, retrain " + (identical ? "bit-identical" : "differs");
  if (!failed.empty()) {
    detail += "; failed:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty(), detail};
}

Outcome a6_round_trip() {
  const auto& model = benchmark().training.model;
  const auto bytes = serialize_model(model);
  const auto loaded = deserialize_model(bytes);
  std::mt19937_64 rng(23);
  std::size_t differing = 0;
  for (int n = 0; n < 100; ++n) {
    std::vector<std::size_t> active;
    for (std::size_t c = 0; c < model.vocab.size(); ++c)
      if (rng() % 50 == 0) active.push_back(c);
    FeatureVector x(model.vocab.size(), active);
    const auto before = forward(model.net, x).probabilities;
    const auto after = forward(loaded.net, x).probabilities;
    if (before.size() != after.size() || std::memcmp(before.data(), after.data(), before.size() * sizeof(float)) != 0)
      ++differing;
  }
  auto corrupt = bytes;
  corrupt.back() ^= 0x01;
  bool rejected = false;
  try {
    deserialize_model(corrupt);
  } catch (const FormatError&) {
    rejected = true;
  }
  return {differing == 0 && rejected, "100 inputs, " + std::to_string(differing) + " differ after reload, corrupted CRC " +
                                          (rejected ? "rejected" : "accepted")};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n\f\v") - b + 1);
}

Outcome a7_contract() {
  auto& b = benchmark();
  const auto& model = b.training.model;
  const Compiler compiler(testing::fixture_config());

  // Recomputed independently of the index: labeled examples per concrete
  // pair and abstract repaired line counts.
  std::map<std::pair<std::string, std::string>, std::vector<const LabeledExample*>> by_pair;
  std::map<std::string, std::size_t> repaired_counts;
  for (const auto& ex : b.dataset.examples) {
    by_pair[{trim(ex.edit.buggy_line), trim(ex.edit.repaired_line)}].push_back(&ex);
    ++repaired_counts[ex.abstract_repaired.render()];
  }

  std::size_t lines = 0, served = 0, key_errors = 0, cap_errors = 0, rank_errors = 0, max_per_line = 0;
  for (const auto& pair : b.pairs) {
    SuggestOptions opts;
    opts.examples_per_page = 1 + lines % 4;
    for (const auto& s : suggest(pair.buggy_source, model, model.examples, compiler, opts)) {
      ++lines;
      if (!s.served_class) continue;
      const auto& served_key = model.classes.at(*s.served_class).key;
      std::vector<ExampleEntry> all = s.examples;
      bool more = s.has_more;
      while (more && all.size() < kMaxExamplesPerLine + 5) {
        const auto page = more_examples(model.examples, s.handle, all.size());
        all.insert(all.end(), page.examples.begin(), page.examples.end());
        more = page.has_more;
      }
      served += all.size();
      max_per_line = std::max(max_per_line, all.size());
      if (all.size() > kMaxExamplesPerLine) ++cap_errors;
      try {
        more_examples(model.examples, s.handle, kMaxExamplesPerLine);
        ++cap_errors;
      } catch (const CapError&) {
      }

      for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& e = all[i];
        const LabeledExample* match = nullptr;
        if (auto it = by_pair.find({e.erroneous, e.repaired}); it != by_pair.end()) {
          for (const auto* ex : it->second)
            if (ex->class_id == *s.served_class) match = ex;
        }
        if (!match || ClassKey{match->templates, match->repair} != served_key) {
          ++key_errors;
          continue;
        }
        if (e.frequency != repaired_counts[match->abstract_repaired.render()]) ++rank_errors;
        if (i > 0 && all[i - 1].frequency < e.frequency) ++rank_errors;
      }
    }
  }
  const bool pass = lines > 0 && served > 0 && key_errors == 0 && cap_errors == 0 && rank_errors == 0;
  return {pass, std::to_string(lines) + " lines, " + std::to_string(served) + " examples served, max " +
                    std::to_string(max_per_line) + " per line, " + std::to_string(key_errors) + " key, " +
                    std::to_string(cap_errors) + " cap, " + std::to_string(rank_errors) + " ranking violations"};
}

}  // namespace
}  // namespace tegcer

int main() {
  using namespace tegcer;
  report("A1", "gradient check", 10, a1_gradients);
  report("A2", "diff oracle", 30, a2_diff_oracle);
  report("A3", "synthetic benchmark", 300, a3_benchmark);
  report("A4", "golden pipeline vector", 10, a4_golden);
  report("A5", "encoder and metric invariants", 120, a5_invariants);
  report("A6", "model round trip", 10, a6_round_trip);
  report("A7", "suggestion contract", 120, a7_contract);
  return failures == 0 ? 0 : 1;
}
