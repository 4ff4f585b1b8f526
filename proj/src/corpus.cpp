// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include "json.hpp"
#include "tegcer/error.hpp"

namespace tegcer {

using json = nlohmann::json;

CorpusLoad load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open corpus " + path.string());
  return parse_corpus(in);
}

CorpusLoad parse_corpus(std::istream& in) {
  CorpusLoad out;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line:" + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error&) {
      out.skipped.push_back({where, "malformed-json"});
      continue;
    }
    if (!rec.is_object() || !rec.contains("pair_id") || !rec["pair_id"].is_string() ||
        !rec.contains("buggy") || !rec["buggy"].is_string() || !rec.contains("repaired") ||
        !rec["repaired"].is_string()) {
      const auto id = rec.is_object() && rec.contains("pair_id") && rec["pair_id"].is_string()
                          ? rec["pair_id"].get<std::string>()
                          : where;
      out.skipped.push_back({id, "missing-field"});
      continue;
    }
    ProgramPair pair;
    pair.pair_id = rec["pair_id"].get<std::string>();
    pair.buggy_source = rec["buggy"].get<std::string>();
    pair.repaired_source = rec["repaired"].get<std::string>();
    if (auto it = rec.find("assignment_id"); it != rec.end() && it->is_string()) {
      pair.assignment_id = it->get<std::string>();
    }
    if (pair.buggy_source.empty() || pair.repaired_source.empty()) {
      out.skipped.push_back({pair.pair_id, "empty-source"});
      continue;
    }
    if (!ids.insert(pair.pair_id).second) {
      out.skipped.push_back({pair.pair_id, "duplicate-id"});
      continue;
    }
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

void write_corpus(std::ostream& out, std::span<const ProgramPair> pairs) {
  for (const auto& p : pairs) {
    json rec = {{"pair_id", p.pair_id}, {"buggy", p.buggy_source}, {"repaired", p.repaired_source}};
    if (p.assignment_id) rec["assignment_id"] = *p.assignment_id;
    out << rec.dump() << '\n';
  }
}

void write_skip_report(std::ostream& out, std::span<const SkipRecord> skipped) {
  for (const auto& s : skipped) out << json{{"pair_id", s.pair_id}, {"reason", s.reason}}.dump() << '\n';
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

namespace {

std::string_view rstrip(std::string_view s) {
  const auto end = s.find_last_not_of(" \t\r\f\v");
  return end == std::string_view::npos ? std::string_view{} : s.substr(0, end + 1);
}

}  // namespace

std::optional<SingleLineEdit> detect_single_line_edit(const ProgramPair& pair) {
  const auto bad = split_lines(pair.buggy_source);
  const auto good = split_lines(pair.repaired_source);
  if (bad.size() != good.size()) return std::nullopt;
  std::optional<SingleLineEdit> edit;
  for (std::size_t i = 0; i < bad.size(); ++i) {
    const auto b = rstrip(bad[i]);
    const auto g = rstrip(good[i]);
    if (b == g) continue;
    if (edit) return std::nullopt;
    edit = SingleLineEdit{pair.pair_id, static_cast<int>(i + 1), std::string(b), std::string(g)};
  }
  return edit;
}

namespace {

struct Candidate {
  std::size_t pair_index = 0;
  SingleLineEdit edit;
  AbstractLine bad;
  AbstractLine good;
  RepairTokenSet repair;
  ClassKey key;
};

struct Labeled {
  std::vector<Candidate> candidates;
  std::vector<SkipRecord> skipped;
  std::map<TemplateId, std::size_t> template_counts;  // programs triggering each template
};

Labeled label_candidates(std::span<const ProgramPair> pairs, const Compiler& compiler, TemplateRegistry& registry) {
  Labeled out;
  std::vector<std::size_t> pending;
  std::vector<SingleLineEdit> edits(pairs.size());
  std::vector<bool> skip(pairs.size(), false);
  std::vector<std::string> reasons(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (auto e = detect_single_line_edit(pairs[i])) {
      edits[i] = std::move(*e);
      pending.push_back(i);
    } else {
      skip[i] = true;
      reasons[i] = "not-single-line";
    }
  }

  // Compile concurrently; everything after this is a sequential reduction.
  std::vector<std::vector<RawDiagnostic>> diags(pairs.size());
  std::vector<std::exception_ptr> failures(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t n = next++; n < pending.size(); n = next++) {
      const auto i = pending[n];
      try {
        diags[i] = compiler.compile(pairs[i].buggy_source);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  {
    const auto threads = std::min(std::max<std::size_t>(compiler.config().max_parallel, 1), pending.size());
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (skip[i]) {
      out.skipped.push_back({pairs[i].pair_id, reasons[i]});
      continue;
    }
    if (failures[i]) {
      try {
        std::rethrow_exception(failures[i]);
      } catch (const TimeoutError&) {
        out.skipped.push_back({pairs[i].pair_id, "compiler-timeout"});
        continue;
      }
    }
    if (diags[i].empty()) {
      out.skipped.push_back({pairs[i].pair_id, "no-error"});
      continue;
    }
    const auto grouped = group_errors(diags[i], registry);
    for (auto id : grouped.program.ids) ++out.template_counts[id];

    const auto& edit = edits[i];
    if (!grouped.per_line.contains(edit.line_no)) {
      out.skipped.push_back({pairs[i].pair_id, "unlocalized"});
      continue;
    }
    Candidate c;
    c.pair_index = i;
    c.edit = edit;
    c.bad = abstract_line(edit.buggy_line, build_symbol_table(pairs[i].buggy_source));
    c.good = abstract_line(edit.repaired_line, build_symbol_table(pairs[i].repaired_source));
    c.repair = diff_repair(c.bad, c.good);
    auto key = classify_pair(edit.line_no, grouped.per_line, grouped.program, c.repair);
    if (!key) {
      out.skipped.push_back({pairs[i].pair_id, "empty-repair"});
      continue;
    }
    c.key = std::move(*key);
    out.candidates.push_back(std::move(c));
  }
  return out;
}

LabeledExample to_example(Candidate&& c, ClassId id) {
  return {std::move(c.edit), std::move(c.bad), std::move(c.good), c.key.templates, std::move(c.repair), id};
}

}  // namespace

Dataset build_dataset(std::span<const ProgramPair> pairs, const Compiler& compiler, std::size_t min_class_size) {
  if (min_class_size < 1) throw ContractError("min_class_size must be at least 1");
  TemplateRegistry registry;
  auto labeled = label_candidates(pairs, compiler, registry);

  const auto remap = registry.renumber_and_freeze(labeled.template_counts);
  std::map<ClassKey, std::size_t> counts;
  for (auto& c : labeled.candidates) {
    std::vector<TemplateId> ids;
    for (auto id : c.key.templates.ids) ids.push_back(remap.at(id));
    c.key.templates = ErrorGroup::of(std::move(ids));
    ++counts[c.key];
  }

  Dataset out;
  out.classes = ClassTable::from_counts(counts, min_class_size);
  out.templates = std::move(registry);
  out.skipped = std::move(labeled.skipped);
  for (auto& c : labeled.candidates) {
    if (auto id = out.classes.find(c.key)) {
      out.examples.push_back(to_example(std::move(c), *id));
    } else {
      out.skipped.push_back({pairs[c.pair_index].pair_id, "rare-class"});
    }
  }
  return out;
}

Dataset label_with_classes(std::span<const ProgramPair> pairs, const Compiler& compiler,
                           const TemplateRegistry& templates, const ClassTable& classes) {
  TemplateRegistry registry = templates;
  registry.freeze();
  auto labeled = label_candidates(pairs, compiler, registry);

  Dataset out;
  out.classes = classes;
  out.templates = std::move(registry);
  out.skipped = std::move(labeled.skipped);
  for (auto& c : labeled.candidates) {
    if (auto id = classes.find(c.key)) {
      out.examples.push_back(to_example(std::move(c), *id));
    } else {
      out.skipped.push_back({pairs[c.pair_index].pair_id, "unknown-class"});
    }
  }
  return out;
}

}  // namespace tegcer
