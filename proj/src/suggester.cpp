// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/suggester.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "tegcer/abstraction.hpp"
#include "tegcer/corpus.hpp"
#include "tegcer/error.hpp"

namespace tegcer {
namespace {

std::size_t served_limit(const ExampleIndex& index, ClassId id) {
  return std::min(kMaxExamplesPerLine, index.examples(id).size());
}

ExamplePage page_at(const ExampleIndex& index, const SuggestionHandle& handle, std::size_t offset) {
  ExamplePage page;
  if (!handle.served_class) return page;
  const auto list = index.examples(*handle.served_class);
  const auto limit = served_limit(index, *handle.served_class);
  if (offset >= limit) return page;
  const auto end = std::min(limit, offset + std::max<std::size_t>(handle.page_size, 1));
  page.examples.assign(list.begin() + static_cast<std::ptrdiff_t>(offset),
                       list.begin() + static_cast<std::ptrdiff_t>(end));
  page.has_more = end < limit;
  return page;
}

void apply_mode(std::vector<ExampleEntry>& examples, ExampleMode mode) {
  if (mode != ExampleMode::kRepairedOnly) return;
  for (auto& e : examples) e.erroneous.clear();
}

}  // namespace

std::vector<Suggestion> suggest_from_diagnostics(std::string_view source, std::span<const RawDiagnostic> diags,
                                                 const TrainedModel& model, const ExampleIndex& index,
                                                 const SuggestOptions& options) {
  std::vector<Suggestion> out;
  if (diags.empty()) return out;
  if (options.examples_per_page == 0 || options.examples_per_page > kMaxExamplesPerLine) {
    throw ContractError("examples_per_page must be in [1, 10]");
  }

  const auto lines = split_lines(source);
  const auto symtab = build_symbol_table(source);
  const auto grouped = group_errors(diags, std::as_const(model.templates));
  std::map<int, std::vector<std::string>> messages;
  for (const auto& d : diags) messages[d.line].push_back(d.message);

  const auto k = std::min(std::max(options.top_k, options.class_fallback_n), model.class_count());
  for (const auto& [line_no, group] : grouped.per_line) {
    Suggestion s;
    s.line_no = line_no;
    if (line_no >= 1 && static_cast<std::size_t>(line_no) <= lines.size()) s.line = std::string(lines[line_no - 1]);
    s.diagnostics = messages[line_no];
    if (k > 0) {
      const auto x = model.featurize(abstract_line(s.line, symtab), group);
      auto ranked = predict_topk(model.net, x, k);
      const auto fallback = std::min(options.class_fallback_n, ranked.size());
      for (std::size_t i = 0; i < std::max<std::size_t>(fallback, 1) && i < ranked.size(); ++i) {
        if (index.has_examples(ranked[i].first)) {
          s.served_class = ranked[i].first;
          break;
        }
      }
      ranked.resize(std::min(options.top_k, ranked.size()));
      s.predicted = std::move(ranked);
    }
    s.handle = {s.served_class, options.examples_per_page, options.mode};
    auto page = page_at(index, s.handle, 0);
    apply_mode(page.examples, options.mode);
    s.examples = std::move(page.examples);
    s.has_more = page.has_more;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Suggestion> suggest(std::string_view source, const TrainedModel& model, const ExampleIndex& index,
                                const Compiler& compiler, const SuggestOptions& options) {
  const auto diags = compiler.compile(source);
  return suggest_from_diagnostics(source, diags, model, index, options);
}

ExamplePage more_examples(const ExampleIndex& index, const SuggestionHandle& handle, std::size_t offset) {
  if (offset >= kMaxExamplesPerLine) {
    throw CapError("at most " + std::to_string(kMaxExamplesPerLine) + " examples are served per line");
  }
  auto page = page_at(index, handle, offset);
  apply_mode(page.examples, handle.mode);
  return page;
}

}  // namespace tegcer
