// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tegcer/diagnostics.hpp"
#include "tegcer/example_index.hpp"
#include "tegcer/model.hpp"

namespace tegcer {

inline constexpr std::size_t kMaxExamplesPerLine = 10;

enum class ExampleMode { kBoth, kRepairedOnly };

struct SuggestOptions {
  std::size_t examples_per_page = 1;
  std::size_t class_fallback_n = 3;
  std::size_t top_k = 3;
  ExampleMode mode = ExampleMode::kBoth;
};

// Enough state to fetch the next page for one line.
struct SuggestionHandle {
  std::optional<ClassId> served_class;  // nullopt when no candidate class had examples
  std::size_t page_size = 1;
  ExampleMode mode = ExampleMode::kBoth;
};

struct ExamplePage {
  std::vector<ExampleEntry> examples;
  bool has_more = false;
};

struct Suggestion {
  int line_no = 0;
  std::string line;  // the concrete source line
  std::vector<std::string> diagnostics;
  std::vector<std::pair<ClassId, double>> predicted;
  std::optional<ClassId> served_class;
  std::vector<ExampleEntry> examples;  // first page
  bool has_more = false;
  SuggestionHandle handle;
};

/// Compiles `source` and returns one suggestion per compiler-reported line,
/// in line order. A clean compile gives an empty list.
std::vector<Suggestion> suggest(std::string_view source, const TrainedModel& model, const ExampleIndex& index,
                                const Compiler& compiler, const SuggestOptions& options = {});

/// Same, from diagnostics already in hand.
std::vector<Suggestion> suggest_from_diagnostics(std::string_view source, std::span<const RawDiagnostic> diags,
                                                 const TrainedModel& model, const ExampleIndex& index,
                                                 const SuggestOptions& options = {});

/// Page starting at `offset` examples into the served class's list. At most
/// kMaxExamplesPerLine examples are ever served per line. Throws CapError when
/// offset >= kMaxExamplesPerLine.
ExamplePage more_examples(const ExampleIndex& index, const SuggestionHandle& handle, std::size_t offset);

}  // namespace tegcer
