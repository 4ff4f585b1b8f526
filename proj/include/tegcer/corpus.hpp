// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tegcer/abstraction.hpp"
#include "tegcer/diagnostics.hpp"
#include "tegcer/repair.hpp"

namespace tegcer {

struct ProgramPair {
  std::string pair_id;
  std::string buggy_source;
  std::string repaired_source;
  std::optional<std::string> assignment_id;
};

struct SingleLineEdit {
  std::string pair_id;
  int line_no = 0;  // 1-based
  std::string buggy_line;
  std::string repaired_line;
};

// A record left out of the corpus or the dataset, with a machine-readable reason.
struct SkipRecord {
  std::string pair_id;
  std::string reason;
};

struct CorpusLoad {
  std::vector<ProgramPair> pairs;
  std::vector<SkipRecord> skipped;
};

/// JSONL records {"pair_id", "buggy", "repaired", "assignment_id"?}. Bad
/// records land in `skipped`; they never abort the load.
CorpusLoad load_corpus(const std::filesystem::path& path);
CorpusLoad parse_corpus(std::istream& in);

void write_corpus(std::ostream& out, std::span<const ProgramPair> pairs);
void write_skip_report(std::ostream& out, std::span<const SkipRecord> skipped);

/// Splits on '\n'; a trailing newline does not start a new line.
std::vector<std::string_view> split_lines(std::string_view text);

/// Equal line counts and exactly one line differing after trailing-whitespace
/// strip.
std::optional<SingleLineEdit> detect_single_line_edit(const ProgramPair& pair);

struct LabeledExample {
  SingleLineEdit edit;
  AbstractLine abstract_buggy;
  AbstractLine abstract_repaired;
  ErrorGroup templates;
  RepairTokenSet repair;
  ClassId class_id = 0;
};

struct Dataset {
  std::vector<LabeledExample> examples;
  ClassTable classes;
  TemplateRegistry templates;  // frozen, E_1 most frequent
  std::vector<SkipRecord> skipped;
};

/// Full labeling pipeline: compile -> localize -> abstract -> diff -> class.
/// Classes with fewer than `min_class_size` members are dropped; ids follow
/// descending frequency. Compilation runs on up to max_parallel threads; the
/// result does not depend on scheduling.
Dataset build_dataset(std::span<const ProgramPair> pairs, const Compiler& compiler, std::size_t min_class_size);

/// Labels pairs against an already frozen registry and class table (for
/// evaluating a trained model on a corpus). Pairs whose class is not in the
/// table are skipped with reason "unknown-class".
Dataset label_with_classes(std::span<const ProgramPair> pairs, const Compiler& compiler,
                           const TemplateRegistry& templates, const ClassTable& classes);

}  // namespace tegcer
