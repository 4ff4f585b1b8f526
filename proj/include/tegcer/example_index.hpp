// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tegcer/corpus.hpp"
#include "tegcer/repair.hpp"

namespace tegcer {

struct ExampleEntry {
  std::string erroneous;
  std::string repaired;
  // How often the repaired line's abstraction occurs in the labeled corpus.
  std::size_t frequency = 0;

  friend bool operator==(const ExampleEntry&, const ExampleEntry&) = default;
};

/// Per-class example lists, ranked by frequency (desc), then repaired line,
/// then erroneous line. Concrete pairs are de-duplicated within a class.
class ExampleIndex {
 public:
  ExampleIndex() = default;

  static ExampleIndex from_lists(std::map<ClassId, std::vector<ExampleEntry>> lists);

  std::span<const ExampleEntry> examples(ClassId id) const;
  bool has_examples(ClassId id) const { return !examples(id).empty(); }
  bool empty() const { return lists_.empty(); }
  const std::map<ClassId, std::vector<ExampleEntry>>& lists() const { return lists_; }

 private:
  std::map<ClassId, std::vector<ExampleEntry>> lists_;
};

ExampleIndex build_index(std::span<const LabeledExample> examples);

}  // namespace tegcer
