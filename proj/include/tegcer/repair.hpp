// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tegcer/abstraction.hpp"
#include "tegcer/diagnostics.hpp"

namespace tegcer {

/// Signed abstract tokens: what the fix inserts (+) and deletes (-). Both
/// sides are sorted sets; a token may sit in both when one occurrence is
/// replaced and another kept.
struct RepairTokenSet {
  std::vector<std::string> insertions;
  std::vector<std::string> deletions;

  bool empty() const { return insertions.empty() && deletions.empty(); }
  std::string render() const;  // "+INT -INVALID"

  static RepairTokenSet of(std::vector<std::string> insertions, std::vector<std::string> deletions);

  auto operator<=>(const RepairTokenSet&) const = default;
};

/// Token-level diff of an erroneous and a repaired abstract line.
///
/// Walks a longest-common-subsequence alignment front to back. Equal tokens
/// always match. When a mismatch can be resolved optimally either by deleting
/// the erroneous token or by inserting the repaired one, the lexicographically
/// smaller token is consumed first. That rule is symmetric in the two lines,
/// so diff_repair(b, a) is diff_repair(a, b) with the sides swapped.
RepairTokenSet diff_repair(const AbstractLine& bad, const AbstractLine& good);

/// Canonical error-repair class identity, ordered as (templates, +, -).
struct ClassKey {
  ErrorGroup templates;
  RepairTokenSet repair;

  std::string render() const;  // "E_10 +== -="

  auto operator<=>(const ClassKey&) const = default;
};

/// Attaches the edited line's own error group when the compiler reported
/// that line, else the whole-program group. Returns nullopt for an empty
/// repair (whitespace-only edit).
std::optional<ClassKey> classify_pair(int line_no, const std::map<int, ErrorGroup>& per_line_errors,
                                      const ErrorGroup& program_errors, const RepairTokenSet& repair);

using ClassId = std::size_t;

struct ErrorRepairClass {
  ClassId id = 0;
  ClassKey key;
  std::size_t frequency = 0;
};

/// Frozen class table: ids 0..K-1 in descending frequency, ties by key.
class ClassTable {
 public:
  ClassTable() = default;

  /// Builds from key counts, dropping keys below `min_class_size`.
  static ClassTable from_counts(const std::map<ClassKey, std::size_t>& counts, std::size_t min_class_size);
  /// Restores a table whose entries are already in id order.
  static ClassTable from_classes(std::vector<ErrorRepairClass> classes);

  std::optional<ClassId> find(const ClassKey& key) const;
  const ErrorRepairClass& at(ClassId id) const;
  std::size_t size() const { return classes_.size(); }
  std::span<const ErrorRepairClass> classes() const { return classes_; }

 private:
  std::vector<ErrorRepairClass> classes_;
  std::map<ClassKey, ClassId> index_;
};

}  // namespace tegcer
