// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/repair.hpp"

#include <algorithm>

#include "tegcer/error.hpp"

namespace tegcer {
namespace {

std::vector<std::string> as_set(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

RepairTokenSet RepairTokenSet::of(std::vector<std::string> insertions,
                                  std::vector<std::string> deletions) {
  return {as_set(std::move(insertions)), as_set(std::move(deletions))};
}

std::string RepairTokenSet::render() const {
  std::string out;
  for (const auto& t : insertions) {
    if (!out.empty()) out += ' ';
    out += '+' + t;
  }
  for (const auto& t : deletions) {
    if (!out.empty()) out += ' ';
    out += '-' + t;
  }
  return out;
}

RepairTokenSet diff_repair(const AbstractLine& bad, const AbstractLine& good) {
  const auto& a = bad.tokens;
  const auto& b = good.tokens;
  const std::size_t n = a.size(), m = b.size();

  // lcs[i][j] = LCS length of a[i..] and b[j..].
  std::vector<std::size_t> lcs((n + 1) * (m + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return lcs[i * (m + 1) + j]; };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      at(i, j) = a[i] == b[j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
    }
  }

  std::vector<std::string> ins, del;
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && a[i] == b[j]) {
      ++i;
      ++j;
      continue;
    }
    const bool can_delete = i < n && at(i + 1, j) == at(i, j);
    const bool can_insert = j < m && at(i, j + 1) == at(i, j);
    if (can_delete && (!can_insert || a[i] < b[j])) {
      del.push_back(a[i++]);
    } else {
      ins.push_back(b[j++]);
    }
  }
  return RepairTokenSet::of(std::move(ins), std::move(del));
}

std::string ClassKey::render() const {
  const auto errs = templates.render();
  const auto fix = repair.render();
  if (errs.empty()) return fix;
  if (fix.empty()) return errs;
  return errs + ' ' + fix;
}

std::optional<ClassKey> classify_pair(int line_no, const std::map<int, ErrorGroup>& per_line_errors,
                                      const ErrorGroup& program_errors, const RepairTokenSet& repair) {
  if (repair.empty()) return std::nullopt;
  const auto it = per_line_errors.find(line_no);
  return ClassKey{it != per_line_errors.end() ? it->second : program_errors, repair};
}

ClassTable ClassTable::from_counts(const std::map<ClassKey, std::size_t>& counts,
                                   std::size_t min_class_size) {
  std::vector<ErrorRepairClass> classes;
  for (const auto& [key, count] : counts) {
    if (count >= min_class_size) classes.push_back({0, key, count});
  }
  // counts is key-ordered, so a stable sort on frequency leaves ties by key.
  std::stable_sort(classes.begin(), classes.end(),
                   [](const auto& x, const auto& y) { return x.frequency > y.frequency; });
  for (std::size_t i = 0; i < classes.size(); ++i) classes[i].id = i;
  return from_classes(std::move(classes));
}

ClassTable ClassTable::from_classes(std::vector<ErrorRepairClass> classes) {
  ClassTable table;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i].id != i) throw ContractError("class table ids must be 0..K-1 in order");
    if (!table.index_.emplace(classes[i].key, i).second) {
      throw ContractError("duplicate class key " + classes[i].key.render());
    }
  }
  table.classes_ = std::move(classes);
  return table;
}

std::optional<ClassId> ClassTable::find(const ClassKey& key) const {
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  return std::nullopt;
}

const ErrorRepairClass& ClassTable::at(ClassId id) const {
  if (id >= classes_.size()) {
    throw ContractError("class id " + std::to_string(id) + " out of range (K=" +
                        std::to_string(classes_.size()) + ")");
  }
  return classes_[id];
}

}  // namespace tegcer
