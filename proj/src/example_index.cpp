// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/example_index.hpp"

#include <algorithm>
#include <set>
#include <string_view>
#include <utility>

namespace tegcer {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(b, e - b + 1));
}

bool ranked_before(const ExampleEntry& a, const ExampleEntry& b) {
  if (a.frequency != b.frequency) return a.frequency > b.frequency;
  if (a.repaired != b.repaired) return a.repaired < b.repaired;
  return a.erroneous < b.erroneous;
}

}  // namespace

ExampleIndex ExampleIndex::from_lists(std::map<ClassId, std::vector<ExampleEntry>> lists) {
  ExampleIndex index;
  for (auto& [id, list] : lists) {
    if (list.empty()) continue;
    std::sort(list.begin(), list.end(), ranked_before);
    index.lists_.emplace(id, std::move(list));
  }
  return index;
}

std::span<const ExampleEntry> ExampleIndex::examples(ClassId id) const {
  if (auto it = lists_.find(id); it != lists_.end()) return it->second;
  return {};
}

ExampleIndex build_index(std::span<const LabeledExample> examples) {
  std::map<std::string, std::size_t> abstract_freq;
  for (const auto& ex : examples) ++abstract_freq[ex.abstract_repaired.render()];

  std::map<ClassId, std::vector<ExampleEntry>> lists;
  std::map<ClassId, std::set<std::pair<std::string, std::string>>> seen;
  for (const auto& ex : examples) {
    auto bad = trim(ex.edit.buggy_line);
    auto good = trim(ex.edit.repaired_line);
    if (!seen[ex.class_id].emplace(bad, good).second) continue;
    lists[ex.class_id].push_back({std::move(bad), std::move(good), abstract_freq[ex.abstract_repaired.render()]});
  }
  return ExampleIndex::from_lists(std::move(lists));
}

}  // namespace tegcer
