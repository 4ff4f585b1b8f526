// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/encoder.hpp"

#include <algorithm>
#include <set>

#include "tegcer/error.hpp"

namespace tegcer {

bool is_sentinel(std::string_view token) {
  return token == kErrSentinel || token == kUniSentinel || token == kBiSentinel ||
         token == kEosSentinel;
}

std::vector<std::string> feature_tokens(const AbstractLine& line, const ErrorGroup& templates) {
  const auto& uni = line.tokens;
  std::vector<std::string> out;
  out.reserve(templates.ids.size() + 2 * uni.size() + 4);
  out.emplace_back(kErrSentinel);
  for (auto id : templates.ids) out.push_back("E_" + std::to_string(id));
  out.emplace_back(kUniSentinel);
  out.insert(out.end(), uni.begin(), uni.end());
  out.emplace_back(kBiSentinel);
  for (std::size_t i = 1; i < uni.size(); ++i) out.push_back(uni[i - 1] + '_' + uni[i]);
  out.emplace_back(kEosSentinel);
  return out;
}

FeatureVocabulary FeatureVocabulary::build(std::span<const std::vector<std::string>> sequences) {
  std::set<std::string> seen;
  for (const auto& seq : sequences) {
    for (const auto& tok : seq) {
      if (!is_sentinel(tok)) seen.insert(tok);
    }
  }
  return from_tokens({seen.begin(), seen.end()});
}

FeatureVocabulary FeatureVocabulary::from_tokens(std::vector<std::string> tokens) {
  FeatureVocabulary vocab;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_sentinel(tokens[i])) throw ContractError("sentinel '" + tokens[i] + "' in vocabulary");
    if (!vocab.index_.emplace(tokens[i], i).second) {
      throw ContractError("duplicate vocabulary token '" + tokens[i] + "'");
    }
  }
  vocab.tokens_ = std::move(tokens);
  return vocab;
}

std::optional<std::size_t> FeatureVocabulary::index(std::string_view token) const {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  return std::nullopt;
}

FeatureVector::FeatureVector(std::size_t size, std::vector<std::size_t> active)
    : size_(size), active_(std::move(active)) {
  std::sort(active_.begin(), active_.end());
  active_.erase(std::unique(active_.begin(), active_.end()), active_.end());
  if (!active_.empty() && active_.back() >= size_) {
    throw ContractError("feature index " + std::to_string(active_.back()) + " outside vector of size " +
                        std::to_string(size_));
  }
}

std::vector<float> FeatureVector::dense() const {
  std::vector<float> out(size_, 0.0f);
  for (auto i : active_) out[i] = 1.0f;
  return out;
}

FeatureVector vectorize(std::span<const std::string> tokens, const FeatureVocabulary& vocab) {
  std::vector<std::size_t> active;
  for (const auto& tok : tokens) {
    if (auto idx = vocab.index(tok)) active.push_back(*idx);
  }
  return FeatureVector(vocab.size(), std::move(active));
}

std::vector<float> encode_label(std::size_t class_id, std::size_t num_classes) {
  if (class_id >= num_classes) {
    throw ContractError("class id " + std::to_string(class_id) + " not below class count " +
                        std::to_string(num_classes));
  }
  std::vector<float> out(num_classes, 0.0f);
  out[class_id] = 1.0f;
  return out;
}

}  // namespace tegcer
