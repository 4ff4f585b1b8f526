// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tegcer/abstraction.hpp"
#include "tegcer/diagnostics.hpp"

namespace tegcer {

inline constexpr std::string_view kErrSentinel = "<ERR>";
inline constexpr std::string_view kUniSentinel = "<UNI>";
inline constexpr std::string_view kBiSentinel = "<BI>";
inline constexpr std::string_view kEosSentinel = "<EOS>";

bool is_sentinel(std::string_view token);

/// <ERR> E_k... <UNI> unigrams... <BI> a_b... <EOS>
std::vector<std::string> feature_tokens(const AbstractLine& line, const ErrorGroup& templates);

/// Token -> column index. Sentinels are never members.
class FeatureVocabulary {
 public:
  FeatureVocabulary() = default;

  /// Collects every non-sentinel token; indices follow sorted token order.
  static FeatureVocabulary build(std::span<const std::vector<std::string>> sequences);
  static FeatureVocabulary from_tokens(std::vector<std::string> tokens);

  std::optional<std::size_t> index(std::string_view token) const;
  const std::string& token(std::size_t index) const { return tokens_.at(index); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Binary presence vector of length `size`, held as its sorted set bits.
class FeatureVector {
 public:
  FeatureVector() = default;
  FeatureVector(std::size_t size, std::vector<std::size_t> active);

  std::size_t size() const { return size_; }
  std::span<const std::size_t> active() const { return active_; }
  std::vector<float> dense() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::size_t> active_;
};

/// Unknown tokens are dropped; repeated tokens set the same bit once.
FeatureVector vectorize(std::span<const std::string> tokens, const FeatureVocabulary& vocab);

std::vector<float> encode_label(std::size_t class_id, std::size_t num_classes);

}  // namespace tegcer
