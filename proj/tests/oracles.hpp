// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

// Reference implementations used only by tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tegcer::oracle {

using Tokens = std::vector<std::string>;
using SignedSet = std::pair<std::set<std::string>, std::set<std::string>>;  // (+, -)

/// Insert/delete edit distance by memoized recursion over suffixes.
class EditDistance {
 public:
  EditDistance(const Tokens& a, const Tokens& b) : a_(a), b_(b) {}

  int operator()(std::size_t i, std::size_t j) {
    if (i == a_.size()) return static_cast<int>(b_.size() - j);
    if (j == b_.size()) return static_cast<int>(a_.size() - i);
    const auto key = std::make_pair(i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    int best = 1 + std::min((*this)(i + 1, j), (*this)(i, j + 1));
    if (a_[i] == b_[j]) best = std::min(best, (*this)(i + 1, j + 1));
    memo_[key] = best;
    return best;
  }

 private:
  const Tokens& a_;
  const Tokens& b_;
  std::map<std::pair<std::size_t, std::size_t>, int> memo_;
};

/// Every signed token set produced by some minimum-cost edit script.
inline std::set<SignedSet> all_optimal_sets(const Tokens& a, const Tokens& b) {
  EditDistance dist(a, b);
  std::map<std::pair<std::size_t, std::size_t>, std::set<SignedSet>> memo;
  std::function<std::set<SignedSet>(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    std::set<SignedSet> out;
    if (i == a.size() && j == b.size()) {
      out.insert(SignedSet{});
    } else {
      const int here = dist(i, j);
      auto extend = [&](std::size_t ni, std::size_t nj, const std::string* ins, const std::string* del) {
        for (auto s : go(ni, nj)) {
          if (ins) s.first.insert(*ins);
          if (del) s.second.insert(*del);
          out.insert(std::move(s));
        }
      };
      if (i < a.size() && j < b.size() && a[i] == b[j] && dist(i + 1, j + 1) == here) {
        extend(i + 1, j + 1, nullptr, nullptr);
      }
      if (i < a.size() && dist(i + 1, j) + 1 == here) extend(i + 1, j, nullptr, &a[i]);
      if (j < b.size() && dist(i, j + 1) + 1 == here) extend(i, j + 1, &b[j], nullptr);
    }
    memo[{i, j}] = out;
    return out;
  };
  return go(0, 0);
}

/// The canonical script: match equal tokens; on a tie between deleting a[i]
/// and inserting b[j], take the lexicographically smaller token first.
inline SignedSet canonical_set(const Tokens& a, const Tokens& b) {
  EditDistance dist(a, b);
  SignedSet out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    const int here = dist(i, j);
    if (i < a.size() && j < b.size() && a[i] == b[j] && dist(i + 1, j + 1) == here) {
      ++i, ++j;
      continue;
    }
    const bool can_del = i < a.size() && dist(i + 1, j) + 1 == here;
    const bool can_ins = j < b.size() && dist(i, j + 1) + 1 == here;
    if (can_del && (!can_ins || a[i] < b[j])) {
      out.second.insert(a[i++]);
    } else {
      out.first.insert(b[j++]);
    }
  }
  return out;
}

/// Dense forward pass written out with plain loops in double precision.
inline std::vector<double> forward_probabilities(const std::vector<std::vector<double>>& w1,
                                                 const std::vector<double>& b1,
                                                 const std::vector<std::vector<double>>& w2,
                                                 const std::vector<double>& b2, const std::vector<double>& x) {
  std::vector<double> h(b1.size());
  for (std::size_t r = 0; r < w1.size(); ++r) {
    double z = b1[r];
    for (std::size_t c = 0; c < x.size(); ++c) z += w1[r][c] * x[c];
    h[r] = z > 0 ? z : 0;
  }
  std::vector<double> logits(b2.size());
  for (std::size_t r = 0; r < w2.size(); ++r) {
    double z = b2[r];
    for (std::size_t c = 0; c < h.size(); ++c) z += w2[r][c] * h[c];
    logits[r] = z;
  }
  double total = 0;
  for (double z : logits) total += std::exp(z);
  for (double& z : logits) z = std::exp(z) / total;
  return logits;
}

}  // namespace tegcer::oracle

namespace tegcer::oracle {

/// Bitwise CRC-32 (IEEE 802.3, reflected, polynomial 0xEDB88320).
inline std::uint32_t crc32(const std::uint8_t* data, std::size_t n) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < n; ++i) {
    crc ^= data[i];
    for (int b = 0; b < 8; ++b) crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
  }
  return ~crc;
}

}  // namespace tegcer::oracle
