// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tegcer/corpus.hpp"

namespace tegcer {

struct SynthOptions {
  std::size_t pairs = 2000;
  std::uint64_t seed = 7;
};

/// Valid C programs drawn from a handful of beginner-exercise skeletons with
/// randomized identifiers and constants.
std::vector<std::string> synth_programs(std::size_t count, std::uint64_t seed);

/// Names of the token mutations the generator applies.
std::vector<std::string> synth_mutations();

/// Deterministic corpus of single-line-edit pairs: each buggy program is a
/// valid program with one line mutated. pair_id is "synth-<n>" and
/// assignment_id names the mutation.
std::vector<ProgramPair> synthesize_corpus(const SynthOptions& options);

}  // namespace tegcer
