// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tegcer/classifier.hpp"
#include "tegcer/corpus.hpp"
#include "tegcer/example_index.hpp"

namespace tegcer {

/// Everything needed to serve feedback: frozen vocabularies, weights and the
/// example index. Immutable once built; safe to share across threads.
struct TrainedModel {
  FeatureVocabulary vocab;
  TemplateRegistry templates;
  ClassTable classes;
  NetworkConfig config;
  DenseNet<float> net;
  TrainingMetrics metrics;
  ExampleIndex examples;
  std::string version;

  FeatureVector featurize(const AbstractLine& line, const ErrorGroup& errors) const;
  std::size_t class_count() const { return classes.size(); }
};

struct ModelTraining {
  TrainedModel model;
  std::vector<LabeledVector> vectors;  // aligned with the dataset's examples
  SplitIndices split;
};

/// Builds the vocabulary over the whole dataset, trains the network and
/// indexes every labeled example for suggestions.
ModelTraining train_model(const Dataset& dataset, const NetworkConfig& config);

std::vector<LabeledVector> vectorize_examples(const TrainedModel& model, std::span<const LabeledExample> examples);

inline constexpr std::uint16_t kModelFormatVersion = 1;

/// TEGC1 layout: "TEGC1\0", u16 format version, then length-prefixed
/// sections (vocabulary, templates, classes, config, weights, examples,
/// metadata), then CRC-32 of every preceding byte. Integers and floats are
/// little-endian; weights are f32, row-major.
std::vector<std::uint8_t> serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace tegcer
