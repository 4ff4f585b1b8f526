// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tegcer/dense_net.hpp"
#include "tegcer/encoder.hpp"
#include "tegcer/repair.hpp"

namespace tegcer {

struct SplitRatios {
  double train = 0.70;
  double validation = 0.10;
  double test = 0.20;

  friend bool operator==(const SplitRatios&, const SplitRatios&) = default;
};

struct NetworkConfig {
  std::size_t hidden_units = 512;
  double dropout_rate = 0.2;
  std::size_t epochs = 6;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  SplitRatios split;

  /// Throws ContractError on an out-of-range field.
  void validate() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

struct LabeledVector {
  FeatureVector x;
  ClassId label = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// Seeded per-class shuffle and split. Each class contributes
/// round(n*test) test and round(n*validation) validation members; training
/// always keeps at least one member of every class.
SplitIndices stratified_split(std::span<const ClassId> labels, const SplitRatios& ratios, std::uint64_t seed);

struct TrainingMetrics {
  std::size_t best_epoch = 0;  // 1-based
  double best_validation_pred_at_1 = 0.0;
  std::vector<double> epoch_loss;
  std::vector<double> validation_pred_at_1;

  friend bool operator==(const TrainingMetrics&, const TrainingMetrics&) = default;
};

struct TrainResult {
  DenseNet<float> net;
  TrainingMetrics metrics;
  SplitIndices split;
};

/// Minibatch Adam on mean cross-entropy. The returned network is the epoch
/// snapshot with the best validation Pred@1 (earliest on ties).
TrainResult train(std::span<const LabeledVector> data, std::size_t num_classes, const NetworkConfig& config);

/// k classes by descending probability, ties by ascending class id.
std::vector<std::pair<ClassId, double>> predict_topk(const DenseNet<float>& net, const FeatureVector& x,
                                                     std::size_t k);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  std::size_t support = 0;
  std::size_t predicted = 0;
  std::optional<ClassId> top_confusion;
  std::size_t top_confusion_count = 0;
};

struct EvalReport {
  std::map<std::size_t, double> pred_at_k;  // k in {1, 3, 5}
  std::map<ClassId, ClassScores> per_class;
  std::size_t test_size = 0;
};

/// Pred@k for k = 1, 3, 5 (capped at the class count) and per-class
/// precision/recall from the top-1 confusion matrix.
EvalReport evaluate(const DenseNet<float>& net, std::span<const LabeledVector> test_set);

struct GradientCheckConfig {
  std::size_t inputs = 6;
  std::size_t hidden = 5;
  std::size_t classes = 4;
  std::size_t batch = 4;
  double step = 1e-5;
  std::uint64_t seed = 1;
};

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::size_t parameters_checked = 0;
  bool passed = false;
};

/// Central finite differences against backprop on a random double-precision
/// net with dropout off, over every parameter.
GradientCheckResult gradient_check(const GradientCheckConfig& config, double tolerance = 1e-4);

}  // namespace tegcer
