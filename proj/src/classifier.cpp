// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "tegcer/error.hpp"

namespace tegcer {

void NetworkConfig::validate() const {
  if (hidden_units < 1 || epochs < 1 || batch_size < 1) {
    throw ContractError("hidden_units, epochs and batch_size must be at least 1");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw ContractError("dropout_rate must be in [0, 1)");
  if (!(learning_rate > 0.0)) throw ContractError("learning_rate must be positive");
  if (split.train < 0 || split.validation < 0 || split.test < 0 ||
      std::abs(split.train + split.validation + split.test - 1.0) > 1e-9) {
    throw ContractError("split ratios must be non-negative and sum to 1");
  }
}

SplitIndices stratified_split(std::span<const ClassId> labels, const SplitRatios& ratios, std::uint64_t seed) {
  std::map<ClassId, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(i);

  std::mt19937_64 rng(seed);
  SplitIndices out;
  for (auto& [label, idx] : members) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n = static_cast<long long>(idx.size());
    auto n_test = std::llround(static_cast<double>(n) * ratios.test);
    auto n_val = std::llround(static_cast<double>(n) * ratios.validation);
    while (n_test + n_val > n - 1) {
      if (n_test > 0 && n_test >= n_val) --n_test;
      else --n_val;
    }
    const auto test_end = idx.begin() + n_test;
    const auto val_end = test_end + n_val;
    out.test.insert(out.test.end(), idx.begin(), test_end);
    out.validation.insert(out.validation.end(), test_end, val_end);
    out.train.insert(out.train.end(), val_end, idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

namespace {

struct AdamState {
  std::vector<float> m, v;
  explicit AdamState(std::size_t n) : m(n, 0.0f), v(n, 0.0f) {}
};

void adam_update(std::vector<float>& param, const std::vector<float>& grad, AdamState& state,
                 const NetworkConfig& cfg, std::size_t step) {
  const auto b1 = static_cast<float>(cfg.adam_beta1);
  const auto b2 = static_cast<float>(cfg.adam_beta2);
  const auto eps = static_cast<float>(cfg.adam_epsilon);
  const auto c1 = static_cast<float>(1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step)));
  const auto c2 = static_cast<float>(1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step)));
  const auto lr = static_cast<float>(cfg.learning_rate);
  for (std::size_t i = 0; i < param.size(); ++i) {
    const float g = grad[i];
    state.m[i] = b1 * state.m[i] + (1.0f - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0f - b2) * g * g;
    const float mhat = state.m[i] / c1;
    const float vhat = state.v[i] / c2;
    param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

double pred_at_1(const DenseNet<float>& net, std::span<const LabeledVector> data,
                 std::span<const std::size_t> indices) {
  if (indices.empty()) return 0.0;
  std::size_t hits = 0;
  for (auto i : indices) {
    if (predict_topk(net, data[i].x, 1).front().first == data[i].label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(indices.size());
}

}  // namespace

TrainResult train(std::span<const LabeledVector> data, std::size_t num_classes, const NetworkConfig& config) {
  config.validate();
  if (data.empty()) throw DatasetError("training set is empty");
  if (num_classes == 0) throw DatasetError("no classes to train on");
  const std::size_t inputs = data.front().x.size();
  std::vector<ClassId> labels;
  labels.reserve(data.size());
  for (const auto& ex : data) {
    if (ex.label >= num_classes) {
      throw DatasetError("label " + std::to_string(ex.label) + " outside class range " + std::to_string(num_classes));
    }
    if (ex.x.size() != inputs) throw DatasetError("feature vectors have inconsistent lengths");
    labels.push_back(ex.label);
  }

  TrainResult result;
  result.split = stratified_split(labels, config.split, config.seed);
  std::vector<std::size_t> train_support(num_classes, 0);
  for (auto i : result.split.train) ++train_support[labels[i]];
  for (ClassId c = 0; c < num_classes; ++c) {
    if (train_support[c] == 0) throw DatasetError("class " + std::to_string(c) + " has no training examples");
  }

  std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ull);
  auto net = DenseNet<float>::he_normal(inputs, config.hidden_units, num_classes, rng);
  auto grads = Gradients<float>::like(net);
  AdamState s_w1(net.w1.size()), s_b1(net.b1.size()), s_w2(net.w2.size()), s_b2(net.b2.size());

  const auto& selection = result.split.validation.empty() ? result.split.train : result.split.validation;
  std::vector<std::size_t> order = result.split.train;
  double best = -1.0;
  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const float weight = 1.0f / static_cast<float>(end - start);
      grads.clear();
      for (std::size_t b = start; b < end; ++b) {
        const auto mask = dropout_mask<float>(net.hidden, config.dropout_rate, rng);
        const auto& ex = data[order[b]];
        loss_sum += accumulate_gradients<float>(net, ex.x, ex.label, mask, weight, grads);
      }
      ++step;
      adam_update(net.w1, grads.w1, s_w1, config, step);
      adam_update(net.b1, grads.b1, s_b1, config, step);
      adam_update(net.w2, grads.w2, s_w2, config, step);
      adam_update(net.b2, grads.b2, s_b2, config, step);
    }
    result.metrics.epoch_loss.push_back(loss_sum / static_cast<double>(order.size()));
    const double acc = pred_at_1(net, data, selection);
    result.metrics.validation_pred_at_1.push_back(acc);
    if (acc > best) {
      best = acc;
      result.net = net;
      result.metrics.best_epoch = epoch;
      result.metrics.best_validation_pred_at_1 = acc;
    }
  }
  return result;
}

std::vector<std::pair<ClassId, double>> predict_topk(const DenseNet<float>& net, const FeatureVector& x,
                                                     std::size_t k) {
  if (k < 1 || k > net.classes) {
    throw ContractError("k=" + std::to_string(k) + " outside 1.." + std::to_string(net.classes));
  }
  const auto probs = forward(net, x).probabilities;
  std::vector<ClassId> order(probs.size());
  std::iota(order.begin(), order.end(), ClassId{0});
  std::stable_sort(order.begin(), order.end(), [&](ClassId a, ClassId b) { return probs[a] > probs[b]; });
  std::vector<std::pair<ClassId, double>> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(order[i], static_cast<double>(probs[order[i]]));
  return out;
}

EvalReport evaluate(const DenseNet<float>& net, std::span<const LabeledVector> test_set) {
  EvalReport report;
  report.test_size = test_set.size();
  if (test_set.empty()) return report;

  const std::size_t kmax = std::min<std::size_t>(5, net.classes);
  std::map<std::size_t, std::size_t> hits{{1, 0}, {3, 0}, {5, 0}};
  std::map<ClassId, std::map<ClassId, std::size_t>> confusion;  // true -> predicted -> count
  for (const auto& item : test_set) {
    const auto top = predict_topk(net, item.x, kmax);
    for (auto& [k, count] : hits) {
      const auto upto = std::min(k, top.size());
      for (std::size_t i = 0; i < upto; ++i) {
        if (top[i].first == item.label) {
          ++count;
          break;
        }
      }
    }
    ++confusion[item.label][top.front().first];
  }
  for (auto [k, count] : hits) {
    report.pred_at_k[k] = static_cast<double>(count) / static_cast<double>(test_set.size());
  }

  std::map<ClassId, std::size_t> predicted;
  for (const auto& [truth, row] : confusion) {
    for (const auto& [pred, count] : row) predicted[pred] += count;
  }
  for (const auto& [truth, row] : confusion) {
    auto& s = report.per_class[truth];
    for (const auto& [pred, count] : row) {
      s.support += count;
      if (pred != truth && count > s.top_confusion_count) {
        s.top_confusion = pred;
        s.top_confusion_count = count;
      }
    }
  }
  for (const auto& [cls, count] : predicted) report.per_class[cls].predicted = count;
  for (auto& [cls, s] : report.per_class) {
    std::size_t tp = 0;
    if (auto it = confusion.find(cls); it != confusion.end()) {
      if (auto jt = it->second.find(cls); jt != it->second.end()) tp = jt->second;
    }
    s.precision = s.predicted ? static_cast<double>(tp) / static_cast<double>(s.predicted) : 0.0;
    s.recall = s.support ? static_cast<double>(tp) / static_cast<double>(s.support) : 0.0;
  }
  return report;
}

namespace {

double batch_loss(const DenseNet<double>& net, std::span<const LabeledVector> batch) {
  double loss = 0.0;
  for (const auto& ex : batch) loss -= std::log(forward(net, ex.x).probabilities[ex.label]);
  return loss / static_cast<double>(batch.size());
}

}  // namespace

GradientCheckResult gradient_check(const GradientCheckConfig& config, double tolerance) {
  if (config.inputs == 0 || config.hidden == 0 || config.classes == 0 || config.batch == 0) {
    throw ContractError("gradient check needs non-empty layers and batch");
  }
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> weight(0.0, 1.0);
  auto net = DenseNet<double>::zeros(config.inputs, config.hidden, config.classes);
  for (auto* p : {&net.w1, &net.b1, &net.w2, &net.b2}) {
    for (auto& w : *p) w = weight(rng);
  }

  std::bernoulli_distribution bit(0.5);
  std::uniform_int_distribution<std::size_t> label(0, config.classes - 1);
  std::vector<LabeledVector> batch;
  for (std::size_t b = 0; b < config.batch; ++b) {
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < config.inputs; ++j) {
      if (bit(rng)) active.push_back(j);
    }
    batch.push_back({FeatureVector(config.inputs, std::move(active)), label(rng)});
  }

  auto grads = Gradients<double>::like(net);
  const double weight_each = 1.0 / static_cast<double>(batch.size());
  for (const auto& ex : batch) accumulate_gradients<double>(net, ex.x, ex.label, {}, weight_each, grads);

  GradientCheckResult result;
  auto check = [&](std::vector<double>& params, const std::vector<double>& analytic) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double saved = params[i];
      params[i] = saved + config.step;
      const double up = batch_loss(net, batch);
      params[i] = saved - config.step;
      const double down = batch_loss(net, batch);
      params[i] = saved;
      const double numeric = (up - down) / (2.0 * config.step);
      const double denom = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6});
      result.max_relative_error = std::max(result.max_relative_error, std::abs(numeric - analytic[i]) / denom);
      ++result.parameters_checked;
    }
  };
  check(net.w1, grads.w1);
  check(net.b1, grads.b1);
  check(net.w2, grads.w2);
  check(net.b2, grads.b2);
  result.passed = result.max_relative_error < tolerance;
  return result;
}

}  // namespace tegcer
