// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

// Single-hidden-layer classifier: relu(W1 x + b1) -> dropout -> softmax(W2 h + b2).
// Inputs are sparse binary vectors, so the first layer sums weight columns.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "tegcer/encoder.hpp"
#include "tegcer/error.hpp"

namespace tegcer {

template <typename T>
struct DenseNet {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::size_t classes = 0;
  std::vector<T> w1;  // hidden x inputs, row-major
  std::vector<T> b1;  // hidden
  std::vector<T> w2;  // classes x hidden, row-major
  std::vector<T> b2;  // classes

  static DenseNet zeros(std::size_t v, std::size_t h, std::size_t k) {
    return {v, h, k, std::vector<T>(h * v), std::vector<T>(h), std::vector<T>(k * h), std::vector<T>(k)};
  }

  // He-normal weights, zero biases.
  template <typename Rng>
  static DenseNet he_normal(std::size_t v, std::size_t h, std::size_t k, Rng& rng) {
    auto net = zeros(v, h, k);
    std::normal_distribution<double> d1(0.0, std::sqrt(2.0 / static_cast<double>(std::max<std::size_t>(v, 1))));
    for (auto& w : net.w1) w = static_cast<T>(d1(rng));
    std::normal_distribution<double> d2(0.0, std::sqrt(2.0 / static_cast<double>(std::max<std::size_t>(h, 1))));
    for (auto& w : net.w2) w = static_cast<T>(d2(rng));
    return net;
  }

  friend bool operator==(const DenseNet&, const DenseNet&) = default;
};

template <typename T>
struct ForwardPass {
  std::vector<T> pre_activation;  // W1 x + b1
  std::vector<T> hidden;          // after relu and dropout mask
  std::vector<T> probabilities;
};

/// Per-unit inverted-dropout multipliers: 0 for dropped units, 1/(1-p) for kept.
template <typename T, typename Rng>
std::vector<T> dropout_mask(std::size_t hidden, double rate, Rng& rng) {
  std::vector<T> mask(hidden, T(1));
  if (rate <= 0.0) return mask;
  std::bernoulli_distribution keep(1.0 - rate);
  const T scale = static_cast<T>(1.0 / (1.0 - rate));
  for (auto& m : mask) m = keep(rng) ? scale : T(0);
  return mask;
}

template <typename T>
void softmax_in_place(std::vector<T>& z) {
  const T mx = *std::max_element(z.begin(), z.end());
  T sum = 0;
  for (auto& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (auto& v : z) v /= sum;
}

/// An empty mask means inference (no dropout).
template <typename T>
ForwardPass<T> forward(const DenseNet<T>& net, const FeatureVector& x, std::span<const T> mask = {}) {
  if (x.size() != net.inputs) {
    throw ContractError("feature vector length " + std::to_string(x.size()) +
                        " does not match network input size " + std::to_string(net.inputs));
  }
  if (!mask.empty() && mask.size() != net.hidden) throw ContractError("dropout mask size mismatch");
  if (net.classes == 0) throw ContractError("network has no output classes");

  ForwardPass<T> out;
  out.pre_activation = net.b1;
  for (std::size_t h = 0; h < net.hidden; ++h) {
    const T* row = net.w1.data() + h * net.inputs;
    T acc = out.pre_activation[h];
    for (auto j : x.active()) acc += row[j];
    out.pre_activation[h] = acc;
  }
  out.hidden.resize(net.hidden);
  for (std::size_t h = 0; h < net.hidden; ++h) {
    const T a = out.pre_activation[h] > T(0) ? out.pre_activation[h] : T(0);
    out.hidden[h] = mask.empty() ? a : a * mask[h];
  }
  out.probabilities = net.b2;
  for (std::size_t k = 0; k < net.classes; ++k) {
    const T* row = net.w2.data() + k * net.hidden;
    T acc = out.probabilities[k];
    for (std::size_t h = 0; h < net.hidden; ++h) acc += row[h] * out.hidden[h];
    out.probabilities[k] = acc;
  }
  softmax_in_place(out.probabilities);
  return out;
}

template <typename T>
struct Gradients {
  std::vector<T> w1, b1, w2, b2;

  static Gradients like(const DenseNet<T>& net) {
    return {std::vector<T>(net.w1.size()), std::vector<T>(net.b1.size()), std::vector<T>(net.w2.size()),
            std::vector<T>(net.b2.size())};
  }
  void clear() {
    std::fill(w1.begin(), w1.end(), T(0));
    std::fill(b1.begin(), b1.end(), T(0));
    std::fill(w2.begin(), w2.end(), T(0));
    std::fill(b2.begin(), b2.end(), T(0));
  }
};

/// Adds `weight` times the cross-entropy gradient of one example to `grads`
/// and returns that example's (unweighted) loss.
template <typename T>
T accumulate_gradients(const DenseNet<T>& net, const FeatureVector& x, std::size_t label,
                       std::span<const T> mask, T weight, Gradients<T>& grads) {
  if (label >= net.classes) throw ContractError("label outside network output range");
  const auto pass = forward(net, x, mask);

  std::vector<T> dz2 = pass.probabilities;
  dz2[label] -= T(1);
  std::vector<T> dh(net.hidden, T(0));
  for (std::size_t k = 0; k < net.classes; ++k) {
    const T g = dz2[k] * weight;
    grads.b2[k] += g;
    T* grow = grads.w2.data() + k * net.hidden;
    const T* wrow = net.w2.data() + k * net.hidden;
    for (std::size_t h = 0; h < net.hidden; ++h) {
      grow[h] += g * pass.hidden[h];
      dh[h] += dz2[k] * wrow[h];
    }
  }
  for (std::size_t h = 0; h < net.hidden; ++h) {
    if (pass.pre_activation[h] <= T(0)) continue;
    const T g = dh[h] * (mask.empty() ? T(1) : mask[h]) * weight;
    if (g == T(0)) continue;
    grads.b1[h] += g;
    T* grow = grads.w1.data() + h * net.inputs;
    for (auto j : x.active()) grow[j] += g;
  }
  const T p = std::max(pass.probabilities[label], std::numeric_limits<T>::min());
  return -std::log(p);
}

}  // namespace tegcer
