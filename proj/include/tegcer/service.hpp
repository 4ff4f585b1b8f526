// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "tegcer/diagnostics.hpp"
#include "tegcer/model.hpp"
#include "tegcer/suggester.hpp"

namespace tegcer {

struct ServiceOptions {
  std::size_t max_body_bytes = 256 * 1024;
  std::size_t token_capacity = 10'000;
  std::chrono::seconds token_ttl{3600};
  SuggestOptions suggest;
};

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Bounded LRU of line token -> pagination handle with expiry.
class TokenCache {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  TokenCache(std::size_t capacity, std::chrono::seconds ttl, Clock clock);

  void put(const std::string& token, const SuggestionHandle& handle);
  std::optional<SuggestionHandle> get(const std::string& token);
  std::size_t size() const;

 private:
  struct Entry {
    std::string token;
    SuggestionHandle handle;
    std::chrono::steady_clock::time_point expires;
  };

  std::size_t capacity_;
  std::chrono::seconds ttl_;
  Clock clock_;
  mutable std::mutex mu_;
  std::list<Entry> order_;  // most recent first
  std::unordered_map<std::string, std::list<Entry>::iterator> map_;
};

/// Transport-independent request handlers. Thread-safe.
class FeedbackService {
 public:
  // `model` may be null: every endpoint then answers 503.
  FeedbackService(std::shared_ptr<const TrainedModel> model, const Compiler& compiler, ServiceOptions options = {},
                  TokenCache::Clock clock = std::chrono::steady_clock::now);

  HttpResponse feedback(std::string_view body);
  HttpResponse examples(std::string_view line_token, std::string_view offset);
  HttpResponse health() const;

  const ServiceOptions& options() const { return options_; }

 private:
  std::shared_ptr<const TrainedModel> model_;
  const Compiler& compiler_;
  ServiceOptions options_;
  TokenCache tokens_;
};

/// HTTP binding for FeedbackService: POST /api/feedback, GET /api/examples,
/// GET /api/health.
class HttpServer {
 public:
  explicit HttpServer(FeedbackService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tegcer
