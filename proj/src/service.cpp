// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/service.hpp"

#include <charconv>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "tegcer/error.hpp"

namespace tegcer {

using nlohmann::json;

TokenCache::TokenCache(std::size_t capacity, std::chrono::seconds ttl, Clock clock)
    : capacity_(capacity), ttl_(ttl), clock_(std::move(clock)) {}

void TokenCache::put(const std::string& token, const SuggestionHandle& handle) {
  std::lock_guard lock(mu_);
  if (auto it = map_.find(token); it != map_.end()) {
    order_.erase(it->second);
    map_.erase(it);
  }
  order_.push_front({token, handle, clock_() + ttl_});
  map_[token] = order_.begin();
  while (map_.size() > capacity_) {
    map_.erase(order_.back().token);
    order_.pop_back();
  }
}

std::optional<SuggestionHandle> TokenCache::get(const std::string& token) {
  std::lock_guard lock(mu_);
  auto it = map_.find(token);
  if (it == map_.end()) return std::nullopt;
  if (clock_() >= it->second->expires) {
    order_.erase(it->second);
    map_.erase(it);
    return std::nullopt;
  }
  order_.splice(order_.begin(), order_, it->second);
  return order_.front().handle;
}

std::size_t TokenCache::size() const {
  std::lock_guard lock(mu_);
  return map_.size();
}

namespace {

HttpResponse error_response(int status, std::string_view message) {
  return {status, json{{"error", message}}.dump()};
}

json example_json(const ExampleEntry& e, ExampleMode mode) {
  json j = {{"repaired", e.repaired}, {"frequency", e.frequency}};
  if (mode == ExampleMode::kBoth) j["erroneous"] = e.erroneous;
  return j;
}

json examples_json(const std::vector<ExampleEntry>& examples, ExampleMode mode) {
  json arr = json::array();
  for (const auto& e : examples) arr.push_back(example_json(e, mode));
  return arr;
}

// Derived from the request content only, so replays reproduce the same token.
std::string line_token(const TrainedModel& model, std::string_view source, const Suggestion& s) {
  std::string key = model.version;
  key += '\n';
  key += std::to_string(s.line_no);
  key += '\n';
  key += std::to_string(s.handle.page_size);
  key += '\n';
  key += source;
  return source_sha256(key).substr(0, 32);
}

bool parse_count(std::string_view text, std::size_t& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

FeedbackService::FeedbackService(std::shared_ptr<const TrainedModel> model, const Compiler& compiler,
                                 ServiceOptions options, TokenCache::Clock clock)
    : model_(std::move(model)),
      compiler_(compiler),
      options_(std::move(options)),
      tokens_(options_.token_capacity, options_.token_ttl, std::move(clock)) {}

HttpResponse FeedbackService::feedback(std::string_view body) {
  if (body.size() > options_.max_body_bytes) return error_response(400, "request body exceeds 256 KiB");
  if (!model_) return error_response(503, "model not loaded");

  const auto request = json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object()) return error_response(400, "body must be a JSON object");
  const auto source_it = request.find("source");
  if (source_it == request.end() || !source_it->is_string()) return error_response(400, "missing string field: source");
  const auto source = source_it->get<std::string>();

  auto opts = options_.suggest;
  if (const auto it = request.find("page_size"); it != request.end() && !it->is_null()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() < 1 || it->get<std::size_t>() > kMaxExamplesPerLine) {
      return error_response(400, "page_size must be an integer in [1, 10]");
    }
    opts.examples_per_page = it->get<std::size_t>();
  }

  std::vector<RawDiagnostic> diags;
  try {
    diags = compiler_.compile(source);
  } catch (const TimeoutError& e) {
    return error_response(504, e.what());
  } catch (const Error& e) {
    return error_response(500, e.what());
  }

  const auto suggestions = suggest_from_diagnostics(source, diags, *model_, model_->examples, opts);

  json diag_json = json::array();
  for (const auto& d : diags) diag_json.push_back({{"line", d.line}, {"column", d.column}, {"message", d.message}});

  json sugg_json = json::array();
  for (const auto& s : suggestions) {
    json predicted = json::array();
    for (const auto& [id, p] : s.predicted) {
      predicted.push_back({{"class_id", id}, {"class_key", model_->classes.at(id).key.render()}, {"probability", p}});
    }
    const auto token = line_token(*model_, source, s);
    tokens_.put(token, s.handle);
    sugg_json.push_back({
        {"line_no", s.line_no},
        {"line", s.line},
        {"diagnostics", s.diagnostics},
        {"predicted", std::move(predicted)},
        {"served_class", s.served_class ? json(*s.served_class) : json(nullptr)},
        {"examples", examples_json(s.examples, opts.mode)},
        {"has_more", s.has_more},
        {"line_token", token},
    });
  }

  json response = {
      {"compiled_ok", diags.empty()},
      {"diagnostics", std::move(diag_json)},
      {"suggestions", std::move(sugg_json)},
  };
  return {200, response.dump()};
}

HttpResponse FeedbackService::examples(std::string_view token, std::string_view offset_text) {
  if (!model_) return error_response(503, "model not loaded");
  std::size_t offset = 0;
  if (!parse_count(offset_text, offset)) return error_response(400, "offset must be a non-negative integer");
  const auto handle = tokens_.get(std::string(token));
  if (!handle) return error_response(404, "unknown or expired line_token");
  ExamplePage page;
  try {
    page = more_examples(model_->examples, *handle, offset);
  } catch (const CapError& e) {
    return error_response(410, e.what());
  }
  json response = {
      {"line_token", token},
      {"offset", offset},
      {"examples", examples_json(page.examples, handle->mode)},
      {"has_more", page.has_more},
  };
  return {200, response.dump()};
}

HttpResponse FeedbackService::health() const {
  if (!model_) return {503, json{{"status", "unavailable"}, {"model_version", nullptr}, {"class_count", 0}}.dump()};
  return {200, json{{"status", "ok"}, {"model_version", model_->version}, {"class_count", model_->class_count()}}.dump()};
}

struct HttpServer::Impl {
  FeedbackService& service;
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  res.set_content(r.body, "application/json");
}

}  // namespace

HttpServer::HttpServer(FeedbackService& service) : impl_(new Impl{service, {}}) {
  auto& srv = impl_->server;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  srv.set_payload_max_length(4 * 1024 * 1024);
  srv.Post("/api/feedback", [this](const httplib::Request& req, httplib::Response& res) {
    reply(res, impl_->service.feedback(req.body));
  });
  srv.Get("/api/examples", [this](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("line_token")) return reply(res, error_response(400, "missing line_token"));
    const auto offset = req.has_param("offset") ? req.get_param_value("offset") : std::string("0");
    reply(res, impl_->service.examples(req.get_param_value("line_token"), offset));
  });
  srv.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, impl_->service.health());
  });
  srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    reply(res, error_response(500, what));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& srv = impl_->server;
  const int bound = port == 0 ? srv.bind_to_any_port(host) : (srv.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw ConfigError("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace tegcer
