// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tegcer {

struct RawDiagnostic {
  int line = 1;
  int column = 0;  // 0 when the compiler gave none
  std::string message;

  friend bool operator==(const RawDiagnostic&, const RawDiagnostic&) = default;
};

struct ParsedDiagnostics {
  std::vector<RawDiagnostic> errors;
  std::size_t skipped_lines = 0;
};

/// Parses `file:line[:col]: severity: message` lines. Only `error` and
/// `fatal error` diagnostics for `file_name` are kept; notes and warnings are
/// dropped, and any line that is not a diagnostic (source echo, carets,
/// summaries) counts as skipped.
ParsedDiagnostics parse_diagnostics(std::string_view compiler_output, std::string_view file_name);

/// Hex SHA-256 of the program text; the key of the recorded-diagnostics fixture.
std::string source_sha256(std::string_view source);

struct CompilerConfig {
  // `{file}` is replaced by the path of the temporary source file.
  std::string command = "cc -fsyntax-only -std=c99 {file}";
  std::chrono::milliseconds timeout{10'000};
  std::optional<std::filesystem::path> fixture_path;
  // Fixture-only mode: a source missing from the fixture is a ConfigError
  // instead of falling through to the real compiler.
  bool fixture_only = false;
  std::size_t max_parallel = 4;
  std::size_t stderr_cap = std::size_t{1} << 20;

  /// Defaults with TEGCER_CC applied when set.
  static CompilerConfig from_env();
};

/// Runs the configured compiler (or replays recorded diagnostics) and returns
/// error-severity diagnostics in report order. An empty result means the
/// program compiled. Thread-safe; at most `max_parallel` compiler processes
/// run at once.
class Compiler {
 public:
  explicit Compiler(CompilerConfig config);
  ~Compiler();
  Compiler(const Compiler&) = delete;
  Compiler& operator=(const Compiler&) = delete;

  std::vector<RawDiagnostic> compile(std::string_view source) const;

  /// Always invokes the external command, ignoring any fixture.
  std::vector<RawDiagnostic> run_compiler(std::string_view source) const;

  const CompilerConfig& config() const { return config_; }
  std::size_t skipped_lines() const { return skipped_.load(); }
  std::size_t fixture_size() const { return fixtures_.size(); }

 private:
  class Slots;

  CompilerConfig config_;
  std::unordered_map<std::string, std::vector<RawDiagnostic>> fixtures_;
  std::unique_ptr<Slots> slots_;
  mutable std::atomic<std::size_t> skipped_{0};
};

/// Reads a fixture file: JSONL of {"source_sha256", "diagnostics": [...]}.
std::unordered_map<std::string, std::vector<RawDiagnostic>> load_fixtures(
    const std::filesystem::path& path);

/// One fixture record per distinct source.
void write_fixtures(const std::filesystem::path& path, std::span<const std::string> sources,
                    const Compiler& compiler);

/// Replaces each quoted segment ('...' or "...") with □_k, k counting from 1
/// left to right. A quote with no partner on its right ends substitution and
/// the remainder is copied verbatim.
std::string generalize(std::string_view message);

using TemplateId = int;

inline constexpr TemplateId kUnknownTemplate = 0;

/// Interns generalized messages as E_1, E_2, ... . While open, unseen patterns
/// get the next id; once frozen, unseen patterns map to kUnknownTemplate.
class TemplateRegistry {
 public:
  TemplateId intern(std::string_view pattern);
  std::optional<TemplateId> find(std::string_view pattern) const;

  /// Renumbers ids by descending `counts` (ties by pattern text), freezes the
  /// registry and returns the old->new id map.
  std::map<TemplateId, TemplateId> renumber_and_freeze(const std::map<TemplateId, std::size_t>& counts);
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  const std::string& pattern(TemplateId id) const;
  std::size_t size() const { return patterns_.size(); }
  const std::vector<std::string>& patterns() const { return patterns_; }

  static TemplateRegistry frozen_from(std::vector<std::string> patterns);

 private:
  std::vector<std::string> patterns_;  // id k lives at k-1
  std::unordered_map<std::string, TemplateId> ids_;
  bool frozen_ = false;
};

/// Sorted, duplicate-free set of template ids.
struct ErrorGroup {
  std::vector<TemplateId> ids;

  static ErrorGroup of(std::vector<TemplateId> ids);
  std::string render() const;  // "E_5 ∧ E_6"

  auto operator<=>(const ErrorGroup&) const = default;
};

struct GroupedErrors {
  ErrorGroup program;
  std::map<int, ErrorGroup> per_line;
};

GroupedErrors group_errors(std::span<const RawDiagnostic> diags, TemplateRegistry& registry);

/// Lookup-only grouping: unseen patterns become kUnknownTemplate.
GroupedErrors group_errors(std::span<const RawDiagnostic> diags, const TemplateRegistry& registry);

}  // namespace tegcer
