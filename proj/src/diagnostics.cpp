// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/diagnostics.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <openssl/evp.h>

#include <algorithm>
#include <cerrno>
#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tegcer/error.hpp"

extern char** environ;

namespace tegcer {

using json = nlohmann::json;

ParsedDiagnostics parse_diagnostics(std::string_view compiler_output, std::string_view file_name) {
  static const std::regex kLine(
      R"(^(.+?):(\d+):(?:(\d+):)?\s*(fatal error|error|warning|note|remark):\s?(.*)$)");
  const auto base = std::filesystem::path(file_name).filename().string();

  ParsedDiagnostics out;
  std::istringstream in{std::string(compiler_output)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (!std::regex_match(line, m, kLine)) {
      if (!line.empty()) ++out.skipped_lines;
      continue;
    }
    const std::string file = m[1].str();
    const std::string severity = m[4].str();
    if (severity != "error" && severity != "fatal error") continue;
    if (file != file_name && std::filesystem::path(file).filename() != base) {
      ++out.skipped_lines;
      continue;
    }
    RawDiagnostic d;
    d.line = std::stoi(m[2].str());
    d.column = m[3].matched ? std::stoi(m[3].str()) : 0;
    d.message = m[5].str();
    if (d.line < 1) {
      ++out.skipped_lines;
      continue;
    }
    out.errors.push_back(std::move(d));
  }
  return out;
}

std::string source_sha256(std::string_view source) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(source.data(), source.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

CompilerConfig CompilerConfig::from_env() {
  CompilerConfig config;
  if (const char* cc = std::getenv("TEGCER_CC"); cc != nullptr && *cc != '\0') {
    config.command = cc;
  }
  return config;
}

// Counting gate on concurrent compiler processes.
class Compiler::Slots {
 public:
  explicit Slots(std::size_t n) : free_(std::max<std::size_t>(n, 1)) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return free_ > 0; });
    --free_;
  }
  void release() {
    {
      std::lock_guard lock(mu_);
      ++free_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t free_;
};

namespace {

class TempSource {
 public:
  explicit TempSource(std::string_view source) {
    std::string tmpl = (std::filesystem::temp_directory_path() / "tegcer-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) {
      throw ConfigError(std::string("cannot create temporary directory: ") + std::strerror(errno));
    }
    dir_ = tmpl;
    file_ = dir_ / "prog.c";
    std::ofstream out(file_, std::ios::binary);
    out.write(source.data(), static_cast<std::streamsize>(source.size()));
    if (!out) throw ConfigError("cannot write temporary source file");
  }
  ~TempSource() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  TempSource(const TempSource&) = delete;
  TempSource& operator=(const TempSource&) = delete;

  const std::filesystem::path& file() const { return file_; }

 private:
  std::filesystem::path dir_;
  std::filesystem::path file_;
};

std::vector<std::string> split_command(const std::string& command, const std::string& file) {
  std::vector<std::string> argv;
  std::string cur;
  bool in_token = false;
  char quote = 0;
  for (char c : command) {
    if (quote != 0) {
      if (c == quote) quote = 0;
      else cur += c;
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_token = true;
    } else if (c == ' ' || c == '\t') {
      if (in_token) argv.push_back(std::move(cur));
      cur.clear();
      in_token = false;
    } else {
      cur += c;
      in_token = true;
    }
  }
  if (in_token) argv.push_back(std::move(cur));
  if (argv.empty()) throw ConfigError("empty compiler command");

  bool substituted = false;
  for (auto& arg : argv) {
    for (auto pos = arg.find("{file}"); pos != std::string::npos; pos = arg.find("{file}")) {
      arg.replace(pos, 6, file);
      substituted = true;
    }
  }
  if (!substituted) argv.push_back(file);
  return argv;
}

std::vector<std::string> child_environment() {
  std::vector<std::string> env;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    std::string_view kv(*e);
    if (kv.starts_with("LC_ALL=") || kv.starts_with("LANG=") || kv.starts_with("LANGUAGE=")) continue;
    env.emplace_back(kv);
  }
  // ASCII quotes in diagnostics, no localized messages.
  env.emplace_back("LC_ALL=C");
  env.emplace_back("LANG=C");
  return env;
}

struct ProcessResult {
  std::string output;
};

ProcessResult run_process(const std::vector<std::string>& args, std::chrono::milliseconds timeout,
                          std::size_t cap) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw ConfigError("pipe failed");

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDERR_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

  std::vector<char*> argv;
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  auto env_strings = child_environment();
  std::vector<char*> envp;
  for (auto& e : env_strings) envp.push_back(e.data());
  envp.push_back(nullptr);

  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  ::close(fds[1]);
  if (rc != 0) {
    ::close(fds[0]);
    throw ConfigError("cannot run compiler '" + args[0] + "': " + std::strerror(rc));
  }

  ProcessResult result;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[8192];
  bool timed_out = false;
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (pr < 0 && errno == EINTR) continue;
    if (pr == 0) {
      timed_out = true;
      break;
    }
    const ssize_t n = ::read(fds[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    if (result.output.size() < cap) {
      result.output.append(buf, std::min<std::size_t>(static_cast<std::size_t>(n),
                                                       cap - result.output.size()));
    }
  }
  ::close(fds[0]);
  if (timed_out) ::kill(pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (timed_out) {
    throw TimeoutError("compiler exceeded " + std::to_string(timeout.count()) + " ms");
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
    throw ConfigError("compiler command '" + args[0] + "' not found");
  }
  return result;
}

json diagnostics_to_json(const std::vector<RawDiagnostic>& diags) {
  json arr = json::array();
  for (const auto& d : diags) arr.push_back({{"line", d.line}, {"col", d.column}, {"message", d.message}});
  return arr;
}

}  // namespace

std::unordered_map<std::string, std::vector<RawDiagnostic>> load_fixtures(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fixture file " + path.string());
  std::unordered_map<std::string, std::vector<RawDiagnostic>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto rec = json::parse(line);
      std::vector<RawDiagnostic> diags;
      for (const auto& d : rec.at("diagnostics")) {
        diags.push_back({d.at("line").get<int>(), d.value("col", 0), d.at("message").get<std::string>()});
      }
      out.insert_or_assign(rec.at("source_sha256").get<std::string>(), std::move(diags));
    } catch (const json::exception& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": bad fixture record: " + e.what());
    }
  }
  return out;
}

void write_fixtures(const std::filesystem::path& path, std::span<const std::string> sources,
                    const Compiler& compiler) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write fixture file " + path.string());
  std::set<std::string> seen;
  for (const auto& src : sources) {
    auto hash = source_sha256(src);
    if (!seen.insert(hash).second) continue;
    json rec = {{"source_sha256", hash}, {"diagnostics", diagnostics_to_json(compiler.run_compiler(src))}};
    out << rec.dump() << '\n';
  }
}

Compiler::Compiler(CompilerConfig config)
    : config_(std::move(config)), slots_(std::make_unique<Slots>(config_.max_parallel)) {
  if (config_.fixture_path) fixtures_ = load_fixtures(*config_.fixture_path);
}

Compiler::~Compiler() = default;

std::vector<RawDiagnostic> Compiler::compile(std::string_view source) const {
  if (config_.fixture_path) {
    if (auto it = fixtures_.find(source_sha256(source)); it != fixtures_.end()) return it->second;
    if (config_.fixture_only) {
      throw ConfigError("source " + source_sha256(source).substr(0, 12) +
                        " has no recorded diagnostics in " + config_.fixture_path->string());
    }
  }
  return run_compiler(source);
}

std::vector<RawDiagnostic> Compiler::run_compiler(std::string_view source) const {
  TempSource tmp(source);
  const auto argv = split_command(config_.command, tmp.file().string());
  slots_->acquire();
  ProcessResult result;
  try {
    result = run_process(argv, config_.timeout, config_.stderr_cap);
  } catch (...) {
    slots_->release();
    throw;
  }
  slots_->release();
  auto parsed = parse_diagnostics(result.output, tmp.file().string());
  skipped_ += parsed.skipped_lines;
  return std::move(parsed.errors);
}

std::string generalize(std::string_view message) {
  std::string out;
  out.reserve(message.size());
  int k = 0;
  std::size_t i = 0;
  while (i < message.size()) {
    const char c = message[i];
    if (c != '\'' && c != '"') {
      out += c;
      ++i;
      continue;
    }
    const auto close = message.find(c, i + 1);
    if (close == std::string_view::npos) {
      out.append(message.substr(i));
      break;
    }
    out += "□_" + std::to_string(++k);
    i = close + 1;
  }
  return out;
}

TemplateId TemplateRegistry::intern(std::string_view pattern) {
  if (auto id = find(pattern)) return *id;
  if (frozen_) return kUnknownTemplate;
  patterns_.emplace_back(pattern);
  const auto id = static_cast<TemplateId>(patterns_.size());
  ids_.emplace(std::string(pattern), id);
  return id;
}

std::optional<TemplateId> TemplateRegistry::find(std::string_view pattern) const {
  if (auto it = ids_.find(std::string(pattern)); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::map<TemplateId, TemplateId> TemplateRegistry::renumber_and_freeze(
    const std::map<TemplateId, std::size_t>& counts) {
  std::vector<TemplateId> order(patterns_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<TemplateId>(i + 1);
  auto count_of = [&](TemplateId id) {
    auto it = counts.find(id);
    return it == counts.end() ? std::size_t{0} : it->second;
  };
  std::sort(order.begin(), order.end(), [&](TemplateId a, TemplateId b) {
    if (count_of(a) != count_of(b)) return count_of(a) > count_of(b);
    return patterns_[a - 1] < patterns_[b - 1];
  });
  std::map<TemplateId, TemplateId> remap{{kUnknownTemplate, kUnknownTemplate}};
  std::vector<std::string> renumbered;
  renumbered.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = static_cast<TemplateId>(i + 1);
    renumbered.push_back(patterns_[order[i] - 1]);
  }
  *this = frozen_from(std::move(renumbered));
  return remap;
}

const std::string& TemplateRegistry::pattern(TemplateId id) const {
  static const std::string kUnknown = "<unknown>";
  if (id < 1 || static_cast<std::size_t>(id) > patterns_.size()) return kUnknown;
  return patterns_[id - 1];
}

TemplateRegistry TemplateRegistry::frozen_from(std::vector<std::string> patterns) {
  TemplateRegistry reg;
  for (const auto& p : patterns) reg.intern(p);
  reg.frozen_ = true;
  return reg;
}

ErrorGroup ErrorGroup::of(std::vector<TemplateId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ErrorGroup{std::move(ids)};
}

std::string ErrorGroup::render() const {
  std::string out;
  for (auto id : ids) {
    if (!out.empty()) out += " ∧ ";
    out += "E_" + std::to_string(id);
  }
  return out;
}

namespace {

template <typename Intern>
GroupedErrors group_with(std::span<const RawDiagnostic> diags, Intern intern) {
  std::vector<TemplateId> all;
  std::map<int, std::vector<TemplateId>> by_line;
  for (const auto& d : diags) {
    const TemplateId id = intern(generalize(d.message));
    all.push_back(id);
    by_line[d.line].push_back(id);
  }
  GroupedErrors out;
  out.program = ErrorGroup::of(std::move(all));
  for (auto& [line, ids] : by_line) out.per_line.emplace(line, ErrorGroup::of(std::move(ids)));
  return out;
}

}  // namespace

GroupedErrors group_errors(std::span<const RawDiagnostic> diags, TemplateRegistry& registry) {
  return group_with(diags, [&](const std::string& p) { return registry.intern(p); });
}

GroupedErrors group_errors(std::span<const RawDiagnostic> diags, const TemplateRegistry& registry) {
  return group_with(diags, [&](const std::string& p) { return registry.find(p).value_or(kUnknownTemplate); });
}

}  // namespace tegcer
