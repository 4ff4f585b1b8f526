// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/diagnostics.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "tegcer/error.hpp"
#include "test_support.hpp"

namespace tegcer {
namespace {

using testing::data_path;
using testing::fixture_config;
using testing::read_file;

TEST_CASE("parse_diagnostics keeps errors for the compiled file") {
  const std::string out =
      "prog.c:5:16: error: expected ';' after expression\n"
      "    scanf(\"%d\", &n)\n"
      "               ^\n"
      "               ;\n"
      "prog.c:9:15: warning: using the result of an assignment as a condition\n"
      "prog.c:9:10: note: place parentheses around the assignment\n"
      "/usr/include/stdio.h:3:1: error: something in a header\n"
      "prog.c:12: error: no column here\n"
      "2 errors generated.\n";
  const auto parsed = parse_diagnostics(out, "/tmp/x/prog.c");
  REQUIRE(parsed.errors.size() == 2);
  CHECK(parsed.errors[0] == RawDiagnostic{5, 16, "expected ';' after expression"});
  CHECK(parsed.errors[1] == RawDiagnostic{12, 0, "no column here"});
  CHECK(parsed.skipped_lines == 5);
}

TEST_CASE("parse_diagnostics accepts gcc fatal errors and full paths") {
  const auto parsed =
      parse_diagnostics("/tmp/x/prog.c:1:10: fatal error: nope.h: No such file or directory\n", "/tmp/x/prog.c");
  REQUIRE(parsed.errors.size() == 1);
  CHECK(parsed.errors[0].line == 1);
  CHECK(parsed.errors[0].message == "nope.h: No such file or directory");
}

TEST_CASE("parse_diagnostics on empty output") {
  const auto parsed = parse_diagnostics("", "prog.c");
  CHECK(parsed.errors.empty());
  CHECK(parsed.skipped_lines == 0);
}

TEST_CASE("generalize replaces quoted segments left to right") {
  CHECK(generalize("use of undeclared identifier 'sum'") == "use of undeclared identifier □_1");
  CHECK(generalize("expected ';' in 'for' statement") == "expected □_1 in □_2 statement");
  CHECK(generalize("expected \"FILENAME\" or <FILENAME>") == "expected □_1 or <FILENAME>");
  CHECK(generalize("expression is not assignable") == "expression is not assignable");
  CHECK(generalize("") == "");
}

TEST_CASE("generalize stops at an unpartnered quote") {
  CHECK(generalize("missing terminating ' character") == "missing terminating ' character");
  CHECK(generalize("a 'b' c 'd") == "a □_1 c 'd");
}

TEST_CASE("generalize is idempotent") {
  for (const auto* m : {"use of undeclared identifier 'sum'", "expected ';' in 'for' statement specifier",
                        "invalid '==' at end of declaration; did you mean '='?", "extraneous closing brace ('}')",
                        "no quotes at all", "odd ' quote"}) {
    const auto once = generalize(m);
    CHECK(generalize(once) == once);
  }
}

TEST_CASE("template registry interns and freezes") {
  TemplateRegistry reg;
  const auto a = reg.intern("expected □_1 after expression");
  const auto b = reg.intern("use of undeclared identifier □_1");
  CHECK(a == 1);
  CHECK(b == 2);
  CHECK(reg.intern("expected □_1 after expression") == a);
  CHECK(reg.pattern(b) == "use of undeclared identifier □_1");
  reg.freeze();
  CHECK(reg.intern("brand new") == kUnknownTemplate);
  CHECK(reg.size() == 2);
  CHECK(reg.pattern(kUnknownTemplate) == "<unknown>");
}

TEST_CASE("renumber_and_freeze orders by frequency then text") {
  TemplateRegistry reg;
  const auto rare = reg.intern("b rare");
  const auto common = reg.intern("z common");
  const auto tied = reg.intern("a tied");
  const auto map = reg.renumber_and_freeze({{rare, 1}, {common, 9}, {tied, 1}});
  CHECK(map.at(common) == 1);
  CHECK(map.at(tied) == 2);
  CHECK(map.at(rare) == 3);
  CHECK(map.at(kUnknownTemplate) == kUnknownTemplate);
  CHECK(reg.frozen());
  CHECK(reg.pattern(1) == "z common");
  CHECK(reg.find("a tied") == 2);
}

TEST_CASE("group_errors builds per-line and program groups") {
  TemplateRegistry reg;
  for (int i = 1; i <= 6; ++i) reg.intern("t" + std::to_string(i));
  const std::vector<RawDiagnostic> diags = {{4, 1, "t5"}, {4, 9, "t6"}, {7, 2, "t5"}};
  const auto grouped = group_errors(diags, reg);
  CHECK(grouped.program.ids == std::vector<TemplateId>{5, 6});
  CHECK(grouped.per_line.at(4).ids == std::vector<TemplateId>{5, 6});
  CHECK(grouped.per_line.at(4).render() == "E_5 ∧ E_6");
  CHECK(grouped.per_line.at(7).ids == std::vector<TemplateId>{5});
}

TEST_CASE("group_errors single diagnostic is a singleton") {
  TemplateRegistry reg;
  const std::vector<RawDiagnostic> diags = {{2, 1, "expected ';' after expression"}};
  const auto grouped = group_errors(diags, reg);
  CHECK(grouped.program.render() == "E_1");
  CHECK(grouped.per_line.size() == 1);
}

TEST_CASE("group_errors against a frozen registry maps unseen patterns to unknown") {
  auto reg = TemplateRegistry::frozen_from({"expected □_1"});
  const std::vector<RawDiagnostic> diags = {{1, 1, "expected ')'"}, {1, 2, "never seen"}};
  const auto grouped = group_errors(diags, std::as_const(reg));
  CHECK(grouped.program.ids == std::vector<TemplateId>{kUnknownTemplate, 1});
  CHECK(reg.size() == 1);
}

TEST_CASE("source_sha256 is hex SHA-256") {
  CHECK(source_sha256("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(source_sha256("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("recorded fixtures replay clang diagnostics") {
  const Compiler compiler(fixture_config());
  CHECK(compiler.fixture_size() > 2000);

  CHECK(compiler.compile(read_file(data_path("programs/well_formed.c"))).empty());

  const auto missing = compiler.compile(read_file(data_path("programs/missing_semicolon.c")));
  REQUIRE(missing.size() == 1);
  CHECK(missing[0].message.starts_with("expected ';'"));

  const auto assign = compiler.compile(read_file(data_path("programs/not_assignable.c")));
  REQUIRE(assign.size() == 1);
  CHECK(assign[0].line == 3);
  CHECK(assign[0].message == "expression is not assignable");
}

TEST_CASE("fixture-only mode rejects unrecorded sources") {
  const Compiler compiler(fixture_config());
  CHECK_THROWS_AS(compiler.compile("int never_recorded;\n"), ConfigError);
}

class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "tegcer-test-XXXXXX").string();
    path_ = ::mkdtemp(tmpl.data());
  }
  ~ScratchDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::filesystem::path write_script(const ScratchDir& dir, const std::string& name, const std::string& body) {
  const auto path = dir.path() / name;
  std::ofstream(path) << "#!/bin/sh\n" << body;
  std::filesystem::permissions(path, std::filesystem::perms::owner_all);
  return path;
}

TEST_CASE("compiler subprocess output is parsed") {
  ScratchDir dir;
  const auto script = write_script(dir, "fakecc", "echo \"$1:2:5: error: expected ';' after expression\" >&2\n"
                                                  "echo \"$1:3:1: warning: ignored\" >&2\nexit 1\n");
  CompilerConfig config;
  config.command = script.string() + " {file}";
  const Compiler compiler(config);
  const auto diags = compiler.compile("int a\nint b\n");
  REQUIRE(diags.size() == 1);
  CHECK(diags[0] == RawDiagnostic{2, 5, "expected ';' after expression"});
}

TEST_CASE("file path is appended when the command has no placeholder") {
  ScratchDir dir;
  const auto script = write_script(dir, "fakecc", "echo \"$1:1:1: error: got it\" >&2\n");
  CompilerConfig config;
  config.command = script.string();
  const Compiler compiler(config);
  REQUIRE(compiler.compile("x").size() == 1);
}

TEST_CASE("compiler timeout") {
  CompilerConfig config;
  config.command = "sh -c 'sleep 5' {file}";
  config.timeout = std::chrono::milliseconds(200);
  const Compiler compiler(config);
  const auto start = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(compiler.compile("int main(){}"), TimeoutError);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(3));
}

TEST_CASE("missing compiler is a configuration error") {
  CompilerConfig config;
  config.command = "/nonexistent/tegcer-cc {file}";
  const Compiler compiler(config);
  CHECK_THROWS_AS(compiler.compile("int main(){}"), ConfigError);
}

TEST_CASE("TEGCER_CC overrides the command") {
  ::setenv("TEGCER_CC", "clang -fsyntax-only {file}", 1);
  CHECK(CompilerConfig::from_env().command == "clang -fsyntax-only {file}");
  ::unsetenv("TEGCER_CC");
  CHECK(CompilerConfig::from_env().command == "cc -fsyntax-only -std=c99 {file}");
}

TEST_CASE("write_fixtures round-trips through load_fixtures") {
  ScratchDir dir;
  const auto script = write_script(dir, "fakecc", "echo \"$1:1:2: error: boom 'x'\" >&2\n");
  CompilerConfig config;
  config.command = script.string() + " {file}";
  const Compiler compiler(config);
  const std::vector<std::string> sources = {"a", "b", "a"};
  const auto path = dir.path() / "fx.jsonl";
  write_fixtures(path, sources, compiler);
  const auto loaded = load_fixtures(path);
  CHECK(loaded.size() == 2);
  CHECK(loaded.at(source_sha256("a")) == std::vector<RawDiagnostic>{{1, 2, "boom 'x'"}});

  CompilerConfig replay;
  replay.fixture_path = path;
  replay.fixture_only = true;
  CHECK(Compiler(replay).compile("b").size() == 1);
}

}  // namespace
}  // namespace tegcer
