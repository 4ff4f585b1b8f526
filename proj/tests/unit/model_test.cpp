// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/model.hpp"

#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "fake_compiler.hpp"
#include "oracles.hpp"
#include "tegcer/error.hpp"

namespace tegcer {
namespace {

std::string numbered_program(int statements) {
  std::string s = "int main() {\n    int a = 1;\n    int b = 2;\n";
  for (int i = 0; i < statements; ++i) s += "    a = a + " + std::to_string(i) + ";\n";
  return s + "    return 0;\n}\n";
}

std::string with_line(const std::string& program, int line_no, const std::string& text) {
  std::string out;
  int n = 1;
  std::size_t start = 0;
  while (start < program.size()) {
    const auto end = program.find('\n', start);
    out += (n == line_no ? text : program.substr(start, end - start)) + "\n";
    start = end + 1;
    ++n;
  }
  return out;
}

Dataset small_dataset() {
  static const Dataset ds = [] {
    testing::FakeCompiler fake;
    const Compiler compiler(fake.config());
    const auto good = numbered_program(20);
    std::vector<ProgramPair> pairs;
    for (int i = 0; i < 20; ++i) {
      pairs.push_back({"s" + std::to_string(i), with_line(good, 4 + i, "    a = a + " + std::to_string(i)), good, {}});
      pairs.push_back({"u" + std::to_string(i), with_line(good, 4 + i, "    a = xyz + " + std::to_string(i) + ";"), good, {}});
    }
    return build_dataset(pairs, compiler, 10);
  }();
  return ds;
}

NetworkConfig tiny_config() {
  NetworkConfig config;
  config.hidden_units = 8;
  config.seed = 5;
  return config;
}

void rewrite_crc(std::vector<std::uint8_t>& bytes) {
  const auto crc = oracle::crc32(bytes.data(), bytes.size() - 4);
  for (int i = 0; i < 4; ++i) bytes[bytes.size() - 4 + i] = static_cast<std::uint8_t>(crc >> (8 * i));
}

TEST_CASE("train_model builds vocabulary, classes and example index") {
  const auto ds = small_dataset();
  REQUIRE(ds.classes.size() == 2);
  const auto training = train_model(ds, tiny_config());
  const auto& m = training.model;
  CHECK(m.class_count() == 2);
  CHECK(m.net.inputs == m.vocab.size());
  CHECK(m.net.hidden == 8);
  CHECK(m.templates.frozen());
  CHECK(training.vectors.size() == ds.examples.size());
  CHECK(m.examples.examples(0).size() == 20);
  CHECK(m.version.starts_with("tegc1-"));
  CHECK(vectorize_examples(m, ds.examples).size() == ds.examples.size());
}

TEST_CASE("model bytes start with the magic and end with the CRC") {
  const auto m = train_model(small_dataset(), tiny_config()).model;
  const auto bytes = serialize_model(m);
  REQUIRE(bytes.size() > 12);
  CHECK(std::memcmp(bytes.data(), "TEGC1\0", 6) == 0);
  CHECK(bytes[6] == kModelFormatVersion);
  CHECK(bytes[7] == 0);
  const auto crc = oracle::crc32(bytes.data(), bytes.size() - 4);
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i) stored |= static_cast<std::uint32_t>(bytes[bytes.size() - 4 + i]) << (8 * i);
  CHECK(stored == crc);
}

TEST_CASE("round trip preserves weights and predictions bitwise") {
  const auto m = train_model(small_dataset(), tiny_config()).model;
  const auto restored = deserialize_model(serialize_model(m));
  CHECK(restored.net == m.net);
  CHECK(restored.vocab.tokens() == m.vocab.tokens());
  CHECK(restored.templates.patterns() == m.templates.patterns());
  CHECK(restored.config == m.config);
  CHECK(restored.metrics == m.metrics);
  CHECK(restored.version == m.version);
  CHECK(restored.examples.lists() == m.examples.lists());
  CHECK(serialize_model(restored) == serialize_model(m));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::size_t> active;
    for (std::size_t f = 0; f < m.vocab.size(); ++f) {
      if (rng() % 3 == 0) active.push_back(f);
    }
    const FeatureVector x(m.vocab.size(), active);
    CHECK(forward(restored.net, x).probabilities == forward(m.net, x).probabilities);
  }
}

TEST_CASE("save and load through a file") {
  const auto m = train_model(small_dataset(), tiny_config()).model;
  const auto path = std::filesystem::temp_directory_path() / "tegcer-model-test.tegc";
  save_model(m, path);
  const auto loaded = load_model(path);
  std::filesystem::remove(path);
  CHECK(loaded.net == m.net);
  CHECK_THROWS_AS(load_model("/nonexistent/model.tegc"), ConfigError);
}

TEST_CASE("corrupt files are rejected with a format error") {
  const auto bytes = serialize_model(train_model(small_dataset(), tiny_config()).model);

  SUBCASE("truncated") {
    for (std::size_t n : {std::size_t{0}, std::size_t{3}, std::size_t{10}, bytes.size() / 2, bytes.size() - 1}) {
      std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(n));
      CHECK_THROWS_AS(deserialize_model(cut), FormatError);
    }
  }
  SUBCASE("wrong magic names the expected magic") {
    auto bad = bytes;
    bad[0] = 'X';
    try {
      deserialize_model(bad);
      FAIL("expected a format error");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("TEGC1") != std::string::npos);
      CHECK(e.offset() == 0);
    }
  }
  SUBCASE("flipped byte fails the checksum") {
    auto bad = bytes;
    bad[bytes.size() / 2] ^= 0x40;
    CHECK_THROWS_AS(deserialize_model(bad), FormatError);
  }
  SUBCASE("unsupported version") {
    auto bad = bytes;
    bad[6] = 9;
    rewrite_crc(bad);
    try {
      deserialize_model(bad);
      FAIL("expected a format error");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("version") != std::string::npos);
      CHECK(e.offset() == 6);
    }
  }
  SUBCASE("section length past the end") {
    auto bad = bytes;
    bad[8] = 0xFF;
    bad[9] = 0xFF;
    bad[10] = 0xFF;
    rewrite_crc(bad);
    CHECK_THROWS_AS(deserialize_model(bad), FormatError);
  }
}

TEST_CASE("retraining with the same seed gives identical model bytes") {
  const auto ds = small_dataset();
  CHECK(serialize_model(train_model(ds, tiny_config()).model) == serialize_model(train_model(ds, tiny_config()).model));
}

}  // namespace
}  // namespace tegcer
