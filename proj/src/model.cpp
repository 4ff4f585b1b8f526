// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include "tegcer/model.hpp"

#include <zlib.h>

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "tegcer/error.hpp"

namespace tegcer {

FeatureVector TrainedModel::featurize(const AbstractLine& line, const ErrorGroup& errors) const {
  return vectorize(feature_tokens(line, errors), vocab);
}

std::vector<LabeledVector> vectorize_examples(const TrainedModel& model, std::span<const LabeledExample> examples) {
  std::vector<LabeledVector> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back({model.featurize(ex.abstract_buggy, ex.templates), ex.class_id});
  return out;
}

namespace {

constexpr std::array<char, 6> kMagic = {'T', 'E', 'G', 'C', '1', '\0'};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(bytes.size() - pos, 1u << 30));
    crc = ::crc32(crc, bytes.data() + pos, n);
    pos += n;
  }
  return static_cast<std::uint32_t>(crc);
}

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void count(std::size_t n) { u32(static_cast<std::uint32_t>(n)); }
  void str(std::string_view s) {
    count(s.size());
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void floats(const std::vector<float>& v) {
    for (float f : v) f32(f);
  }
  void section(const Writer& body) {
    u64(body.buf_.size());
    bytes(body.buf_);
  }

  std::vector<std::uint8_t>& buffer() { return buf_; }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t base) : bytes_(bytes), base_(base) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1, "u8")); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2, "u16")); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4, "u32")); }
  std::uint64_t u64() { return get_le(8, "u64"); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t count() { return u32(); }
  std::string str() {
    const auto n = count();
    need(n, "string");
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::vector<float> floats(std::size_t n) {
    need(n * 4, "weight tensor");
    std::vector<float> v(n);
    for (auto& f : v) f = f32();
    return v;
  }
  Reader section(const char* name) {
    const auto len = u64();
    need(len, name);
    Reader sub(bytes_.subspan(pos_, len), base_ + pos_);
    pos_ += len;
    return sub;
  }
  void expect_end(const char* name) const {
    if (pos_ != bytes_.size()) throw FormatError(std::string("trailing bytes in ") + name + " section", offset());
  }
  std::size_t offset() const { return base_ + pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) throw FormatError(std::string("truncated ") + what, offset());
  }
  std::uint64_t get_le(int n, const char* what) {
    need(static_cast<std::size_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

void write_repair(Writer& w, const ClassKey& key) {
  w.count(key.templates.ids.size());
  for (auto id : key.templates.ids) w.u32(static_cast<std::uint32_t>(id));
  w.count(key.repair.insertions.size());
  for (const auto& t : key.repair.insertions) w.str(t);
  w.count(key.repair.deletions.size());
  for (const auto& t : key.repair.deletions) w.str(t);
}

ClassKey read_repair(Reader& r) {
  ClassKey key;
  const auto nt = r.count();
  for (std::size_t i = 0; i < nt; ++i) key.templates.ids.push_back(static_cast<TemplateId>(r.u32()));
  const auto ni = r.count();
  for (std::size_t i = 0; i < ni; ++i) key.repair.insertions.push_back(r.str());
  const auto nd = r.count();
  for (std::size_t i = 0; i < nd; ++i) key.repair.deletions.push_back(r.str());
  return key;
}

Writer weights_section(const DenseNet<float>& net) {
  Writer w;
  w.count(net.inputs);
  w.count(net.hidden);
  w.count(net.classes);
  w.floats(net.w1);
  w.floats(net.b1);
  w.floats(net.w2);
  w.floats(net.b2);
  return w;
}

std::string weights_version(const DenseNet<float>& net) {
  auto w = weights_section(net);
  char hex[9];
  std::snprintf(hex, sizeof hex, "%08x", crc32_of(w.buffer()));
  return std::string("tegc1-") + hex;
}

}  // namespace

ModelTraining train_model(const Dataset& dataset, const NetworkConfig& config) {
  if (dataset.examples.empty()) throw DatasetError("dataset has no labeled examples");
  std::vector<std::vector<std::string>> sequences;
  sequences.reserve(dataset.examples.size());
  for (const auto& ex : dataset.examples) sequences.push_back(feature_tokens(ex.abstract_buggy, ex.templates));

  ModelTraining out;
  auto& model = out.model;
  model.vocab = FeatureVocabulary::build(sequences);
  model.templates = dataset.templates;
  model.templates.freeze();
  model.classes = dataset.classes;
  model.config = config;
  out.vectors.reserve(sequences.size());
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    out.vectors.push_back({vectorize(sequences[i], model.vocab), dataset.examples[i].class_id});
  }
  auto trained = train(out.vectors, model.classes.size(), config);
  model.net = std::move(trained.net);
  model.metrics = std::move(trained.metrics);
  out.split = std::move(trained.split);
  model.examples = build_index(dataset.examples);
  model.version = weights_version(model.net);
  return out;
}

std::vector<std::uint8_t> serialize_model(const TrainedModel& m) {
  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u16(kModelFormatVersion);

  Writer vocab;
  vocab.count(m.vocab.size());
  for (const auto& t : m.vocab.tokens()) vocab.str(t);
  w.section(vocab);

  Writer templates;
  templates.count(m.templates.size());
  for (const auto& p : m.templates.patterns()) templates.str(p);
  w.section(templates);

  Writer classes;
  classes.count(m.classes.size());
  for (const auto& c : m.classes.classes()) {
    write_repair(classes, c.key);
    classes.u64(c.frequency);
  }
  w.section(classes);

  Writer config;
  config.u64(m.config.hidden_units);
  config.f64(m.config.dropout_rate);
  config.u64(m.config.epochs);
  config.u64(m.config.batch_size);
  config.f64(m.config.learning_rate);
  config.f64(m.config.adam_beta1);
  config.f64(m.config.adam_beta2);
  config.f64(m.config.adam_epsilon);
  config.u64(m.config.seed);
  config.f64(m.config.split.train);
  config.f64(m.config.split.validation);
  config.f64(m.config.split.test);
  w.section(config);

  w.section(weights_section(m.net));

  Writer examples;
  examples.count(m.examples.lists().size());
  for (const auto& [id, list] : m.examples.lists()) {
    examples.u64(id);
    examples.count(list.size());
    for (const auto& e : list) {
      examples.str(e.erroneous);
      examples.str(e.repaired);
      examples.u64(e.frequency);
    }
  }
  w.section(examples);

  Writer meta;
  meta.str(m.version);
  meta.u64(m.metrics.best_epoch);
  meta.f64(m.metrics.best_validation_pred_at_1);
  meta.count(m.metrics.epoch_loss.size());
  for (double v : m.metrics.epoch_loss) meta.f64(v);
  meta.count(m.metrics.validation_pred_at_1.size());
  for (double v : m.metrics.validation_pred_at_1) meta.f64(v);
  w.section(meta);

  w.u32(crc32_of(w.buffer()));
  return std::move(w.buffer());
}

TrainedModel deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw FormatError("bad magic: expected \"TEGC1\"", 0);
  }
  if (bytes.size() < kMagic.size() + 2 + 4) throw FormatError("truncated header", bytes.size());
  const auto body = bytes.first(bytes.size() - 4);
  Reader crc_reader(bytes.last(4), body.size());
  const auto stored_crc = crc_reader.u32();
  if (stored_crc != crc32_of(body)) throw FormatError("checksum mismatch (file corrupt or truncated)", body.size());

  Reader r(body, 0);
  for (std::size_t i = 0; i < kMagic.size(); ++i) r.u8();
  if (const auto version = r.u16(); version != kModelFormatVersion) {
    throw FormatError("unsupported format version " + std::to_string(version), kMagic.size());
  }

  TrainedModel m;
  {
    auto s = r.section("vocabulary");
    std::vector<std::string> tokens(s.count());
    for (auto& t : tokens) t = s.str();
    s.expect_end("vocabulary");
    m.vocab = FeatureVocabulary::from_tokens(std::move(tokens));
  }
  {
    auto s = r.section("templates");
    std::vector<std::string> patterns(s.count());
    for (auto& p : patterns) p = s.str();
    s.expect_end("templates");
    m.templates = TemplateRegistry::frozen_from(std::move(patterns));
  }
  {
    auto s = r.section("classes");
    std::vector<ErrorRepairClass> classes(s.count());
    for (std::size_t i = 0; i < classes.size(); ++i) {
      classes[i].id = i;
      classes[i].key = read_repair(s);
      classes[i].frequency = s.u64();
    }
    s.expect_end("classes");
    m.classes = ClassTable::from_classes(std::move(classes));
  }
  {
    auto s = r.section("config");
    m.config.hidden_units = s.u64();
    m.config.dropout_rate = s.f64();
    m.config.epochs = s.u64();
    m.config.batch_size = s.u64();
    m.config.learning_rate = s.f64();
    m.config.adam_beta1 = s.f64();
    m.config.adam_beta2 = s.f64();
    m.config.adam_epsilon = s.f64();
    m.config.seed = s.u64();
    m.config.split.train = s.f64();
    m.config.split.validation = s.f64();
    m.config.split.test = s.f64();
    s.expect_end("config");
  }
  {
    auto s = r.section("weights");
    const auto at = s.offset();
    auto& net = m.net;
    net.inputs = s.count();
    net.hidden = s.count();
    net.classes = s.count();
    if (net.inputs != m.vocab.size() || net.classes != m.classes.size()) {
      throw FormatError("weight shapes disagree with vocabulary or class table", at);
    }
    net.w1 = s.floats(net.hidden * net.inputs);
    net.b1 = s.floats(net.hidden);
    net.w2 = s.floats(net.classes * net.hidden);
    net.b2 = s.floats(net.classes);
    s.expect_end("weights");
  }
  {
    auto s = r.section("examples");
    std::map<ClassId, std::vector<ExampleEntry>> lists;
    const auto n = s.count();
    for (std::size_t i = 0; i < n; ++i) {
      const auto id = static_cast<ClassId>(s.u64());
      auto& list = lists[id];
      list.resize(s.count());
      for (auto& e : list) {
        e.erroneous = s.str();
        e.repaired = s.str();
        e.frequency = s.u64();
      }
    }
    s.expect_end("examples");
    m.examples = ExampleIndex::from_lists(std::move(lists));
  }
  {
    auto s = r.section("metadata");
    m.version = s.str();
    m.metrics.best_epoch = s.u64();
    m.metrics.best_validation_pred_at_1 = s.f64();
    m.metrics.epoch_loss.resize(s.count());
    for (auto& v : m.metrics.epoch_loss) v = s.f64();
    m.metrics.validation_pred_at_1.resize(s.count());
    for (auto& v : m.metrics.validation_pred_at_1) v = s.f64();
    s.expect_end("metadata");
  }
  r.expect_end("file");
  return m;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write model file " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("failed writing model file " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace tegcer
