// Copyright 2026 The tegcer Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tegcer/abstraction.hpp"
#include "tegcer/corpus.hpp"
#include "tegcer/diagnostics.hpp"
#include "tegcer/encoder.hpp"
#include "tegcer/error.hpp"
#include "tegcer/model.hpp"
#include "tegcer/repair.hpp"
#include "tegcer/suggester.hpp"
#include "tegcer/synth.hpp"

namespace py = pybind11;
using namespace tegcer;

namespace {

CompilerConfig make_config(const std::optional<std::string>& fixtures, bool fixture_only) {
  auto config = CompilerConfig::from_env();
  if (fixtures) config.fixture_path = *fixtures;
  config.fixture_only = fixture_only;
  return config;
}

py::dict example_dict(const ExampleEntry& e) {
  py::dict d;
  d["erroneous"] = e.erroneous;
  d["repaired"] = e.repaired;
  d["frequency"] = e.frequency;
  return d;
}

// Python-side model: the trained model plus the compiler used to serve it.
class PyModel {
 public:
  PyModel(TrainedModel model, CompilerConfig config)
      : model_(std::move(model)), compiler_(std::make_unique<Compiler>(std::move(config))) {}

  const TrainedModel& model() const { return model_; }

  py::list suggest(const std::string& source, std::size_t top_k, std::size_t examples) const {
    SuggestOptions opts;
    opts.top_k = top_k;
    opts.examples_per_page = examples;
    std::vector<Suggestion> result;
    {
      py::gil_scoped_release release;
      result = tegcer::suggest(source, model_, model_.examples, *compiler_, opts);
    }
    py::list out;
    for (const auto& s : result) {
      py::dict d;
      d["line_no"] = s.line_no;
      d["line"] = s.line;
      d["diagnostics"] = s.diagnostics;
      py::list predicted;
      for (const auto& [id, p] : s.predicted) {
        predicted.append(py::make_tuple(id, model_.classes.at(id).key.render(), p));
      }
      d["predicted"] = predicted;
      d["served_class"] = s.served_class ? py::cast(*s.served_class) : py::none();
      py::list ex;
      for (const auto& e : s.examples) ex.append(example_dict(e));
      d["examples"] = ex;
      d["has_more"] = s.has_more;
      out.append(d);
    }
    return out;
  }

  py::list class_keys() const {
    py::list out;
    for (const auto& c : model_.classes.classes()) out.append(c.key.render());
    return out;
  }

 private:
  TrainedModel model_;
  std::unique_ptr<Compiler> compiler_;
};

py::dict dataset_dict(const Dataset& ds) {
  py::list examples;
  for (const auto& ex : ds.examples) {
    py::dict d;
    d["pair_id"] = ex.edit.pair_id;
    d["line_no"] = ex.edit.line_no;
    d["buggy_line"] = ex.edit.buggy_line;
    d["repaired_line"] = ex.edit.repaired_line;
    d["abstract_buggy"] = ex.abstract_buggy.render();
    d["abstract_repaired"] = ex.abstract_repaired.render();
    d["templates"] = ex.templates.render();
    d["repair"] = ex.repair.render();
    d["class_id"] = ex.class_id;
    examples.append(d);
  }
  py::list classes;
  for (const auto& c : ds.classes.classes()) classes.append(py::make_tuple(c.id, c.key.render(), c.frequency));
  py::list skipped;
  for (const auto& s : ds.skipped) skipped.append(py::make_tuple(s.pair_id, s.reason));
  py::dict out;
  out["examples"] = examples;
  out["classes"] = classes;
  out["templates"] = ds.templates.patterns();
  out["skipped"] = skipped;
  return out;
}

}  // namespace

PYBIND11_MODULE(_tegcer, m) {
  m.doc() = "Example-based feedback for C compilation errors";

  auto base = py::register_exception<Error>(m, "TegcerError");
  const auto format_bases = py::make_tuple(base, py::handle(PyExc_ValueError));
  py::register_exception<FormatError>(m, "FormatError", format_bases);
  py::register_exception<CapError>(m, "CapError", base);

  m.def("tokenize", [](const std::string& line) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(line)) out.push_back(t.text);
    return out;
  });
  m.def(
      "abstract_line",
      [](const std::string& line, const std::string& program) {
        return abstract_line(line, build_symbol_table(program)).tokens;
      },
      py::arg("line"), py::arg("program") = "");
  m.def("generalize", &generalize);
  m.def("diff_repair", [](const std::vector<std::string>& bad, const std::vector<std::string>& good) {
    const auto r = diff_repair(AbstractLine{bad}, AbstractLine{good});
    return py::make_tuple(r.insertions, r.deletions);
  });
  m.def("feature_tokens", [](const std::vector<std::string>& line, const std::vector<int>& templates) {
    return feature_tokens(AbstractLine{line}, ErrorGroup::of(templates));
  });
  m.def(
      "synthesize_corpus",
      [](std::size_t pairs, std::uint64_t seed) {
        py::list out;
        for (const auto& p : synthesize_corpus({pairs, seed})) {
          py::dict d;
          d["pair_id"] = p.pair_id;
          d["buggy"] = p.buggy_source;
          d["repaired"] = p.repaired_source;
          d["assignment_id"] = p.assignment_id.value_or("");
          out.append(d);
        }
        return out;
      },
      py::arg("pairs") = 2000, py::arg("seed") = 7);
  m.def(
      "build_dataset",
      [](const std::string& corpus, std::optional<std::string> fixtures, bool fixture_only, std::size_t min_class_size) {
        const Compiler compiler(make_config(fixtures, fixture_only));
        const auto load = load_corpus(corpus);
        Dataset ds;
        {
          py::gil_scoped_release release;
          ds = build_dataset(load.pairs, compiler, min_class_size);
        }
        return dataset_dict(ds);
      },
      py::arg("corpus"), py::arg("fixtures") = py::none(), py::arg("fixture_only") = false,
      py::arg("min_class_size") = 10);

  py::class_<PyModel>(m, "Model")
      .def_static(
          "train",
          [](const std::string& corpus, std::optional<std::string> fixtures, bool fixture_only,
             std::size_t min_class_size, std::size_t epochs, std::size_t hidden, double dropout, std::uint64_t seed) {
            auto config = make_config(fixtures, fixture_only);
            NetworkConfig net;
            net.epochs = epochs;
            net.hidden_units = hidden;
            net.dropout_rate = dropout;
            net.seed = seed;
            const auto load = load_corpus(corpus);
            py::gil_scoped_release release;
            const Compiler compiler(config);
            auto dataset = build_dataset(load.pairs, compiler, min_class_size);
            auto training = train_model(dataset, net);
            return std::make_unique<PyModel>(std::move(training.model), std::move(config));
          },
          py::arg("corpus"), py::arg("fixtures") = py::none(), py::arg("fixture_only") = false,
          py::arg("min_class_size") = 10, py::arg("epochs") = 6, py::arg("hidden") = 512, py::arg("dropout") = 0.2,
          py::arg("seed") = 0)
      .def_static(
          "load",
          [](const std::string& path, std::optional<std::string> fixtures) {
            return std::make_unique<PyModel>(load_model(path), make_config(fixtures, false));
          },
          py::arg("path"), py::arg("fixtures") = py::none())
      .def("save", [](const PyModel& self, const std::string& path) { save_model(self.model(), path); })
      .def("to_bytes",
           [](const PyModel& self) {
             const auto bytes = serialize_model(self.model());
             return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
           })
      .def("suggest", &PyModel::suggest, py::arg("source"), py::arg("top_k") = 3, py::arg("examples") = 1)
      .def_property_readonly("version", [](const PyModel& self) { return self.model().version; })
      .def_property_readonly("class_count", [](const PyModel& self) { return self.model().class_count(); })
      .def_property_readonly("vocabulary_size", [](const PyModel& self) { return self.model().vocab.size(); })
      .def_property_readonly("classes", &PyModel::class_keys)
      .def_property_readonly("best_epoch", [](const PyModel& self) { return self.model().metrics.best_epoch; });
}
