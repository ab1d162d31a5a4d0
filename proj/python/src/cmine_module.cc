// Copyright 2026 The cmine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Annotation results cross the boundary as JSON lines and
// are decoded by the cmine package.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "cmine/concept_cluster.h"
#include "cmine/errors.h"
#include "cmine/normalize.h"
#include "cmine/pipeline.h"
#include "cmine/porter_stemmer.h"
#include "cmine/spell.h"

namespace py = pybind11;

namespace {

using cmine::ConceptRecord;

py::tuple record_tuple(const ConceptRecord& r) {
  return py::make_tuple(r.concept_id, r.term, r.semantic_type, r.source_vocabulary);
}

std::vector<ConceptRecord> records_from(const std::vector<std::vector<std::string>>& rows) {
  std::vector<ConceptRecord> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() < 3 || row.size() > 4) {
      throw py::value_error("records are (concept_id, term, semantic_type[, source])");
    }
    ConceptRecord r{row[0], row[1], row[2]};
    if (row.size() == 4) r.source_vocabulary = row[3];
    out.push_back(std::move(r));
  }
  return out;
}

cmine::PipelineResources resources(const std::string& buckets, const std::string& stopwords,
                                   const std::string& triggers) {
  cmine::PipelineResources res;
  if (!buckets.empty()) res.buckets = cmine::load_buckets(buckets);
  if (!stopwords.empty()) res.stoplist = cmine::Stoplist::load(stopwords);
  if (!triggers.empty()) res.triggers = cmine::TriggerSet::load(triggers);
  return res;
}

}  // namespace

PYBIND11_MODULE(_cmine, m) {
  m.doc() = "Dictionary-based clinical concept mining";

  auto base = py::register_exception<cmine::Error>(m, "CmineError");
  py::register_exception<cmine::IoError>(m, "IoError", base);
  py::register_exception<cmine::ParseError>(m, "ParseError", base);
  auto config_error = py::register_exception<cmine::ConfigError>(m, "ConfigError", base);
  py::register_exception<cmine::UnsupportedError>(m, "UnsupportedError", config_error);
  py::register_exception<cmine::ConfigMismatchError>(m, "ConfigMismatchError", config_error);
  py::register_exception<cmine::IndexFormatError>(m, "IndexFormatError", base);
  py::register_exception<cmine::EncodingError>(m, "EncodingError", base);

  py::class_<cmine::ClusterConfig>(m, "ClusterConfig")
      .def(py::init<>())
      .def_readwrite("enabled", &cmine::ClusterConfig::enabled)
      .def_readwrite("use_stemming", &cmine::ClusterConfig::use_stemming)
      .def_readwrite("remove_stopwords", &cmine::ClusterConfig::remove_stopwords)
      .def_readwrite("respect_word_order", &cmine::ClusterConfig::respect_word_order)
      .def_readwrite("edit_threshold", &cmine::ClusterConfig::edit_threshold)
      .def_readwrite("exhaustive", &cmine::ClusterConfig::exhaustive)
      .def("validate", &cmine::ClusterConfig::validate);

  py::class_<cmine::PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("remove_stopwords", &cmine::PipelineConfig::remove_stopwords)
      .def_property(
          "stem_mode",
          [](const cmine::PipelineConfig& c) { return std::string(cmine::to_string(c.stem_mode)); },
          [](cmine::PipelineConfig& c, const std::string& s) {
            c.stem_mode = cmine::parse_stem_mode(s);
          })
      .def_readwrite("spell_correct", &cmine::PipelineConfig::spell_correct)
      .def_readwrite("superset_only", &cmine::PipelineConfig::superset_only)
      .def_readwrite("detect_negation", &cmine::PipelineConfig::detect_negation)
      .def_readwrite("semantic_whitelist", &cmine::PipelineConfig::semantic_whitelist)
      .def_readwrite("cluster", &cmine::PipelineConfig::cluster)
      .def_readwrite("negation_window", &cmine::PipelineConfig::negation_window)
      .def_readwrite("drop_negated", &cmine::PipelineConfig::drop_negated)
      .def("validate", &cmine::PipelineConfig::validate)
      .def("fingerprint", [](const cmine::PipelineConfig& c) {
        return cmine::to_hex(cmine::config_fingerprint(c));
      });

  m.def(
      "tokenize",
      [](std::string_view text) {
        const auto nt = cmine::tokenize(text);
        std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < nt.size(); ++i) {
          out.emplace_back(nt.tokens[i], nt.spans[i].begin, nt.spans[i].end);
        }
        return out;
      },
      py::arg("text"), "(token, start, end) triples with UTF-8 byte offsets.");
  m.def(
      "normalize",
      [](std::string_view text, const cmine::PipelineConfig& config) {
        return cmine::normalize(text, config).tokens;
      },
      py::arg("text"), py::arg("config") = cmine::PipelineConfig{});
  m.def("porter_stem", &cmine::porter_stem, py::arg("word"));
  m.def(
      "term_similarity",
      [](std::string_view a, std::string_view b, const cmine::ClusterConfig& config) {
        return cmine::term_similarity(a, b, config);
      },
      py::arg("a"), py::arg("b"), py::arg("config") = cmine::ClusterConfig{});

  m.def(
      "load_knowledge_source",
      [](const std::string& path, std::optional<std::set<std::string>> semantic_types) {
        py::list out;
        for (const auto& r : cmine::load_knowledge_source(path, semantic_types)) {
          out.append(record_tuple(r));
        }
        return out;
      },
      py::arg("path"), py::arg("semantic_types") = py::none());
  m.def(
      "build_masking_table",
      [](const std::vector<std::vector<std::string>>& rows, cmine::ClusterConfig config) {
        config.enabled = true;
        const auto records = records_from(rows);
        return cmine::build_masking_table(records, config).entries();
      },
      py::arg("records"), py::arg("config") = cmine::ClusterConfig{},
      "Concept id -> canonical concept id.");

  py::class_<cmine::VocabularyModel>(m, "VocabularyModel")
      .def(py::init<const std::map<std::string, std::uint64_t>&>(), py::arg("counts"))
      .def("__contains__", &cmine::VocabularyModel::contains)
      .def("__len__", &cmine::VocabularyModel::size)
      .def("freq", &cmine::VocabularyModel::freq)
      .def("counts", &cmine::VocabularyModel::counts);
  m.def("correct", &cmine::correct, py::arg("word"), py::arg("model"), py::arg("max_edit") = 2);
  m.def(
      "candidates",
      [](std::string_view w, const cmine::VocabularyModel& model, int max_edit) {
        std::vector<std::pair<std::string, std::size_t>> out;
        for (const auto& c : cmine::candidates(w, model, max_edit)) {
          out.emplace_back(c.token, c.distance);
        }
        return out;
      },
      py::arg("word"), py::arg("model"), py::arg("max_edit") = 2);

  py::class_<cmine::Pipeline>(m, "Pipeline")
      .def_static(
          "build",
          [](const std::string& kb, const cmine::PipelineConfig& config,
             const std::string& buckets, const std::string& stopwords,
             const std::string& triggers) {
            const auto records = cmine::load_knowledge_source(kb, config.semantic_whitelist);
            return cmine::Pipeline::build(records, config,
                                          resources(buckets, stopwords, triggers));
          },
          py::arg("kb"), py::arg("config") = cmine::PipelineConfig{}, py::arg("buckets") = "",
          py::arg("stopwords") = "", py::arg("triggers") = "")
      .def_static(
          "from_records",
          [](const std::vector<std::vector<std::string>>& rows,
             const cmine::PipelineConfig& config, const std::string& buckets) {
            return cmine::Pipeline::build(records_from(rows), config, resources(buckets, "", ""));
          },
          py::arg("records"), py::arg("config") = cmine::PipelineConfig{},
          py::arg("buckets") = "")
      .def_static(
          "load",
          [](const std::string& index, const cmine::PipelineConfig& config,
             const std::string& buckets, const std::string& stopwords,
             const std::string& triggers) {
            return cmine::Pipeline::from_automaton(cmine::Automaton::load(index), config,
                                                   resources(buckets, stopwords, triggers));
          },
          py::arg("index"), py::arg("config") = cmine::PipelineConfig{},
          py::arg("buckets") = "", py::arg("stopwords") = "", py::arg("triggers") = "")
      .def("save", [](const cmine::Pipeline& p, const std::string& path) {
        p.automaton().save(path);
      })
      .def(
          "annotate_json",
          [](const cmine::Pipeline& p, std::string_view text, std::string id, bool timing) {
            cmine::AnnotationResult r;
            {
              py::gil_scoped_release release;
              r = p.annotate(text, std::move(id));
            }
            return cmine::to_json_line(r, timing);
          },
          py::arg("text"), py::arg("document_id") = "", py::arg("include_timing") = true)
      .def(
          "annotate_batch_json",
          [](const cmine::Pipeline& p,
             const std::vector<std::pair<std::string, std::string>>& docs, std::size_t jobs,
             bool timing) {
            std::vector<cmine::Document> in;
            in.reserve(docs.size());
            for (const auto& [id, text] : docs) in.push_back({id, text});
            std::vector<cmine::BatchItem> items;
            {
              py::gil_scoped_release release;
              items = p.annotate_batch(in, jobs);
            }
            std::vector<std::string> out;
            out.reserve(items.size());
            for (const auto& item : items) out.push_back(cmine::to_json_line(item, timing));
            return out;
          },
          py::arg("documents"), py::arg("jobs") = 1, py::arg("include_timing") = true)
      .def_property_readonly("fingerprint",
                             [](const cmine::Pipeline& p) { return cmine::to_hex(p.fingerprint()); })
      .def_property_readonly("node_count",
                             [](const cmine::Pipeline& p) { return p.automaton().node_count(); })
      .def_property_readonly("pattern_count", [](const cmine::Pipeline& p) {
        return p.automaton().pattern_count();
      });
}
