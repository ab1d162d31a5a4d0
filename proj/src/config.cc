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

#include "cmine/config.h"

#include <fstream>

#include "cmine/errors.h"
#include "cmine/text_util.h"

namespace cmine {

std::string_view to_string(StemMode mode) {
  switch (mode) {
    case StemMode::kNone: return "none";
    case StemMode::kStem: return "stem";
    case StemMode::kLemma: return "lemma";
  }
  return "none";
}

StemMode parse_stem_mode(std::string_view s) {
  if (s == "none") return StemMode::kNone;
  if (s == "stem") return StemMode::kStem;
  if (s == "lemma") return StemMode::kLemma;
  throw ConfigError("unknown stem mode '" + std::string(s) +
                    "' (expected none, stem or lemma)");
}

void ClusterConfig::validate() const {
  if (!(edit_threshold >= 0.0 && edit_threshold <= 1.0)) {
    throw ConfigError("cluster edit threshold must be within [0, 1], got " +
                      std::to_string(edit_threshold));
  }
}

void PipelineConfig::validate() const {
  if (stem_mode == StemMode::kLemma) {
    throw UnsupportedError(
        "stem mode 'lemma' is not supported: no lemmatization dictionary is "
        "available; use 'stem' or 'none'");
  }
  if (negation_window < 1) throw ConfigError("negation window must be >= 1");
  cluster.validate();
}

namespace {

bool parse_bool(std::string_view v, const std::string& source, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError(source, line, "expected a boolean, got '" + std::string(v) + "'");
}

}  // namespace

void apply_config_text(std::istream& in, const std::string& source_name,
                       PipelineConfig& config) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source_name, line_no, "expected key=value");
    }
    const auto key = trim(t.substr(0, eq));
    const auto value = trim(t.substr(eq + 1));
    if (key == "remove_stopwords") {
      config.remove_stopwords = parse_bool(value, source_name, line_no);
    } else if (key == "stem_mode") {
      try {
        config.stem_mode = parse_stem_mode(value);
      } catch (const ConfigError& e) {
        throw ParseError(source_name, line_no, e.what());
      }
    } else if (key == "spell_correct") {
      config.spell_correct = parse_bool(value, source_name, line_no);
    } else if (key == "superset_only") {
      config.superset_only = parse_bool(value, source_name, line_no);
    } else if (key == "detect_negation") {
      config.detect_negation = parse_bool(value, source_name, line_no);
    } else if (key == "semantic_types") {
      // An empty value is an empty whitelist, which admits nothing.
      config.semantic_whitelist = parse_semantic_type_list(value);
    } else {
      throw ParseError(source_name, line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  config.validate();
}

void apply_config_file(const std::string& path, PipelineConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  apply_config_text(in, path, config);
}

}  // namespace cmine
