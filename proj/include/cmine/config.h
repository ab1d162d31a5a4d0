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

#ifndef CMINE_CONFIG_H_
#define CMINE_CONFIG_H_

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>

#include "cmine/knowledge_source.h"

namespace cmine {

enum class StemMode { kNone, kStem, kLemma };

std::string_view to_string(StemMode mode);
// Accepts "none", "stem", "lemma". Throws ConfigError otherwise. Parsing
// "lemma" succeeds; PipelineConfig::validate() rejects it.
StemMode parse_stem_mode(std::string_view s);

// Controls concept-id clustering.
struct ClusterConfig {
  bool enabled = false;
  bool use_stemming = false;
  bool remove_stopwords = false;
  bool respect_word_order = true;
  // 1.0 merges only terms that are identical after normalization.
  double edit_threshold = 1.0;
  // Compare every pair of distinct terms instead of only pairs that share a
  // normalized token. Quadratic; meant for small dictionaries.
  bool exhaustive = false;

  // Throws ConfigError when edit_threshold is outside [0, 1].
  void validate() const;
};

struct PipelineConfig {
  bool remove_stopwords = true;
  StemMode stem_mode = StemMode::kStem;
  bool spell_correct = false;
  bool superset_only = false;
  bool detect_negation = true;
  SemanticWhitelist semantic_whitelist;
  ClusterConfig cluster;

  std::size_t negation_window = 5;
  bool drop_negated = false;

  // Throws UnsupportedError for stem_mode=lemma, ConfigError for other
  // out-of-range values.
  void validate() const;
};

// Reads flat key=value lines ('#' comments) into `config`, overriding only
// the keys present. Known keys: remove_stopwords, stem_mode, spell_correct,
// superset_only, detect_negation, semantic_types. Unknown keys and bad
// values throw ParseError; the result is validated.
void apply_config_text(std::istream& in, const std::string& source_name,
                       PipelineConfig& config);
void apply_config_file(const std::string& path, PipelineConfig& config);

}  // namespace cmine

#endif  // CMINE_CONFIG_H_
