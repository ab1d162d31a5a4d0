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

// End-to-end annotation: preprocessing, indexing and search, followed by
// superset filtering, negation flagging and semantic-type bucketing.
//
// Search-time order for one document:
//   tokenize -> spell-correct (optional) -> drop stopwords (optional) -> stem
//   -> automaton scan -> map token spans to byte offsets -> superset filter
//   (optional) -> negation flags (optional, on the unfiltered tokens) ->
//   buckets.
//
// A built Pipeline is immutable; annotate() may be called concurrently.

#ifndef CMINE_PIPELINE_H_
#define CMINE_PIPELINE_H_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmine/automaton.h"
#include "cmine/concept_cluster.h"
#include "cmine/config.h"
#include "cmine/knowledge_source.h"
#include "cmine/match.h"
#include "cmine/negation.h"
#include "cmine/normalize.h"
#include "cmine/spell.h"

namespace cmine {

struct AnnotationResult {
  std::string document_id;
  std::vector<Match> matches;
  // bucket -> distinct non-negated matched terms, first occurrence first.
  std::map<std::string, std::vector<std::string>> by_bucket;
  double timing_ms = 0.0;
};

struct Document {
  std::string id;
  std::string text;
};

// One slot of a batch: either a result or the error that document raised.
struct BatchItem {
  std::string document_id;
  std::optional<AnnotationResult> result;
  std::string error;

  bool ok() const { return result.has_value(); }
};

// Everything besides the dictionary that shapes annotation output.
struct PipelineResources {
  SemanticTypeBuckets buckets;
  Stoplist stoplist = Stoplist::english();
  TriggerSet triggers = TriggerSet::defaults();
};

struct BuildStats {
  std::size_t records = 0;
  std::size_t patterns = 0;
  // Terms that normalize to nothing (e.g. only stopwords) and cannot match.
  std::size_t skipped_terms = 0;
  double build_ms = 0.0;
};

class Pipeline {
 public:
  // Validates `config` (UnsupportedError for stem_mode=lemma), applies the
  // semantic whitelist, clusters concept ids when enabled, and compiles the
  // automaton. Throws ConfigError when no term survives.
  static Pipeline build(std::span<const ConceptRecord> records,
                        const PipelineConfig& config,
                        PipelineResources resources = {});

  // Wraps a loaded index. Throws ConfigMismatchError when the index was built
  // under a different normalization config.
  static Pipeline from_automaton(Automaton automaton, const PipelineConfig& config,
                                 PipelineResources resources = {});

  // Throws EncodingError for invalid UTF-8.
  AnnotationResult annotate(std::string_view document,
                            std::string document_id = "") const;

  // Results in input order. Per-document failures are reported in the item
  // instead of aborting. jobs > 1 annotates on that many threads.
  std::vector<BatchItem> annotate_batch(std::span<const Document> documents,
                                        std::size_t jobs = 1) const;

  // Normalized search-time view of a document, after optional spell
  // correction. Exposed for diagnostics.
  NormalizedText preprocess(std::string_view document) const;

  const Automaton& automaton() const { return *automaton_; }
  const PipelineConfig& config() const { return config_; }
  const PipelineResources& resources() const { return *resources_; }
  const Fingerprint& fingerprint() const { return fingerprint_; }
  const MaskingTable& masking_table() const { return masking_table_; }
  const VocabularyModel& vocabulary() const { return *vocabulary_; }
  const BuildStats& build_stats() const { return stats_; }

 private:
  Pipeline() = default;

  PipelineConfig config_;
  Fingerprint fingerprint_{};
  std::shared_ptr<const Automaton> automaton_;
  std::shared_ptr<const PipelineResources> resources_;
  std::shared_ptr<const VocabularyModel> vocabulary_;
  MaskingTable masking_table_;
  BuildStats stats_;
};

// Loads the knowledge source (and bucket file when `buckets_path` is
// non-empty) and builds a pipeline with the bundled stoplist and triggers.
Pipeline build_pipeline(const std::string& kb_path, const std::string& buckets_path,
                        const PipelineConfig& config);

// Drops every match whose span lies strictly inside another match's span.
// Matches with identical spans are all kept.
std::vector<Match> superset_filter(std::vector<Match> matches);

// by_bucket from matches: non-negated only, deduplicated on the casefolded
// matched term, in match order.
std::map<std::string, std::vector<std::string>> group_by_bucket(
    std::span<const Match> matches);

// One-line JSON encodings. Field order: document_id, matches, by_bucket,
// timing_ms. With include_timing=false, timing_ms is written as 0.
std::string to_json_line(const AnnotationResult& result, bool include_timing = true);
std::string error_json_line(const std::string& document_id, const std::string& message);
std::string to_json_line(const BatchItem& item, bool include_timing = true);

}  // namespace cmine

#endif  // CMINE_PIPELINE_H_
