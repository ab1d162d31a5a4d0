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

#include "cmine/pipeline.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "cmine/errors.h"
#include "cmine/text_util.h"

namespace cmine {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

bool has_digit(std::string_view token) {
  return std::any_of(token.begin(), token.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

// Types that pass the whitelist; all of them when there is none.
std::set<std::string> allowed_types(const std::set<std::string>& types,
                                    const SemanticWhitelist& whitelist) {
  if (!whitelist) return types;
  std::set<std::string> out;
  for (const auto& t : types) {
    if (whitelist->count(t)) out.insert(t);
  }
  return out;
}

}  // namespace

Pipeline Pipeline::build(std::span<const ConceptRecord> records,
                         const PipelineConfig& config, PipelineResources resources) {
  config.validate();
  const auto t0 = Clock::now();

  Pipeline p;
  p.config_ = config;
  auto kept = filter_by_semantic_type(records, config.semantic_whitelist);
  p.stats_.records = kept.size();

  if (config.cluster.enabled) {
    p.masking_table_ = build_masking_table(kept, config.cluster, resources.stoplist);
    kept = apply_mask(kept, p.masking_table_);
  }

  std::unordered_map<std::string, std::string> preferred;
  for (const auto& r : kept) preferred.emplace(r.concept_id, r.term);

  std::vector<PatternEntry> patterns;
  patterns.reserve(kept.size());
  for (const auto& r : kept) {
    auto nt = normalize(r.term, config, resources.stoplist);
    if (nt.tokens.empty()) {
      ++p.stats_.skipped_terms;
      continue;
    }
    patterns.push_back({std::move(nt.tokens),
                        Payload{r.concept_id, r.term, preferred.at(r.concept_id),
                                {r.semantic_type}}});
  }
  if (patterns.empty()) {
    throw ConfigError("no dictionary term survives filtering and normalization");
  }

  p.fingerprint_ = config_fingerprint(config, resources.stoplist);
  auto automaton = Automaton::build(patterns, p.fingerprint_);
  auto vocab = VocabularyModel::from_records(kept);
  automaton.set_token_counts(vocab.counts());

  p.stats_.patterns = automaton.pattern_count();
  p.automaton_ = std::make_shared<const Automaton>(std::move(automaton));
  p.vocabulary_ = std::make_shared<const VocabularyModel>(std::move(vocab));
  p.resources_ = std::make_shared<const PipelineResources>(std::move(resources));
  p.stats_.build_ms = elapsed_ms(t0);
  return p;
}

Pipeline Pipeline::from_automaton(Automaton automaton, const PipelineConfig& config,
                                  PipelineResources resources) {
  config.validate();
  Pipeline p;
  p.config_ = config;
  p.fingerprint_ = config_fingerprint(config, resources.stoplist);
  if (p.fingerprint_ != automaton.fingerprint()) {
    throw ConfigMismatchError(
        "index was built with a different normalization configuration (index " +
        to_hex(automaton.fingerprint()) + ", current " + to_hex(p.fingerprint_) + ")");
  }
  p.stats_.patterns = automaton.pattern_count();
  p.vocabulary_ = std::make_shared<const VocabularyModel>(automaton.token_counts());
  p.automaton_ = std::make_shared<const Automaton>(std::move(automaton));
  p.resources_ = std::make_shared<const PipelineResources>(std::move(resources));
  return p;
}

NormalizedText Pipeline::preprocess(std::string_view document) const {
  auto nt = tokenize(document);
  const auto& stoplist = resources_->stoplist;
  if (config_.spell_correct && !vocabulary_->empty()) {
    for (auto& tok : nt.tokens) {
      if (tok.size() < kMinCorrectableLength || stoplist.contains(tok) ||
          has_digit(tok) || vocabulary_->contains(tok)) {
        continue;
      }
      tok = correct(tok, *vocabulary_);
    }
  }
  if (config_.remove_stopwords) nt = apply_stopwords(std::move(nt), stoplist);
  return apply_stem(std::move(nt), config_.stem_mode);
}

AnnotationResult Pipeline::annotate(std::string_view document,
                                    std::string document_id) const {
  const auto t0 = Clock::now();
  if (!is_valid_utf8(document)) {
    throw EncodingError("document is not valid UTF-8");
  }
  const auto nt = preprocess(document);
  const auto raw = automaton_->search(nt, fingerprint_);

  AnnotationResult result;
  result.document_id = std::move(document_id);
  const auto& buckets = resources_->buckets;
  for (const auto& rm : raw) {
    const std::size_t begin = nt.spans[rm.start_token].begin;
    const std::size_t end = nt.spans[rm.end_token - 1].end;
    for (const auto& payload : rm.payloads) {
      auto types = allowed_types(payload.semantic_types, config_.semantic_whitelist);
      if (types.empty()) continue;
      Match m;
      m.start_char = begin;
      m.end_char = end;
      m.surface = std::string(document.substr(begin, end - begin));
      m.concept_id = payload.concept_id;
      m.matched_term = payload.preferred_term;
      m.fired_term = payload.original_term;
      m.bucket = buckets.bucket_of(types);
      m.semantic_types = std::move(types);
      result.matches.push_back(std::move(m));
    }
  }
  std::sort(result.matches.begin(), result.matches.end(),
            [](const Match& a, const Match& b) {
              return std::tie(a.start_char, a.end_char, a.concept_id) <
                     std::tie(b.start_char, b.end_char, b.concept_id);
            });

  if (config_.superset_only) result.matches = superset_filter(std::move(result.matches));
  if (config_.detect_negation) {
    result.matches = flag_negated(std::move(result.matches), tokenize(document),
                                  resources_->triggers, config_.negation_window);
  }
  if (config_.drop_negated) {
    std::erase_if(result.matches, [](const Match& m) { return m.negated; });
  }
  result.by_bucket = group_by_bucket(result.matches);
  result.timing_ms = elapsed_ms(t0);
  return result;
}

std::vector<BatchItem> Pipeline::annotate_batch(std::span<const Document> documents,
                                                std::size_t jobs) const {
  std::vector<BatchItem> items(documents.size());
  auto run_one = [&](std::size_t i) {
    items[i].document_id = documents[i].id;
    try {
      items[i].result = annotate(documents[i].text, documents[i].id);
    } catch (const std::exception& e) {
      items[i].error = e.what();
    }
  };

  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(documents.size(), 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < documents.size(); ++i) run_one(i);
    return items;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < documents.size(); i = next++) run_one(i);
    });
  }
  for (auto& t : workers) t.join();
  return items;
}

Pipeline build_pipeline(const std::string& kb_path, const std::string& buckets_path,
                        const PipelineConfig& config) {
  config.validate();
  const auto records = load_knowledge_source(kb_path, config.semantic_whitelist);
  PipelineResources resources;
  if (!buckets_path.empty()) resources.buckets = load_buckets(buckets_path);
  return Pipeline::build(records, config, std::move(resources));
}

std::vector<Match> superset_filter(std::vector<Match> matches) {
  // Spans ordered by start ascending, end descending: a span is contained in
  // a strictly larger one iff some earlier span reaches at least as far.
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  spans.reserve(matches.size());
  for (const auto& m : matches) spans.emplace_back(m.start_char, m.end_char);
  std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());

  std::set<std::pair<std::size_t, std::size_t>> contained;
  std::size_t reach = 0;
  bool any = false;
  for (const auto& s : spans) {
    if (any && s.second <= reach) contained.insert(s);
    if (!any || s.second > reach) reach = s.second;
    any = true;
  }
  std::erase_if(matches, [&](const Match& m) {
    return contained.count({m.start_char, m.end_char}) > 0;
  });
  return matches;
}

std::map<std::string, std::vector<std::string>> group_by_bucket(
    std::span<const Match> matches) {
  std::map<std::string, std::vector<std::string>> out;
  std::map<std::string, std::unordered_set<std::string>> seen;
  for (const auto& m : matches) {
    if (m.negated) continue;
    if (seen[m.bucket].insert(casefold(m.matched_term)).second) {
      out[m.bucket].push_back(m.matched_term);
    }
  }
  return out;
}

namespace {

nlohmann::ordered_json match_json(const Match& m) {
  nlohmann::ordered_json j;
  j["start"] = m.start_char;
  j["end"] = m.end_char;
  j["surface"] = m.surface;
  j["concept_id"] = m.concept_id;
  j["matched_term"] = m.matched_term;
  j["semantic_types"] = m.semantic_types;
  j["bucket"] = m.bucket;
  j["negated"] = m.negated;
  return j;
}

}  // namespace

std::string to_json_line(const AnnotationResult& result, bool include_timing) {
  nlohmann::ordered_json j;
  j["document_id"] = result.document_id;
  j["matches"] = nlohmann::ordered_json::array();
  for (const auto& m : result.matches) j["matches"].push_back(match_json(m));
  j["by_bucket"] = nlohmann::ordered_json::object();
  for (const auto& [bucket, terms] : result.by_bucket) j["by_bucket"][bucket] = terms;
  j["timing_ms"] = include_timing ? result.timing_ms : 0.0;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string error_json_line(const std::string& document_id, const std::string& message) {
  nlohmann::ordered_json j;
  j["document_id"] = document_id;
  j["error"] = message;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string to_json_line(const BatchItem& item, bool include_timing) {
  return item.ok() ? to_json_line(*item.result, include_timing)
                   : error_json_line(item.document_id, item.error);
}

}  // namespace cmine
