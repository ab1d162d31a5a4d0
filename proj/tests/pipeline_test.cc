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

#include <gtest/gtest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "cmine/errors.h"
#include "cmine/text_util.h"
#include "test_support.h"

namespace cmine {
namespace {

using BucketTerms = std::set<std::pair<std::string, std::string>>;

const std::vector<ConceptRecord>& mini() {
  static const auto recs = load_knowledge_source(testing::data_path("mini_thesaurus.tsv"));
  return recs;
}

PipelineResources resources() {
  PipelineResources r;
  r.buckets = load_buckets(testing::data_path("semantic_buckets.tsv"));
  return r;
}

Pipeline mini_pipeline(PipelineConfig cfg = {}) {
  return Pipeline::build(mini(), cfg, resources());
}

std::set<std::string> terms(const AnnotationResult& r) {
  std::set<std::string> out;
  for (const auto& m : r.matches) out.insert(casefold(m.matched_term));
  return out;
}

BucketTerms bucket_terms(const AnnotationResult& r) {
  BucketTerms out;
  for (const auto& [bucket, list] : r.by_bucket) {
    for (const auto& t : list) out.emplace(bucket, casefold(t));
  }
  return out;
}

std::vector<Document> golden_documents() {
  std::vector<Document> docs;
  std::istringstream in(testing::read_text(testing::data_path("samples/discharge_summaries.jsonl")));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    docs.push_back({j["id"].get<std::string>(), j["text"].get<std::string>()});
  }
  return docs;
}

TEST(Pipeline, BuildsFromMiniThesaurus) {
  const auto p = mini_pipeline();
  EXPECT_GT(p.automaton().node_count(), 0u);
  EXPECT_EQ(p.automaton().fingerprint(), config_fingerprint(PipelineConfig{}));
  EXPECT_FALSE(p.vocabulary().empty());
}

TEST(Pipeline, BuildPipelineFromPaths) {
  const auto p = build_pipeline(testing::data_path("mini_thesaurus.tsv"),
                                testing::data_path("semantic_buckets.tsv"), PipelineConfig{});
  const auto r = p.annotate("Heparin was started.");
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0].bucket, "Medicines");
  EXPECT_THROW(build_pipeline("/nonexistent.tsv", "", PipelineConfig{}), IoError);
}

TEST(Pipeline, LemmaUnsupported) {
  PipelineConfig cfg;
  cfg.stem_mode = StemMode::kLemma;
  EXPECT_THROW(mini_pipeline(cfg), UnsupportedError);
}

TEST(Pipeline, WhitelistRestrictsConcepts) {
  PipelineConfig cfg;
  cfg.semantic_whitelist = std::set<std::string>{"phsu"};
  const auto r = mini_pipeline(cfg).annotate("Ligament tear treated with heparin");
  EXPECT_EQ(terms(r), (std::set<std::string>{"heparin"}));
  for (const auto& m : r.matches) EXPECT_EQ(m.bucket, "Medicines");
}

TEST(Pipeline, EmptyWhitelistCannotBuild) {
  PipelineConfig cfg;
  cfg.semantic_whitelist = std::set<std::string>{};
  EXPECT_THROW(mini_pipeline(cfg), ConfigError);
}

TEST(Pipeline, SupersetExample) {
  const std::string doc = "patient is diagnosed with type 2 diabetes mellitus and hypertension";
  PipelineConfig all;
  EXPECT_EQ(terms(mini_pipeline(all).annotate(doc)),
            (std::set<std::string>{"diabetes", "diabetes mellitus", "type 2 diabetes mellitus",
                                   "hypertension"}));
  PipelineConfig sup;
  sup.superset_only = true;
  EXPECT_EQ(terms(mini_pipeline(sup).annotate(doc)),
            (std::set<std::string>{"type 2 diabetes mellitus", "hypertension"}));
}

TEST(Pipeline, StopwordsAndStemmingBridgeSurfaceVariants) {
  const auto r = mini_pipeline().annotate("MRI shows a tumour in the brain.");
  bool found = false;
  for (const auto& m : r.matches) {
    if (m.matched_term == "Brain Tumour") {
      found = true;
      EXPECT_EQ(m.surface, "tumour in the brain");
    }
  }
  EXPECT_TRUE(found);
}

TEST(Pipeline, NegationDropped) {
  PipelineConfig cfg;
  cfg.drop_negated = true;
  const auto r = mini_pipeline(cfg).annotate("Patient does not have diabetes");
  EXPECT_TRUE(r.matches.empty());
  EXPECT_EQ(r.by_bucket.count("Diagnosis"), 0u);

  const auto kept = mini_pipeline().annotate("Patient does not have diabetes");
  ASSERT_EQ(kept.matches.size(), 1u);
  EXPECT_TRUE(kept.matches[0].negated);
  EXPECT_TRUE(kept.by_bucket.empty());
}

TEST(Pipeline, NegationDisabled) {
  PipelineConfig cfg;
  cfg.detect_negation = false;
  const auto r = mini_pipeline(cfg).annotate("Patient does not have diabetes");
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_FALSE(r.matches[0].negated);
}

TEST(Pipeline, SpellCorrectionUsesDictionaryVocabulary) {
  PipelineConfig cfg;
  cfg.spell_correct = true;
  const auto r = mini_pipeline(cfg).annotate("given hepain for hypertenson");
  EXPECT_EQ(terms(r), (std::set<std::string>{"heparin", "hypertension"}));
  for (const auto& m : r.matches) {
    EXPECT_TRUE(m.surface == "hepain" || m.surface == "hypertenson") << m.surface;
  }
  EXPECT_TRUE(mini_pipeline().annotate("given hepain").matches.empty());
}

TEST(Pipeline, SpellCorrectionLeavesShortTokens) {
  PipelineConfig cfg;
  cfg.spell_correct = true;
  const auto p = mini_pipeline(cfg);
  const auto nt = p.preprocess("F u c o eeg");
  // Short tokens pass through; "f","u","c","o" are not stopwords here.
  EXPECT_EQ(std::count(nt.tokens.begin(), nt.tokens.end(), "f"), 1);
}

TEST(Pipeline, InvalidUtf8IsEncodingError) {
  EXPECT_THROW(mini_pipeline().annotate("fever \xFF"), EncodingError);
}

TEST(Pipeline, EmptyDocument) {
  const auto r = mini_pipeline().annotate("", "empty");
  EXPECT_EQ(r.document_id, "empty");
  EXPECT_TRUE(r.matches.empty());
  EXPECT_TRUE(r.by_bucket.empty());
}

TEST(Pipeline, ClusteringCanonicalizesIds) {
  PipelineConfig cfg;
  cfg.cluster.enabled = true;
  const auto recs = load_knowledge_source(testing::data_path("fixtures/cui_clustering.tsv"));
  const auto p = Pipeline::build(recs, cfg);
  const auto r = p.annotate("known DM, diabetes since 2010");
  ASSERT_EQ(r.matches.size(), 2u);
  for (const auto& m : r.matches) EXPECT_EQ(m.concept_id, "C0011847");
  EXPECT_EQ(p.masking_table().canonical("C3250443"), "C0011847");
}

TEST(Pipeline, GoldenDocumentsBuckets) {
  PipelineConfig cfg;
  cfg.superset_only = true;
  const auto p = mini_pipeline(cfg);
  const auto docs = golden_documents();
  ASSERT_EQ(docs.size(), 3u);

  const BucketTerms row1 = {{"Diagnosis", "ligament tear"},
                            {"Procedures", "total knee replacement"},
                            {"Procedures", "radiography"},
                            {"Procedures", "prophylactic treatment"},
                            {"Medicines", "heparin"}};
  const BucketTerms row2 = {{"Diagnosis", "seizure disorder"}, {"Diagnosis", "vomiting"},
                            {"Diagnosis", "throat discomfort"}, {"Procedures", "eeg"},
                            {"Procedures", "laryngoscopy"},    {"Medicines", "tegretol"}};
  const BucketTerms row3 = {{"Diagnosis", "afib"},           {"Diagnosis", "cardiac arrest"},
                            {"Diagnosis", "chest pain"},     {"Procedures", "hba1c test"},
                            {"Procedures", "chest ct"},      {"Procedures", "troponin"},
                            {"Procedures", "echocardiogram"}, {"Procedures", "serum creatinine test"},
                            {"Procedures", "cabg"}};
  auto restrict = [](const BucketTerms& got, std::set<std::string> buckets) {
    BucketTerms out;
    for (const auto& bt : got) {
      if (buckets.count(bt.first)) out.insert(bt);
    }
    return out;
  };
  EXPECT_EQ(restrict(bucket_terms(p.annotate(docs[0].text)),
                     {"Diagnosis", "Procedures", "Medicines"}),
            row1);
  EXPECT_EQ(restrict(bucket_terms(p.annotate(docs[1].text)),
                     {"Diagnosis", "Procedures", "Medicines"}),
            row2);
  EXPECT_EQ(restrict(bucket_terms(p.annotate(docs[2].text)), {"Diagnosis", "Procedures"}), row3);
}

TEST(Pipeline, BatchOrderAndErrorIsolation) {
  const auto p = mini_pipeline();
  auto docs = golden_documents();
  const auto items = p.annotate_batch(docs);
  ASSERT_EQ(items.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(items[i].document_id, docs[i].id);
    EXPECT_TRUE(items[i].ok());
  }
  EXPECT_TRUE(p.annotate_batch({}).empty());

  docs[1].text = "bad \xC3";
  const auto mixed = p.annotate_batch(docs, 2);
  ASSERT_EQ(mixed.size(), 3u);
  EXPECT_TRUE(mixed[0].ok());
  EXPECT_FALSE(mixed[1].ok());
  EXPECT_FALSE(mixed[1].error.empty());
  EXPECT_TRUE(mixed[2].ok());
  const auto j = nlohmann::json::parse(to_json_line(mixed[1]));
  EXPECT_EQ(j["document_id"], docs[1].id);
  EXPECT_TRUE(j.contains("error"));
}

TEST(Pipeline, ParallelBatchEqualsSequential) {
  const auto p = mini_pipeline();
  std::vector<Document> docs;
  const auto golden = golden_documents();
  for (int i = 0; i < 40; ++i) {
    auto d = golden[static_cast<std::size_t>(i) % golden.size()];
    d.id += "-" + std::to_string(i);
    docs.push_back(d);
  }
  const auto seq = p.annotate_batch(docs, 1);
  const auto par = p.annotate_batch(docs, 4);
  ASSERT_EQ(seq.size(), par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(to_json_line(seq[i], false), to_json_line(par[i], false));
  }
}

TEST(Pipeline, JsonFieldsAndOrder) {
  const auto r = mini_pipeline().annotate("Heparin given", "d1");
  const auto line = to_json_line(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto j = nlohmann::ordered_json::parse(line);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"document_id", "matches", "by_bucket", "timing_ms"}));
  std::vector<std::string> match_keys;
  for (const auto& [k, v] : j["matches"][0].items()) match_keys.push_back(k);
  EXPECT_EQ(match_keys, (std::vector<std::string>{"start", "end", "surface", "concept_id",
                                                  "matched_term", "semantic_types", "bucket",
                                                  "negated"}));
  EXPECT_EQ(j["matches"][0]["surface"], "Heparin");
  EXPECT_EQ(j["matches"][0]["start"], 0);
  EXPECT_EQ(j["matches"][0]["end"], 7);
}

TEST(SupersetFilter, Examples) {
  auto m = [](std::size_t b, std::size_t e, const std::string& id) {
    Match x;
    x.start_char = b;
    x.end_char = e;
    x.concept_id = id;
    return x;
  };
  const std::vector<Match> nested = {m(26, 34, "d"), m(26, 43, "dm"), m(19, 43, "t2dm"),
                                     m(48, 60, "htn")};
  const auto out = superset_filter(nested);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].concept_id, "t2dm");
  EXPECT_EQ(out[1].concept_id, "htn");

  EXPECT_EQ(superset_filter({m(0, 5, "a")}).size(), 1u);
  EXPECT_EQ(superset_filter({m(0, 5, "a"), m(6, 9, "b")}).size(), 2u);
  EXPECT_EQ(superset_filter({m(0, 5, "a"), m(0, 5, "b")}).size(), 2u);
  EXPECT_EQ(superset_filter({m(0, 5, "a"), m(3, 9, "b")}).size(), 2u);  // overlap only
}

TEST(SupersetFilter, PropertiesAgainstBruteForce) {
  std::mt19937 rng(61);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<Match> ms;
    const auto n = testing::uniform(rng, 0, 12);
    for (std::size_t i = 0; i < n; ++i) {
      Match x;
      x.start_char = testing::uniform(rng, 0, 15);
      x.end_char = x.start_char + testing::uniform(rng, 1, 6);
      x.concept_id = "C" + std::to_string(i);
      ms.push_back(x);
    }
    std::vector<Match> want;
    for (const auto& a : ms) {
      const bool inside = std::any_of(ms.begin(), ms.end(), [&](const Match& b) {
        return b.start_char <= a.start_char && a.end_char <= b.end_char &&
               (b.start_char != a.start_char || b.end_char != a.end_char);
      });
      if (!inside) want.push_back(a);
    }
    const auto once = superset_filter(ms);
    ASSERT_EQ(once, want);
    ASSERT_EQ(superset_filter(once), once);
  }
}

std::string random_clinical_text(std::mt19937& rng, const std::vector<std::string>& words) {
  std::string text;
  const auto n = testing::uniform(rng, 0, 40);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& w = testing::pick(rng, words);
    switch (testing::uniform(rng, 0, 5)) {
      case 0: text += casefold(w); break;
      case 1: {
        std::string up = w;
        for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        text += up;
        break;
      }
      default: text += w;
    }
    text += testing::pick(rng, std::vector<std::string>{" ", " ", ", ", ". ", "  ", " - "});
  }
  return text;
}

std::vector<std::string> sample_words() {
  std::vector<std::string> words = {"no", "not", "denies", "without", "the", "of", "in",
                                    "patient", "was", "ruled", "out", "but", "with", "and"};
  for (std::size_t i = 0; i < mini().size(); i += 3) words.push_back(mini()[i].term);
  return words;
}

TEST(Pipeline, RandomDocumentProperties) {
  std::mt19937 rng(77);
  const auto words = sample_words();
  PipelineConfig base;
  PipelineConfig sup = base;
  sup.superset_only = true;
  PipelineConfig no_neg = base;
  no_neg.detect_negation = false;
  const auto p = mini_pipeline(base);
  const auto ps = mini_pipeline(sup);
  const auto pn = mini_pipeline(no_neg);

  std::ostringstream saved;
  p.automaton().save(saved);
  std::istringstream in(saved.str());
  const auto loaded = Pipeline::from_automaton(Automaton::load(in), base, resources());

  for (int iter = 0; iter < 200; ++iter) {
    const auto text = random_clinical_text(rng, words);
    const auto r = p.annotate(text, "d");
    for (const auto& m : r.matches) {
      ASSERT_LT(m.start_char, m.end_char);
      ASSERT_LE(m.end_char, text.size());
      ASSERT_EQ(m.surface, text.substr(m.start_char, m.end_char - m.start_char));
      ASSERT_FALSE(m.semantic_types.empty());
    }
    ASSERT_EQ(r.by_bucket, group_by_bucket(r.matches));

    // Phase parity with the reloaded index.
    ASSERT_EQ(to_json_line(loaded.annotate(text, "d"), false), to_json_line(r, false));

    // Superset-only output is a subset of the full output.
    const auto rs = ps.annotate(text, "d");
    for (const auto& m : rs.matches) {
      ASSERT_NE(std::find(r.matches.begin(), r.matches.end(), m), r.matches.end());
    }

    // Negation only touches the flag.
    const auto rn = pn.annotate(text, "d");
    ASSERT_EQ(rn.matches.size(), r.matches.size());
    for (std::size_t i = 0; i < r.matches.size(); ++i) {
      auto a = r.matches[i];
      a.negated = false;
      ASSERT_EQ(a, rn.matches[i]);
    }
  }
}

TEST(Pipeline, LoadedIndexRejectsOtherConfig) {
  const auto p = mini_pipeline();
  std::ostringstream saved;
  p.automaton().save(saved);
  std::istringstream in(saved.str());
  PipelineConfig other;
  other.remove_stopwords = false;
  EXPECT_THROW(Pipeline::from_automaton(Automaton::load(in), other), ConfigMismatchError);
}

}  // namespace
}  // namespace cmine
