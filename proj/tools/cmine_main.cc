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

// cmine: index, annotate, cluster and stats subcommands.
//
// Exit codes: 0 success, 1 configuration error, 2 I/O or data error.
// stdout carries machine-readable output only.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmine/automaton.h"
#include "cmine/concept_cluster.h"
#include "cmine/config.h"
#include "cmine/errors.h"
#include "cmine/knowledge_source.h"
#include "cmine/negation.h"
#include "cmine/normalize.h"
#include "cmine/pipeline.h"
#include "cmine/text_util.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

// Raw flag values; merged over defaults and --config in resolve_config().
struct Flags {
  std::string kb;
  std::string buckets;
  std::string index;
  std::string output;
  std::string masked_kb;
  std::string semantic_types;
  std::string stopwords;
  std::string stem;
  std::string triggers;
  std::string config_file;
  bool no_stopwords = false;
  bool spell_correct = false;
  bool superset_only = false;
  bool no_negation = false;
  bool drop_negated = false;
  std::size_t negation_window = 5;
  bool cluster = false;
  double cluster_threshold = 1.0;
  bool cluster_exhaustive = false;
  bool cluster_stemming = false;
  bool cluster_stopwords = false;
  bool cluster_ignore_order = false;
  bool jsonl = false;
  std::size_t jobs = 1;
  bool time = false;
  std::vector<std::string> inputs;

  // Options that may override --config; see given().
  std::vector<CLI::Option*> tracked;
};

void track(CLI::Option* opt, Flags& f) { f.tracked.push_back(opt); }

void add_normalization_flags(CLI::App& cmd, Flags& f) {
  track(cmd.add_option("--stopwords", f.stopwords, "Stoplist file (one token per line)"), f);
  track(cmd.add_option("--stem", f.stem, "Stemming mode")
            ->check(CLI::IsMember({"none", "stem", "lemma"})), f);
  track(cmd.add_flag("--no-stopwords", f.no_stopwords, "Keep stopwords"), f);
  track(cmd.add_option("--config", f.config_file, "key=value config file"), f);
}

void add_pipeline_flags(CLI::App& cmd, Flags& f) {
  add_normalization_flags(cmd, f);
  track(cmd.add_option("--buckets", f.buckets, "Semantic type to bucket TSV"), f);
  track(cmd.add_option("--semantic-types", f.semantic_types,
                       "Comma-separated semantic type whitelist"), f);
  track(cmd.add_flag("--spell-correct", f.spell_correct, "Correct misspelled tokens"), f);
  track(cmd.add_flag("--superset-only,!--all-matches", f.superset_only,
                     "Drop matches contained in a longer match"), f);
  track(cmd.add_flag("--no-negation", f.no_negation, "Disable negation detection"), f);
  track(cmd.add_flag("--drop-negated", f.drop_negated, "Omit negated matches"), f);
  track(cmd.add_option("--triggers", f.triggers, "Negation trigger file"), f);
  track(cmd.add_option("--negation-window", f.negation_window,
                       "Negation scope in tokens")->check(CLI::PositiveNumber), f);
}

void add_cluster_flags(CLI::App& cmd, Flags& f, bool with_enable) {
  if (with_enable) {
    track(cmd.add_flag("--cluster", f.cluster, "Merge concept ids with shared terms"), f);
  }
  track(cmd.add_option("--cluster-threshold", f.cluster_threshold,
                       "Minimum term similarity for merging, in [0, 1]"), f);
  track(cmd.add_flag("--cluster-exhaustive", f.cluster_exhaustive,
                     "Compare all term pairs instead of token-sharing pairs"), f);
  track(cmd.add_flag("--cluster-stemming", f.cluster_stemming,
                     "Stem terms before comparing"), f);
  track(cmd.add_flag("--cluster-stopwords", f.cluster_stopwords,
                     "Drop stopwords before comparing"), f);
  track(cmd.add_flag("--cluster-ignore-order", f.cluster_ignore_order,
                     "Sort tokens before comparing"), f);
}

// True when the option was present on the command line of any subcommand.
bool given(const Flags& f, const std::string& name) {
  for (const auto* opt : f.tracked) {
    if (opt->count() > 0 && opt->check_name(name)) return true;
  }
  return false;
}

cmine::PipelineConfig resolve_config(const Flags& f) {
  cmine::PipelineConfig config;
  if (given(f, "--config")) {
    try {
      cmine::apply_config_file(f.config_file, config);
    } catch (const cmine::ParseError& e) {
      throw cmine::ConfigError(e.what());
    }
  }
  if (given(f, "--no-stopwords")) config.remove_stopwords = false;
  if (given(f, "--stem")) config.stem_mode = cmine::parse_stem_mode(f.stem);
  if (given(f, "--spell-correct")) config.spell_correct = true;
  if (given(f, "--superset-only")) config.superset_only = f.superset_only;
  if (given(f, "--no-negation")) config.detect_negation = false;
  if (given(f, "--drop-negated")) config.drop_negated = true;
  if (given(f, "--negation-window")) config.negation_window = f.negation_window;
  if (given(f, "--semantic-types")) {
    config.semantic_whitelist = cmine::parse_semantic_type_list(f.semantic_types);
  }
  if (given(f, "--cluster")) config.cluster.enabled = true;
  if (given(f, "--cluster-threshold")) config.cluster.edit_threshold = f.cluster_threshold;
  if (given(f, "--cluster-exhaustive")) config.cluster.exhaustive = true;
  if (given(f, "--cluster-stemming")) config.cluster.use_stemming = true;
  if (given(f, "--cluster-stopwords")) config.cluster.remove_stopwords = true;
  if (given(f, "--cluster-ignore-order")) config.cluster.respect_word_order = false;
  config.validate();
  config.cluster.validate();
  return config;
}

cmine::PipelineResources resolve_resources(const Flags& f) {
  cmine::PipelineResources r;
  if (!f.buckets.empty()) r.buckets = cmine::load_buckets(f.buckets);
  if (!f.stopwords.empty()) r.stoplist = cmine::Stoplist::load(f.stopwords);
  if (!f.triggers.empty()) r.triggers = cmine::TriggerSet::load(f.triggers);
  return r;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cmine::IoError("cannot write " + path);
  return out;
}

std::string read_stream(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cmine::IoError("cannot open " + path);
  return read_stream(in);
}

int run_index(const Flags& f) {
  const auto config = resolve_config(f);
  auto resources = resolve_resources(f);
  const auto records = cmine::load_knowledge_source(f.kb, config.semantic_whitelist);
  const auto pipeline = cmine::Pipeline::build(records, config, std::move(resources));
  pipeline.automaton().save(f.output);
  const auto& s = pipeline.build_stats();
  std::cerr << "records: " << s.records << "\n"
            << "patterns: " << pipeline.automaton().pattern_count() << "\n"
            << "nodes: " << pipeline.automaton().node_count() << "\n"
            << "skipped terms: " << s.skipped_terms << "\n"
            << "build ms: " << s.build_ms << "\n";
  return kExitOk;
}

// A parsed input line or file; `error` set when it could not be read as a
// document.
struct InputSlot {
  cmine::Document doc;
  std::string error;
};

void read_jsonl(std::istream& in, const std::string& source, std::vector<InputSlot>& out) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    InputSlot slot;
    slot.doc.id = source + ":" + std::to_string(line_no);
    try {
      const auto j = nlohmann::json::parse(line);
      if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
        throw std::runtime_error("expected an object with a string \"text\" field");
      }
      if (j.contains("id")) {
        slot.doc.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
      }
      slot.doc.text = j["text"].get<std::string>();
    } catch (const std::exception& e) {
      slot.error = std::string("malformed input line: ") + e.what();
    }
    out.push_back(std::move(slot));
  }
}

std::vector<InputSlot> read_inputs(const Flags& f) {
  std::vector<InputSlot> slots;
  if (f.inputs.empty()) {
    if (f.jsonl) {
      read_jsonl(std::cin, "stdin", slots);
    } else {
      slots.push_back({{"stdin", read_stream(std::cin)}, ""});
    }
    return slots;
  }
  for (const auto& path : f.inputs) {
    if (f.jsonl) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw cmine::IoError("cannot open " + path);
      read_jsonl(in, path, slots);
    } else {
      slots.push_back({{path, read_file(path)}, ""});
    }
  }
  return slots;
}

int run_annotate(const Flags& f) {
  const auto config = resolve_config(f);
  auto resources = resolve_resources(f);
  std::optional<cmine::Pipeline> pipeline;
  if (!f.index.empty()) {
    pipeline = cmine::Pipeline::from_automaton(cmine::Automaton::load(f.index), config,
                                               std::move(resources));
  } else {
    const auto records = cmine::load_knowledge_source(f.kb, config.semantic_whitelist);
    pipeline = cmine::Pipeline::build(records, config, std::move(resources));
  }

  const auto slots = read_inputs(f);
  std::vector<cmine::Document> docs;
  for (const auto& s : slots) {
    if (s.error.empty()) docs.push_back(s.doc);
  }

  const auto t0 = std::chrono::steady_clock::now();
  const auto items = pipeline->annotate_batch(docs, f.jobs);
  const double total_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0).count();

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!f.output.empty()) {
    file = open_output(f.output);
    out = &file;
  }
  std::size_t next = 0;
  std::size_t errors = 0;
  std::size_t matches = 0;
  for (const auto& s : slots) {
    if (!s.error.empty()) {
      ++errors;
      *out << cmine::error_json_line(s.doc.id, s.error) << '\n';
      continue;
    }
    const auto& item = items[next++];
    *out << cmine::to_json_line(item) << '\n';
    if (!item.ok()) {
      ++errors;
      std::cerr << item.document_id << ": " << item.error << "\n";
      continue;
    }
    matches += item.result->matches.size();
    if (f.time) {
      std::cerr << item.document_id << "\t" << item.result->timing_ms << " ms\t"
                << item.result->matches.size() << " matches\n";
    }
  }
  out->flush();
  if (!*out) throw cmine::IoError("failed writing output");
  std::cerr << "documents: " << slots.size() << ", errors: " << errors
            << ", matches: " << matches << ", total ms: " << total_ms << "\n";
  return kExitOk;
}

int run_cluster(const Flags& f) {
  auto config = resolve_config(f);
  config.cluster.enabled = true;
  config.cluster.validate();
  cmine::Stoplist stoplist = cmine::Stoplist::english();
  if (!f.stopwords.empty()) stoplist = cmine::Stoplist::load(f.stopwords);

  const auto records = cmine::load_knowledge_source(f.kb, config.semantic_whitelist);
  const auto table = cmine::build_masking_table(records, config.cluster, stoplist);
  if (f.output.empty() || f.output == "-") {
    cmine::write_masking_table(std::cout, table);
  } else {
    auto out = open_output(f.output);
    cmine::write_masking_table(out, table);
  }
  if (!f.masked_kb.empty()) {
    auto out = open_output(f.masked_kb);
    cmine::write_knowledge_source(out, cmine::apply_mask(records, table));
  }
  std::set<std::string> canon;
  for (const auto& [from, to] : table.entries()) canon.insert(to);
  std::cerr << "concept ids: " << table.size() << ", clusters: " << canon.size() << "\n";
  return kExitOk;
}

int run_stats(const Flags& f) {
  if (f.kb.empty() && f.index.empty()) {
    throw cmine::ConfigError("stats needs --kb or --index");
  }
  nlohmann::ordered_json j;
  if (!f.kb.empty()) {
    cmine::SemanticWhitelist whitelist;
    if (given(f, "--semantic-types")) {
      whitelist = cmine::parse_semantic_type_list(f.semantic_types);
    }
    const auto records = cmine::load_knowledge_source(f.kb, whitelist);
    std::set<std::string> ids;
    std::set<std::string> terms;
    std::map<std::string, std::size_t> types;
    for (const auto& r : records) {
      ids.insert(r.concept_id);
      terms.insert(cmine::casefold(r.term));
      ++types[r.semantic_type];
    }
    j["records"] = records.size();
    j["concepts"] = ids.size();
    j["distinct_terms"] = terms.size();
    j["semantic_types"] = types;
  }
  if (!f.index.empty()) {
    const auto a = cmine::Automaton::load(f.index);
    j["index"] = {{"path", f.index},
                  {"file_bytes", std::filesystem::file_size(f.index)},
                  {"node_count", a.node_count()},
                  {"pattern_count", a.pattern_count()},
                  {"payload_count", a.payload_count()},
                  {"fingerprint", cmine::to_hex(a.fingerprint())}};
  }
  std::cout << j.dump() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dictionary-based concept mining for clinical text"};
  app.require_subcommand(1);
  Flags f;

  auto* index = app.add_subcommand("index", "Compile a knowledge source into an index file");
  index->add_option("--kb", f.kb, "Knowledge source TSV")->required();
  index->add_option("-o,--output", f.output, "Index file to write")->required();
  add_pipeline_flags(*index, f);
  add_cluster_flags(*index, f, true);

  auto* annotate = app.add_subcommand("annotate", "Annotate documents as JSON lines");
  auto* kb_opt = annotate->add_option("--kb", f.kb, "Knowledge source TSV");
  auto* index_opt = annotate->add_option("--index", f.index, "Index file");
  kb_opt->excludes(index_opt);
  annotate->add_option("-o,--output", f.output, "Write JSON lines here instead of stdout");
  annotate->add_flag("--jsonl", f.jsonl, "Inputs hold one {\"id\",\"text\"} object per line");
  annotate->add_option("--jobs", f.jobs, "Parallel workers")->check(CLI::PositiveNumber);
  annotate->add_flag("--time", f.time, "Print per-document timing to stderr");
  annotate->add_option("inputs", f.inputs, "Input files (default: stdin)");
  add_pipeline_flags(*annotate, f);
  add_cluster_flags(*annotate, f, true);

  auto* cluster = app.add_subcommand("cluster", "Write the concept id masking table");
  cluster->add_option("--kb", f.kb, "Knowledge source TSV")->required();
  cluster->add_option("-o,--output", f.output, "Masking table TSV (default: stdout)");
  cluster->add_option("--masked-kb", f.masked_kb, "Also write the masked knowledge source");
  track(cluster->add_option("--semantic-types", f.semantic_types,
                            "Comma-separated semantic type whitelist"), f);
  track(cluster->add_option("--stopwords", f.stopwords, "Stoplist file"), f);
  track(cluster->add_option("--config", f.config_file, "key=value config file"), f);
  add_cluster_flags(*cluster, f, false);

  auto* stats = app.add_subcommand("stats", "Report knowledge source and index statistics");
  stats->add_option("--kb", f.kb, "Knowledge source TSV");
  stats->add_option("--index", f.index, "Index file");
  track(stats->add_option("--semantic-types", f.semantic_types,
                          "Comma-separated semantic type whitelist"), f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*index) return run_index(f);
    if (*annotate) {
      if (f.kb.empty() && f.index.empty()) {
        throw cmine::ConfigError("annotate needs --kb or --index");
      }
      return run_annotate(f);
    }
    if (*cluster) return run_cluster(f);
    if (*stats) return run_stats(f);
  } catch (const cmine::ConfigError& e) {
    std::cerr << "cmine: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cmine::Error& e) {
    std::cerr << "cmine: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "cmine: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}
