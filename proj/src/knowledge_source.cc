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

#include "cmine/knowledge_source.h"

#include <fstream>
#include <unordered_set>

#include "cmine/errors.h"
#include "cmine/text_util.h"

namespace cmine {
namespace {

bool is_skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

bool passes(const ConceptRecord& r, const SemanticWhitelist& whitelist) {
  return !whitelist || whitelist->count(r.semantic_type) > 0;
}

}  // namespace

std::vector<ConceptRecord> parse_knowledge_source(
    std::istream& in, const std::string& source_name,
    const SemanticWhitelist& whitelist) {
  std::vector<ConceptRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_skippable(line)) continue;

    const auto fields = split(line, '\t');
    if (fields.size() < 3 || fields.size() > 4) {
      throw ParseError(source_name, line_no,
                       "expected 3 or 4 tab-separated fields, got " +
                           std::to_string(fields.size()));
    }
    ConceptRecord r;
    r.concept_id = std::string(trim(fields[0]));
    r.term = std::string(trim(fields[1]));
    r.semantic_type = std::string(trim(fields[2]));
    if (fields.size() == 4 && !trim(fields[3]).empty()) {
      r.source_vocabulary = std::string(trim(fields[3]));
    }
    if (r.concept_id.empty()) throw ParseError(source_name, line_no, "empty concept_id");
    if (r.term.empty()) throw ParseError(source_name, line_no, "empty term");
    if (r.semantic_type.empty()) {
      throw ParseError(source_name, line_no, "empty semantic_type");
    }
    // Deduplicate before filtering so a whitelist never changes which
    // occurrence of a (concept, term) pair survives.
    std::string key = r.concept_id;
    key.push_back('\t');
    key += casefold(r.term);
    if (!seen.insert(std::move(key)).second) continue;
    if (!passes(r, whitelist)) continue;
    records.push_back(std::move(r));
  }
  if (in.bad()) throw IoError("read error in " + source_name);
  return records;
}

std::vector<ConceptRecord> load_knowledge_source(const std::string& path,
                                                 const SemanticWhitelist& whitelist) {
  auto in = open_or_throw(path);
  return parse_knowledge_source(in, path, whitelist);
}

std::vector<ConceptRecord> filter_by_semantic_type(
    std::span<const ConceptRecord> records, const SemanticWhitelist& whitelist) {
  std::vector<ConceptRecord> out;
  for (const auto& r : records) {
    if (passes(r, whitelist)) out.push_back(r);
  }
  return out;
}

std::set<std::string> parse_semantic_type_list(std::string_view list) {
  std::set<std::string> out;
  for (auto item : split(list, ',')) {
    item = trim(item);
    if (!item.empty()) out.emplace(item);
  }
  return out;
}

const std::string& SemanticTypeBuckets::bucket_of(
    const std::string& semantic_type) const {
  static const std::string kDefault(kDefaultBucket);
  const auto it = bucket_of_.find(semantic_type);
  return it == bucket_of_.end() ? kDefault : it->second;
}

const std::string& SemanticTypeBuckets::bucket_of(
    const std::set<std::string>& semantic_types) const {
  static const std::string kDefault(kDefaultBucket);
  for (const auto& t : semantic_types) {
    const auto it = bucket_of_.find(t);
    if (it != bucket_of_.end() && it->second != kDefault) return it->second;
  }
  return kDefault;
}

SemanticTypeBuckets parse_buckets(std::istream& in, const std::string& source_name) {
  std::map<std::string, std::string> mapping;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_skippable(line)) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) {
      throw ParseError(source_name, line_no,
                       "expected 2 tab-separated fields, got " +
                           std::to_string(fields.size()));
    }
    const auto type = trim(fields[0]);
    const auto bucket = trim(fields[1]);
    if (type.empty() || bucket.empty()) {
      throw ParseError(source_name, line_no, "empty semantic type or bucket");
    }
    mapping[std::string(type)] = std::string(bucket);
  }
  if (in.bad()) throw IoError("read error in " + source_name);
  return SemanticTypeBuckets(std::move(mapping));
}

SemanticTypeBuckets load_buckets(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_buckets(in, path);
}

}  // namespace cmine
