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

// Concept dictionaries in a generic tab-separated layout:
//
//   concept_id <TAB> term <TAB> semantic_type [<TAB> source_vocabulary]
//
// Lines starting with '#' and blank lines are ignored. The first row seen for
// a concept id supplies its preferred name.

#ifndef CMINE_KNOWLEDGE_SOURCE_H_
#define CMINE_KNOWLEDGE_SOURCE_H_

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cmine {

struct ConceptRecord {
  std::string concept_id;
  std::string term;
  std::string semantic_type;
  std::string source_vocabulary = "UNKNOWN";

  friend bool operator==(const ConceptRecord&, const ConceptRecord&) = default;
};

using SemanticWhitelist = std::optional<std::set<std::string>>;

// Reads a knowledge source. Records whose semantic type is not in
// `whitelist` are skipped; (concept_id, lowercased term) duplicates keep the
// first occurrence in the file, whether or not that one passes the
// whitelist. Throws IoError / ParseError.
std::vector<ConceptRecord> load_knowledge_source(
    const std::string& path, const SemanticWhitelist& whitelist = std::nullopt);

// Same, over an already-open stream. `source_name` is used in error messages.
std::vector<ConceptRecord> parse_knowledge_source(
    std::istream& in, const std::string& source_name,
    const SemanticWhitelist& whitelist = std::nullopt);

std::vector<ConceptRecord> filter_by_semantic_type(
    std::span<const ConceptRecord> records, const SemanticWhitelist& whitelist);

// Parses "dsyn,phsu" style lists. Empty items are dropped.
std::set<std::string> parse_semantic_type_list(std::string_view list);

// Maps semantic types to reporting groups ("Diagnosis", "Medicines", ...).
class SemanticTypeBuckets {
 public:
  static constexpr std::string_view kDefaultBucket = "Other";

  SemanticTypeBuckets() = default;
  explicit SemanticTypeBuckets(std::map<std::string, std::string> bucket_of)
      : bucket_of_(std::move(bucket_of)) {}

  const std::string& bucket_of(const std::string& semantic_type) const;

  // Bucket for a concept carrying several types: the first type in sorted
  // order that maps to a named bucket wins, else the default.
  const std::string& bucket_of(const std::set<std::string>& semantic_types) const;

  const std::map<std::string, std::string>& mapping() const { return bucket_of_; }
  std::string default_bucket() const { return std::string(kDefaultBucket); }

 private:
  std::map<std::string, std::string> bucket_of_;
};

// Two-column TSV: semantic_type <TAB> bucket. Throws IoError / ParseError.
SemanticTypeBuckets load_buckets(const std::string& path);
SemanticTypeBuckets parse_buckets(std::istream& in, const std::string& source_name);

}  // namespace cmine

#endif  // CMINE_KNOWLEDGE_SOURCE_H_
