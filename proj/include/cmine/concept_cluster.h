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

// Concept-id clustering. Two concept ids are merged when any term of one is
// similar enough to any term of the other; merges are closed transitively and
// each cluster is named after its lexicographically smallest id.

#ifndef CMINE_CONCEPT_CLUSTER_H_
#define CMINE_CONCEPT_CLUSTER_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmine/config.h"
#include "cmine/knowledge_source.h"
#include "cmine/normalize.h"

namespace cmine {

// Disjoint sets over dense indices with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t x);
  // Returns false when x and y were already in the same set.
  bool unite(std::size_t x, std::size_t y);
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_size_;
};

// Plain Levenshtein distance over bytes (insert, delete, substitute).
std::size_t levenshtein(std::string_view a, std::string_view b);

// The comparison form of a term under `config`: casefolded tokens, optional
// stopword removal and stemming, sorted when word order is ignored, joined by
// single spaces. If stopword removal would leave nothing, the unfiltered
// tokens are kept.
std::string cluster_key(std::string_view term, const ClusterConfig& config,
                        const Stoplist& stoplist = Stoplist::english());

// 1 - levenshtein(a', b') / max(|a'|, |b'|) on cluster keys.
double term_similarity(std::string_view a, std::string_view b,
                       const ClusterConfig& config,
                       const Stoplist& stoplist = Stoplist::english());

class MaskingTable {
 public:
  MaskingTable() = default;
  explicit MaskingTable(std::map<std::string, std::string> mask)
      : mask_(std::move(mask)) {}

  // Ids absent from the table map to themselves.
  const std::string& canonical(const std::string& concept_id) const;
  const std::map<std::string, std::string>& entries() const { return mask_; }
  std::size_t size() const { return mask_.size(); }
  bool is_idempotent() const;

  friend bool operator==(const MaskingTable&, const MaskingTable&) = default;

 private:
  std::map<std::string, std::string> mask_;
};

// Identity table when config.enabled is false.
MaskingTable build_masking_table(std::span<const ConceptRecord> records,
                                 const ClusterConfig& config,
                                 const Stoplist& stoplist = Stoplist::english());

// Rewrites concept ids through the table and drops rows that become
// duplicates on (concept_id, term, semantic_type). Order is preserved.
std::vector<ConceptRecord> apply_mask(std::span<const ConceptRecord> records,
                                      const MaskingTable& table);

// Two-column TSV (original_id, canonical_id), sorted by original id.
void write_masking_table(std::ostream& out, const MaskingTable& table);
void write_knowledge_source(std::ostream& out,
                            std::span<const ConceptRecord> records);

}  // namespace cmine

#endif  // CMINE_CONCEPT_CLUSTER_H_
