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

#include "cmine/concept_cluster.h"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>

#include "cmine/porter_stemmer.h"
#include "cmine/text_util.h"

namespace cmine {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t x, std::size_t y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (rank_size_[x] < rank_size_[y]) std::swap(x, y);
  parent_[y] = x;
  rank_size_[x] += rank_size_[y];
  return true;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string cluster_key(std::string_view term, const ClusterConfig& config,
                        const Stoplist& stoplist) {
  auto nt = tokenize(term);
  if (config.remove_stopwords) {
    auto filtered = apply_stopwords(nt, stoplist);
    if (!filtered.tokens.empty()) nt = std::move(filtered);
  }
  if (config.use_stemming) nt = apply_stem(std::move(nt), StemMode::kStem);
  if (!config.respect_word_order) std::sort(nt.tokens.begin(), nt.tokens.end());
  return join(nt.tokens, " ");
}

namespace {

double key_similarity(std::string_view a, std::string_view b) {
  if (a == b) return 1.0;
  const std::size_t longest = std::max(a.size(), b.size());
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

// Tolerates rounding in 1 - d/m for thresholds written as decimals.
constexpr double kThresholdSlack = 1e-12;

bool meets(double similarity, double threshold) {
  return similarity + kThresholdSlack >= threshold;
}

}  // namespace

double term_similarity(std::string_view a, std::string_view b,
                       const ClusterConfig& config, const Stoplist& stoplist) {
  return key_similarity(cluster_key(a, config, stoplist),
                        cluster_key(b, config, stoplist));
}

const std::string& MaskingTable::canonical(const std::string& concept_id) const {
  const auto it = mask_.find(concept_id);
  return it == mask_.end() ? concept_id : it->second;
}

bool MaskingTable::is_idempotent() const {
  return std::all_of(mask_.begin(), mask_.end(), [this](const auto& kv) {
    return canonical(kv.second) == kv.second;
  });
}

MaskingTable build_masking_table(std::span<const ConceptRecord> records,
                                 const ClusterConfig& config,
                                 const Stoplist& stoplist) {
  config.validate();

  std::vector<std::string> ids;
  for (const auto& r : records) ids.push_back(r.concept_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::map<std::string, std::string> mask;
  if (!config.enabled) {
    for (const auto& id : ids) mask.emplace(id, id);
    return MaskingTable(std::move(mask));
  }

  const auto index_of = [&ids](const std::string& id) {
    return static_cast<std::size_t>(
        std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  // Distinct comparison keys, each with the first concept seen carrying it.
  // Every concept sharing a key is merged immediately (similarity 1).
  UnionFind uf(ids.size());
  std::unordered_map<std::string, std::size_t> key_index;
  std::vector<std::string> keys;
  std::vector<std::size_t> key_owner;
  for (const auto& r : records) {
    auto key = cluster_key(r.term, config, stoplist);
    if (key.empty()) continue;
    const std::size_t concept_idx = index_of(r.concept_id);
    const auto [it, inserted] = key_index.emplace(key, keys.size());
    if (inserted) {
      keys.push_back(std::move(key));
      key_owner.push_back(concept_idx);
    } else {
      uf.unite(key_owner[it->second], concept_idx);
    }
  }

  if (config.edit_threshold < 1.0) {
    const double max_distance_ratio = 1.0 - config.edit_threshold;
    const auto try_pair = [&](std::size_t i, std::size_t j) {
      const std::size_t la = keys[i].size();
      const std::size_t lb = keys[j].size();
      const std::size_t longest = std::max(la, lb);
      const std::size_t diff = la > lb ? la - lb : lb - la;
      // Levenshtein is at least the length difference.
      if (static_cast<double>(diff) >
          max_distance_ratio * static_cast<double>(longest) + kThresholdSlack) {
        return;
      }
      if (meets(key_similarity(keys[i], keys[j]), config.edit_threshold)) {
        uf.unite(key_owner[i], key_owner[j]);
      }
    };

    if (config.exhaustive) {
      for (std::size_t i = 0; i < keys.size(); ++i) {
        for (std::size_t j = i + 1; j < keys.size(); ++j) try_pair(i, j);
      }
    } else {
      // Block on shared tokens.
      std::unordered_map<std::string_view, std::vector<std::size_t>> postings;
      for (std::size_t i = 0; i < keys.size(); ++i) {
        std::set<std::string_view> distinct;
        for (auto tok : split(keys[i], ' ')) distinct.insert(tok);
        for (auto tok : distinct) postings[tok].push_back(i);
      }
      std::vector<std::size_t> last_seen(keys.size(), SIZE_MAX);
      for (std::size_t i = 0; i < keys.size(); ++i) {
        for (auto tok : split(keys[i], ' ')) {
          for (const std::size_t j : postings[tok]) {
            if (j <= i || last_seen[j] == i) continue;
            last_seen[j] = i;
            try_pair(i, j);
          }
        }
      }
    }
  }

  // Ids are sorted, so the smallest index in a set is its lexicographic
  // minimum.
  std::vector<std::size_t> smallest(ids.size(), SIZE_MAX);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto& s = smallest[uf.find(i)];
    s = std::min(s, i);
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    mask.emplace(ids[i], ids[smallest[uf.find(i)]]);
  }
  return MaskingTable(std::move(mask));
}

std::vector<ConceptRecord> apply_mask(std::span<const ConceptRecord> records,
                                      const MaskingTable& table) {
  std::vector<ConceptRecord> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& r : records) {
    ConceptRecord masked = r;
    masked.concept_id = table.canonical(r.concept_id);
    if (!seen.emplace(masked.concept_id, masked.term, masked.semantic_type).second) {
      continue;
    }
    out.push_back(std::move(masked));
  }
  return out;
}

void write_masking_table(std::ostream& out, const MaskingTable& table) {
  for (const auto& [from, to] : table.entries()) out << from << '\t' << to << '\n';
}

void write_knowledge_source(std::ostream& out,
                            std::span<const ConceptRecord> records) {
  for (const auto& r : records) {
    out << r.concept_id << '\t' << r.term << '\t' << r.semantic_type << '\t'
        << r.source_vocabulary << '\n';
  }
}

}  // namespace cmine
