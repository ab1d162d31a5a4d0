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

// Dictionary-driven spelling correction. A word w is replaced by the
// candidate c maximizing P(c|w); candidates are vocabulary tokens reachable
// from w by deletions, insertions, substitutions and adjacent transpositions.
// Every distance-1 candidate outranks every distance-2 candidate, so within
// the best tier the argmax is the one with the highest prior count. Equal
// counts resolve to the lexicographically smallest token.

#ifndef CMINE_SPELL_H_
#define CMINE_SPELL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cmine/knowledge_source.h"

namespace cmine {

class VocabularyModel {
 public:
  VocabularyModel() = default;
  explicit VocabularyModel(const std::map<std::string, std::uint64_t>& counts);

  // Counts the casefolded tokens of every record term.
  static VocabularyModel from_records(std::span<const ConceptRecord> records);

  bool contains(std::string_view token) const;
  std::uint64_t freq(std::string_view token) const;
  std::uint64_t total() const { return total_; }
  std::size_t size() const { return freq_.size(); }
  bool empty() const { return freq_.empty(); }
  // Sorted token -> count, suitable for persisting.
  std::map<std::string, std::uint64_t> counts() const;
  // Bytes occurring anywhere in the vocabulary; the edit alphabet.
  const std::string& alphabet() const { return alphabet_; }

  // Calls fn(v) for every vocabulary token v exactly one deletion,
  // transposition, substitution or insertion away from `e` (v != e).
  // Duplicates are possible.
  template <typename Fn>
  void for_each_neighbor(const std::string& e, Fn&& fn) const;

 private:
  // Token with one position replaced by kWildcard -> tokens with that shape.
  // Serves substitution (same length) and insertion (length + 1) probes.
  static constexpr char kWildcard = '\0';
  std::unordered_map<std::string, std::vector<std::string>> wildcard_;
  std::unordered_map<std::string, std::uint64_t> freq_;
  std::uint64_t total_ = 0;
  std::string alphabet_;
};

template <typename Fn>
void VocabularyModel::for_each_neighbor(const std::string& e, Fn&& fn) const {
  std::string k;
  for (std::size_t i = 0; i < e.size(); ++i) {
    k = e;
    k.erase(i, 1);
    if (freq_.count(k)) fn(k);
  }
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    if (e[i] == e[i + 1]) continue;
    k = e;
    std::swap(k[i], k[i + 1]);
    if (freq_.count(k)) fn(k);
  }
  for (std::size_t i = 0; i <= e.size(); ++i) {
    for (const bool insert : {false, true}) {
      if (!insert && i == e.size()) continue;
      k = e;
      if (insert) {
        k.insert(k.begin() + static_cast<std::ptrdiff_t>(i), kWildcard);
      } else {
        k[i] = kWildcard;
      }
      const auto it = wildcard_.find(k);
      if (it == wildcard_.end()) continue;
      for (const auto& v : it->second) {
        if (v != e) fn(v);
      }
    }
  }
}

struct Candidate {
  std::string token;
  std::size_t distance;

  friend bool operator==(const Candidate&, const Candidate&) = default;
  friend auto operator<=>(const Candidate&, const Candidate&) = default;
};

// Vocabulary tokens within max_edit (1 or 2) edits of w, each with its
// minimal edit count, sorted by token. Found by generating the edits of w and
// testing membership, never by scanning the vocabulary.
std::vector<Candidate> candidates(std::string_view w, const VocabularyModel& model,
                                  int max_edit);

// Known words and words with no candidate come back unchanged.
std::string correct(std::string_view w, const VocabularyModel& model,
                    int max_edit = 2);

// Tokens shorter than this are never corrected by the pipeline.
inline constexpr std::size_t kMinCorrectableLength = 4;

}  // namespace cmine

#endif  // CMINE_SPELL_H_
