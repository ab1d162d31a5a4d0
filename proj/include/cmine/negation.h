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

// NegEx-style negation scoping.
//
// Within one sentence, pseudo-trigger occurrences are found first and their
// tokens are masked. A target is negated when an unmasked pre-negation
// trigger ends at most `window - 1` tokens before it (so the target starts
// inside the `window` tokens that follow the trigger), or an unmasked
// post-negation trigger starts within the `window` tokens after it, with no
// terminator occurrence in the tokens between.
//
// Triggers are matched against the raw lowercase token stream, before
// stopword removal and stemming.

#ifndef CMINE_NEGATION_H_
#define CMINE_NEGATION_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmine/match.h"
#include "cmine/normalize.h"

namespace cmine {

using TokenSequence = std::vector<std::string>;

struct TriggerSet {
  std::vector<TokenSequence> pre_negation;
  std::vector<TokenSequence> post_negation;
  std::vector<TokenSequence> pseudo;
  std::vector<TokenSequence> terminators;

  // The bundled lexicon.
  static const TriggerSet& defaults();
  // Lines "PRE: ...", "POST: ...", "PSEUDO: ...", "TERM: ..."; '#' comments.
  // Entries are tokenized like documents. Throws ParseError on unknown
  // prefixes, empty entries, or an entry listed under two kinds.
  static TriggerSet parse(std::string_view text, const std::string& source_name);
  static TriggerSet load(const std::string& path);

  bool empty() const {
    return pre_negation.empty() && post_negation.empty() && pseudo.empty() &&
           terminators.empty();
  }
};

struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

// Token ranges partitioning the tokens of `nt`; a new sentence starts after
// any '.', '!' or '?' in the original text between two tokens.
std::vector<TokenRange> split_sentences(const NormalizedText& nt);

// One flag per target. `targets` are ranges over nt.tokens.
std::vector<bool> negated_flags(std::span<const TokenRange> targets,
                                const NormalizedText& nt, const TriggerSet& triggers,
                                std::size_t window = 5);

// Sets Match::negated from character offsets. `nt` must be the unfiltered
// tokenization of the same document the matches came from.
std::vector<Match> flag_negated(std::vector<Match> matches, const NormalizedText& nt,
                                const TriggerSet& triggers, std::size_t window = 5);

}  // namespace cmine

#endif  // CMINE_NEGATION_H_
