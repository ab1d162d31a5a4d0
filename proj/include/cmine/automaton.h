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

// Aho-Corasick automaton over normalized token sequences.
//
// A pattern's tokens are joined with a single 0x1F byte and inserted into a
// byte trie. Failure links are computed breadth-first and every state's
// output list is flattened to include the outputs of its failure target. A
// document is scanned once over its tokens joined the same way; a hit is
// reported only when it starts and ends on token boundaries, so "art" never
// fires inside "heart".
//
// States at depth <= 2 use a dense 256-entry goto table; deeper states keep a
// sorted edge list.
//
// Index file layout (little-endian):
//   "CMN1" | u16 version | 32-byte fingerprint | u32 node_count
//   node_count x { u32 fail | u32 own_pattern | u16 edge_count |
//                  edge_count x { u8 byte | u32 target } }        (BFS order)
//   u32 pattern_count x { u32 byte_length | u32 token_count | u32 payload_count |
//                         payload_count x Payload }
//   u32 vocab_count x { str token | u64 count }
//   u32 crc32 of everything above
// where str is u32 length + bytes and Payload is str concept_id |
// str original_term | str preferred_term | u32 n | n x str semantic_type.

#ifndef CMINE_AUTOMATON_H_
#define CMINE_AUTOMATON_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cmine/normalize.h"

namespace cmine {

inline constexpr char kTokenSeparator = '\x1F';

struct Payload {
  std::string concept_id;
  // Dictionary surface before normalization.
  std::string original_term;
  // Display name of the concept: its first term in the knowledge source.
  std::string preferred_term;
  std::set<std::string> semantic_types;

  friend bool operator==(const Payload&, const Payload&) = default;
};

struct PatternEntry {
  std::vector<std::string> tokens;
  Payload payload;
};

struct RawMatch {
  std::size_t start_token = 0;
  std::size_t end_token = 0;  // exclusive
  std::uint32_t pattern = 0;
  std::span<const Payload> payloads;
};

struct ScanStats {
  std::size_t bytes = 0;  // bytes of the separator-joined text
  std::size_t steps = 0;  // goto transitions plus failure transitions
};

class Automaton {
 public:
  using State = std::uint32_t;
  static constexpr State kRoot = 0;
  static constexpr std::uint32_t kNoPattern = 0xFFFFFFFFu;
  static constexpr std::uint16_t kFormatVersion = 1;
  static constexpr std::uint32_t kDenseDepth = 2;

  // Throws ConfigError for an empty pattern list, an empty pattern or an
  // empty token. Identical token sequences share one pattern; payloads with
  // the same concept id are merged (semantic types united).
  static Automaton build(std::span<const PatternEntry> patterns,
                         const Fingerprint& fingerprint);

  // Throws ConfigMismatchError when `text_fingerprint` differs from the
  // fingerprint captured at build time.
  std::vector<RawMatch> search(const NormalizedText& nt,
                               const Fingerprint& text_fingerprint,
                               ScanStats* stats = nullptr) const;

  // Unchecked scan over an already-normalized token sequence.
  std::vector<RawMatch> scan(std::span<const std::string> tokens,
                             ScanStats* stats = nullptr) const;

  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  // Throws IndexFormatError on bad magic, version, truncation, checksum or
  // structure; IoError when the file cannot be read.
  static Automaton load(std::istream& in);
  static Automaton load(const std::string& path);

  std::size_t node_count() const { return fail_.size(); }
  std::size_t pattern_count() const { return patterns_.size(); }
  std::size_t payload_count() const { return payloads_.size(); }
  const Fingerprint& fingerprint() const { return fingerprint_; }

  State failure(State s) const { return fail_[s]; }
  std::uint32_t depth(State s) const { return depth_[s]; }
  std::optional<State> next(State s, std::uint8_t byte) const;
  std::span<const std::uint32_t> outputs(State s) const;
  std::span<const Payload> payloads(std::uint32_t pattern) const;
  std::uint32_t pattern_token_count(std::uint32_t pattern) const {
    return patterns_[pattern].token_count;
  }
  // The separator-joined byte string of a pattern, rebuilt from the trie.
  std::string pattern_bytes(std::uint32_t pattern) const;

  // Token occurrence counts carried alongside the index (spell correction).
  const std::map<std::string, std::uint64_t>& token_counts() const {
    return token_counts_;
  }
  void set_token_counts(std::map<std::string, std::uint64_t> counts) {
    token_counts_ = std::move(counts);
  }

 private:
  struct Edge {
    std::uint8_t byte;
    State target;
  };
  struct PatternInfo {
    std::uint32_t byte_length = 0;
    std::uint32_t token_count = 0;
    std::uint32_t payload_begin = 0;
    std::uint32_t payload_count = 0;
  };

  State step(State s, std::uint8_t byte, std::size_t& steps) const;
  State lookup(State s, std::uint8_t byte) const;
  // Parents, depths and dense tables from the edge arrays.
  void index_structure();
  // Flattened output lists and pattern states from fail_ and own_pattern_.
  void flatten_outputs();

  Fingerprint fingerprint_{};
  std::vector<State> fail_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> own_pattern_;
  std::vector<std::uint32_t> edge_begin_;  // node_count + 1
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> dense_slot_;
  std::vector<std::array<State, 256>> dense_;
  std::vector<std::uint32_t> out_begin_;  // node_count + 1
  std::vector<std::uint32_t> out_;
  std::vector<State> parent_;
  std::vector<std::uint8_t> in_byte_;
  std::vector<PatternInfo> patterns_;
  std::vector<std::uint32_t> pattern_state_;
  std::vector<Payload> payloads_;
  std::map<std::string, std::uint64_t> token_counts_;
};

}  // namespace cmine

#endif  // CMINE_AUTOMATON_H_
