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

// Text normalization shared by indexing and search. Dictionary terms and
// documents must pass through the same configuration; the Fingerprint of that
// configuration is stored in every built index and checked before a search.

#ifndef CMINE_NORMALIZE_H_
#define CMINE_NORMALIZE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cmine/config.h"

namespace cmine {

// Byte offsets into the original UTF-8 text, end-exclusive.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct NormalizedText {
  std::vector<std::string> tokens;
  std::vector<Span> spans;  // parallel to tokens
  std::string original;

  std::size_t size() const { return tokens.size(); }
};

class Stoplist {
 public:
  Stoplist() = default;
  explicit Stoplist(std::unordered_set<std::string> words);

  // The bundled 127-word English list.
  static const Stoplist& english();
  // One lowercase token per line, '#' comments. Throws IoError.
  static Stoplist load(const std::string& path);
  static Stoplist parse(std::string_view text);

  bool contains(std::string_view token) const {
    return words_.count(std::string(token)) > 0;
  }
  std::size_t size() const { return words_.size(); }
  // SHA-256 hex of the sorted entries; identifies the list in fingerprints.
  const std::string& digest() const { return digest_; }

 private:
  std::unordered_set<std::string> words_;
  std::string digest_;
};

// Maximal runs of word characters, lowercased. Never fails; invalid UTF-8
// bytes act as separators.
NormalizedText tokenize(std::string_view text);

NormalizedText apply_stopwords(NormalizedText nt, const Stoplist& stoplist);

// Throws UnsupportedError for StemMode::kLemma.
NormalizedText apply_stem(NormalizedText nt, StemMode mode);

// tokenize -> apply_stopwords (if enabled) -> apply_stem.
NormalizedText normalize(std::string_view text, const PipelineConfig& config,
                         const Stoplist& stoplist = Stoplist::english());

using Fingerprint = std::array<std::uint8_t, 32>;

// SHA-256 of the sorted key=value lines for every setting that changes
// normalized output: remove_stopwords, stem_mode and the stoplist digest.
Fingerprint config_fingerprint(const PipelineConfig& config,
                               const Stoplist& stoplist = Stoplist::english());
std::string canonical_config_text(const PipelineConfig& config,
                                  const Stoplist& stoplist);
std::string to_hex(const Fingerprint& fp);

// Hex SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view data);

}  // namespace cmine

#endif  // CMINE_NORMALIZE_H_
