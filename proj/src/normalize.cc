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

#include "cmine/normalize.h"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cmine/errors.h"
#include "cmine/porter_stemmer.h"
#include "cmine/text_util.h"
#include "embedded_data.h"

namespace cmine {
namespace {

std::array<std::uint8_t, 32> sha256(std::string_view data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw Error("SHA-256 computation failed");
  }
  return out;
}

std::string hex(const std::uint8_t* bytes, std::size_t n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(kDigits[bytes[i] >> 4]);
    out.push_back(kDigits[bytes[i] & 0xF]);
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  const auto d = sha256(data);
  return hex(d.data(), d.size());
}

std::string to_hex(const Fingerprint& fp) { return hex(fp.data(), fp.size()); }

Stoplist::Stoplist(std::unordered_set<std::string> words) : words_(std::move(words)) {
  std::vector<std::string> sorted(words_.begin(), words_.end());
  std::sort(sorted.begin(), sorted.end());
  std::string joined;
  for (const auto& w : sorted) {
    joined += w;
    joined.push_back('\n');
  }
  digest_ = sha256_hex(joined);
}

Stoplist Stoplist::parse(std::string_view text) {
  std::unordered_set<std::string> words;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    words.insert(casefold(line));
  }
  return Stoplist(std::move(words));
}

Stoplist Stoplist::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const Stoplist& Stoplist::english() {
  static const Stoplist kEnglish = parse(embedded::stopwords_en());
  return kEnglish;
}

NormalizedText tokenize(std::string_view text) {
  NormalizedText nt;
  nt.original = std::string(text);
  std::size_t pos = 0;
  std::string current;
  std::size_t start = 0;
  bool in_token = false;
  while (pos < text.size()) {
    const auto d = decode_utf8(text, pos);
    const bool word = !(d.length == 1 && d.value == 0xFFFD) &&
                      is_word_code_point(d.value);
    if (word) {
      if (!in_token) {
        in_token = true;
        start = pos;
        current.clear();
      }
      append_utf8(current, to_lower_code_point(d.value));
    } else if (in_token) {
      in_token = false;
      nt.tokens.push_back(current);
      nt.spans.push_back({start, pos});
    }
    pos += d.length;
  }
  if (in_token) {
    nt.tokens.push_back(current);
    nt.spans.push_back({start, pos});
  }
  return nt;
}

NormalizedText apply_stopwords(NormalizedText nt, const Stoplist& stoplist) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < nt.tokens.size(); ++i) {
    if (stoplist.contains(nt.tokens[i])) continue;
    if (out != i) {
      nt.tokens[out] = std::move(nt.tokens[i]);
      nt.spans[out] = nt.spans[i];
    }
    ++out;
  }
  nt.tokens.resize(out);
  nt.spans.resize(out);
  return nt;
}

NormalizedText apply_stem(NormalizedText nt, StemMode mode) {
  switch (mode) {
    case StemMode::kNone:
      return nt;
    case StemMode::kStem:
      for (auto& t : nt.tokens) t = porter_stem(t);
      return nt;
    case StemMode::kLemma:
      break;
  }
  throw UnsupportedError("stem mode 'lemma' is not supported");
}

NormalizedText normalize(std::string_view text, const PipelineConfig& config,
                         const Stoplist& stoplist) {
  auto nt = tokenize(text);
  if (config.remove_stopwords) nt = apply_stopwords(std::move(nt), stoplist);
  return apply_stem(std::move(nt), config.stem_mode);
}

std::string canonical_config_text(const PipelineConfig& config,
                                  const Stoplist& stoplist) {
  // Keys in sorted order.
  std::string text;
  text += "remove_stopwords=";
  text += config.remove_stopwords ? "true" : "false";
  text += "\nstem_mode=";
  text += to_string(config.stem_mode);
  text += "\nstoplist=";
  text += stoplist.digest();
  text += "\n";
  return text;
}

Fingerprint config_fingerprint(const PipelineConfig& config, const Stoplist& stoplist) {
  return sha256(canonical_config_text(config, stoplist));
}

}  // namespace cmine
