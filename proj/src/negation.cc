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

#include "cmine/negation.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "cmine/errors.h"
#include "cmine/text_util.h"
#include "embedded_data.h"

namespace cmine {

TriggerSet TriggerSet::parse(std::string_view text, const std::string& source_name) {
  TriggerSet set;
  std::map<TokenSequence, std::string> kind_of;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(source_name, line_no, "expected KIND: entry");
    }
    const std::string kind(trim(line.substr(0, colon)));
    std::vector<TokenSequence>* list = nullptr;
    if (kind == "PRE") {
      list = &set.pre_negation;
    } else if (kind == "POST") {
      list = &set.post_negation;
    } else if (kind == "PSEUDO") {
      list = &set.pseudo;
    } else if (kind == "TERM") {
      list = &set.terminators;
    } else {
      throw ParseError(source_name, line_no, "unknown trigger kind '" + kind + "'");
    }
    auto tokens = tokenize(line.substr(colon + 1)).tokens;
    if (tokens.empty()) throw ParseError(source_name, line_no, "empty trigger");
    const auto [it, inserted] = kind_of.emplace(tokens, kind);
    if (!inserted) {
      if (it->second == kind) continue;
      throw ParseError(source_name, line_no,
                       "trigger listed as both " + it->second + " and " + kind);
    }
    list->push_back(std::move(tokens));
  }
  return set;
}

TriggerSet TriggerSet::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

const TriggerSet& TriggerSet::defaults() {
  static const TriggerSet kDefaults = parse(embedded::negex_triggers(), "<bundled triggers>");
  return kDefaults;
}

std::vector<TokenRange> split_sentences(const NormalizedText& nt) {
  std::vector<TokenRange> out;
  if (nt.tokens.empty()) return out;
  std::size_t begin = 0;
  for (std::size_t i = 1; i < nt.spans.size(); ++i) {
    const auto gap = std::string_view(nt.original)
                         .substr(nt.spans[i - 1].end,
                                 nt.spans[i].begin - nt.spans[i - 1].end);
    if (gap.find_first_of(".!?") != std::string_view::npos) {
      out.push_back({begin, i});
      begin = i;
    }
  }
  out.push_back({begin, nt.tokens.size()});
  return out;
}

namespace {

// Occurrences of any of `seqs` inside `sentence`, skipping those touching a
// masked token when `mask` is given.
std::vector<TokenRange> occurrences(const std::vector<TokenSequence>& seqs,
                                    const std::vector<std::string>& tokens,
                                    TokenRange sentence,
                                    const std::vector<bool>* mask) {
  std::vector<TokenRange> out;
  for (const auto& seq : seqs) {
    if (seq.size() > sentence.end - sentence.begin) continue;
    for (std::size_t i = sentence.begin; i + seq.size() <= sentence.end; ++i) {
      if (!std::equal(seq.begin(), seq.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        continue;
      }
      if (mask && std::any_of(mask->begin() + static_cast<std::ptrdiff_t>(i),
                              mask->begin() + static_cast<std::ptrdiff_t>(i + seq.size()),
                              [](bool m) { return m; })) {
        continue;
      }
      out.push_back({i, i + seq.size()});
    }
  }
  return out;
}

bool terminator_between(const std::vector<TokenRange>& terms, std::size_t from,
                        std::size_t to) {
  return std::any_of(terms.begin(), terms.end(), [&](const TokenRange& r) {
    return r.begin >= from && r.end <= to;
  });
}

}  // namespace

std::vector<bool> negated_flags(std::span<const TokenRange> targets,
                                const NormalizedText& nt, const TriggerSet& triggers,
                                std::size_t window) {
  std::vector<bool> flags(targets.size(), false);
  if (window == 0 || nt.tokens.empty()) return flags;

  const auto sentences = split_sentences(nt);
  for (const auto& sentence : sentences) {
    std::vector<bool> mask(nt.tokens.size(), false);
    for (const auto& r : occurrences(triggers.pseudo, nt.tokens, sentence, nullptr)) {
      std::fill(mask.begin() + static_cast<std::ptrdiff_t>(r.begin),
                mask.begin() + static_cast<std::ptrdiff_t>(r.end), true);
    }
    const auto pre = occurrences(triggers.pre_negation, nt.tokens, sentence, &mask);
    const auto post = occurrences(triggers.post_negation, nt.tokens, sentence, &mask);
    const auto terms = occurrences(triggers.terminators, nt.tokens, sentence, nullptr);

    for (std::size_t k = 0; k < targets.size(); ++k) {
      const auto& t = targets[k];
      if (t.begin >= t.end || t.begin < sentence.begin || t.begin >= sentence.end) {
        continue;
      }
      const bool by_pre = std::any_of(pre.begin(), pre.end(), [&](const TokenRange& p) {
        return p.end <= t.begin && t.begin - p.end < window &&
               !terminator_between(terms, p.end, t.begin);
      });
      const bool by_post = std::any_of(post.begin(), post.end(), [&](const TokenRange& p) {
        return p.begin >= t.end && p.begin - t.end < window &&
               !terminator_between(terms, t.end, p.begin);
      });
      flags[k] = by_pre || by_post;
    }
  }
  return flags;
}

std::vector<Match> flag_negated(std::vector<Match> matches, const NormalizedText& nt,
                                const TriggerSet& triggers, std::size_t window) {
  std::vector<TokenRange> targets;
  targets.reserve(matches.size());
  for (const auto& m : matches) {
    const auto first = std::lower_bound(
        nt.spans.begin(), nt.spans.end(), m.start_char,
        [](const Span& s, std::size_t pos) { return s.begin < pos; });
    const auto last = std::lower_bound(
        nt.spans.begin(), nt.spans.end(), m.end_char,
        [](const Span& s, std::size_t pos) { return s.begin < pos; });
    targets.push_back({static_cast<std::size_t>(first - nt.spans.begin()),
                       static_cast<std::size_t>(last - nt.spans.begin())});
  }
  const auto flags = negated_flags(targets, nt, triggers, window);
  for (std::size_t i = 0; i < matches.size(); ++i) matches[i].negated = flags[i];
  return matches;
}

}  // namespace cmine
