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

#include "cmine/spell.h"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "cmine/errors.h"
#include "cmine/normalize.h"

namespace cmine {

VocabularyModel::VocabularyModel(const std::map<std::string, std::uint64_t>& counts) {
  std::array<bool, 256> present{};
  for (const auto& [tok, n] : counts) {
    if (n == 0 || tok.empty()) continue;
    freq_[tok] += n;
    total_ += n;
    for (const char c : tok) present[static_cast<unsigned char>(c)] = true;
  }
  for (int b = 0; b < 256; ++b) {
    if (present[b]) alphabet_.push_back(static_cast<char>(b));
  }
  for (const auto& [tok, n] : freq_) {
    for (std::size_t i = 0; i < tok.size(); ++i) {
      std::string key = tok;
      key[i] = kWildcard;
      wildcard_[std::move(key)].push_back(tok);
    }
  }
}

VocabularyModel VocabularyModel::from_records(std::span<const ConceptRecord> records) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& r : records) {
    for (auto& tok : tokenize(r.term).tokens) ++counts[std::move(tok)];
  }
  return VocabularyModel(counts);
}

bool VocabularyModel::contains(std::string_view token) const {
  return freq_.count(std::string(token)) > 0;
}

std::uint64_t VocabularyModel::freq(std::string_view token) const {
  const auto it = freq_.find(std::string(token));
  return it == freq_.end() ? 0 : it->second;
}

std::map<std::string, std::uint64_t> VocabularyModel::counts() const {
  return {freq_.begin(), freq_.end()};
}

namespace {

// Calls emit(edit) for every string one deletion, transposition,
// substitution or insertion away from w. Duplicates are possible.
template <typename Emit>
void for_each_edit(const std::string& w, const std::string& alphabet, Emit&& emit) {
  std::string e;
  for (std::size_t i = 0; i < w.size(); ++i) {
    e = w;
    e.erase(i, 1);
    emit(e);
  }
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] == w[i + 1]) continue;
    e = w;
    std::swap(e[i], e[i + 1]);
    emit(e);
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (const char c : alphabet) {
      if (c == w[i]) continue;
      e = w;
      e[i] = c;
      emit(e);
    }
  }
  for (std::size_t i = 0; i <= w.size(); ++i) {
    for (const char c : alphabet) {
      e = w;
      e.insert(e.begin() + static_cast<std::ptrdiff_t>(i), c);
      emit(e);
    }
  }
}

}  // namespace

std::vector<Candidate> candidates(std::string_view word, const VocabularyModel& model,
                                  int max_edit) {
  if (max_edit != 1 && max_edit != 2) {
    throw ConfigError("max_edit must be 1 or 2");
  }
  const std::string w(word);
  std::vector<Candidate> out;
  if (model.empty()) return out;

  std::unordered_set<std::string> found;
  if (model.contains(w)) {
    out.push_back({w, 0});
    found.insert(w);
  }

  // Ring 1 is enumerated in full because ring-2 hits are reached through
  // non-vocabulary intermediates. Vocabulary hits one edit beyond a string
  // are read from the wildcard index, which yields exactly the tokens the
  // alphabet enumeration would produce.
  model.for_each_neighbor(w, [&](const std::string& v) {
    if (found.insert(v).second) out.push_back({v, 1});
  });
  if (max_edit == 2) {
    std::unordered_set<std::string> ring1;
    for_each_edit(w, model.alphabet(), [&](const std::string& e) { ring1.insert(e); });
    for (const auto& e1 : ring1) {
      model.for_each_neighbor(e1, [&](const std::string& v) {
        if (found.insert(v).second) out.push_back({v, 2});
      });
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string correct(std::string_view w, const VocabularyModel& model, int max_edit) {
  if (model.contains(w)) return std::string(w);
  const auto all = candidates(w, model, max_edit);
  for (std::size_t tier = 1; tier <= static_cast<std::size_t>(max_edit); ++tier) {
    const Candidate* best = nullptr;
    std::uint64_t best_freq = 0;
    // `all` is sorted by token, so strict > keeps the smallest on ties.
    for (const auto& c : all) {
      if (c.distance != tier) continue;
      const auto f = model.freq(c.token);
      if (!best || f > best_freq) {
        best = &c;
        best_freq = f;
      }
    }
    if (best) return best->token;
  }
  return std::string(w);
}

}  // namespace cmine
