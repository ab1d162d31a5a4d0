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

#include "cmine/porter_stemmer.h"

#include <array>
#include <cstddef>

namespace cmine {
namespace {

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : w_(word) {}

  std::string run() {
    if (w_.size() <= 2) return w_;
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return w_;
  }

 private:
  bool consonant(std::size_t i) const {
    switch (w_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 || !consonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in w_[0, len).
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && consonant(i)) ++i;
    while (i < len) {
      while (i < len && !consonant(i)) ++i;
      if (i >= len) break;
      while (i < len && consonant(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant(std::size_t len) const {
    return len >= 2 && w_[len - 1] == w_[len - 2] && consonant(len - 1);
  }

  // cvc where the final c is not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3) return false;
    if (!consonant(len - 1) || consonant(len - 2) || !consonant(len - 3)) {
      return false;
    }
    const char c = w_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view s) const {
    return w_.size() >= s.size() &&
           std::string_view(w_).substr(w_.size() - s.size()) == s;
  }

  std::size_t stem_len(std::string_view suffix) const {
    return w_.size() - suffix.size();
  }

  void replace_suffix(std::string_view suffix, std::string_view replacement) {
    w_.resize(stem_len(suffix));
    w_.append(replacement);
  }

  // Applies the longest matching rule if measure(stem) > min_measure.
  template <std::size_t N>
  void apply_longest(const std::array<Rule, N>& rules, int min_measure) {
    const Rule* best = nullptr;
    for (const auto& r : rules) {
      if (ends_with(r.suffix) && (!best || r.suffix.size() > best->suffix.size())) {
        best = &r;
      }
    }
    if (best && measure(stem_len(best->suffix)) > min_measure) {
      replace_suffix(best->suffix, best->replacement);
    }
  }

  void step1a() {
    if (ends_with("sses")) {
      replace_suffix("sses", "ss");
    } else if (ends_with("ies")) {
      replace_suffix("ies", "i");
    } else if (ends_with("ss")) {
      // unchanged
    } else if (ends_with("s")) {
      replace_suffix("s", "");
    }
  }

  void step1b() {
    if (ends_with("eed")) {
      if (measure(stem_len("eed")) > 0) replace_suffix("eed", "ee");
      return;
    }
    std::string_view removed;
    if (ends_with("ed") && has_vowel(stem_len("ed"))) {
      removed = "ed";
    } else if (ends_with("ing") && has_vowel(stem_len("ing"))) {
      removed = "ing";
    } else {
      return;
    }
    replace_suffix(removed, "");

    if (ends_with("at")) {
      replace_suffix("at", "ate");
    } else if (ends_with("bl")) {
      replace_suffix("bl", "ble");
    } else if (ends_with("iz")) {
      replace_suffix("iz", "ize");
    } else if (double_consonant(w_.size())) {
      const char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z') w_.pop_back();
    } else if (measure(w_.size()) == 1 && cvc(w_.size())) {
      w_.push_back('e');
    }
  }

  void step1c() {
    if (ends_with("y") && has_vowel(stem_len("y"))) replace_suffix("y", "i");
  }

  void step2() {
    static constexpr std::array<Rule, 20> kRules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},
    }};
    apply_longest(kRules, 0);
  }

  void step3() {
    static constexpr std::array<Rule, 7> kRules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_longest(kRules, 0);
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> kSuffixes{
        "al",  "ance", "ence", "er",  "ic",  "able", "ible",
        "ant", "ement", "ment", "ent", "ion", "ou",  "ism",
        "ate", "iti",  "ous",  "ive", "ize",
    };
    std::string_view best;
    for (const auto s : kSuffixes) {
      if (ends_with(s) && s.size() > best.size()) best = s;
    }
    if (best.empty()) return;
    const std::size_t len = stem_len(best);
    if (measure(len) <= 1) return;
    if (best == "ion" && !(len > 0 && (w_[len - 1] == 's' || w_[len - 1] == 't'))) {
      return;
    }
    w_.resize(len);
  }

  void step5a() {
    if (!ends_with("e")) return;
    const std::size_t len = stem_len("e");
    const int m = measure(len);
    if (m > 1 || (m == 1 && !cvc(len))) w_.resize(len);
  }

  void step5b() {
    if (measure(w_.size()) > 1 && double_consonant(w_.size()) && w_.back() == 'l') {
      w_.pop_back();
    }
  }

  std::string w_;
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

}  // namespace cmine
