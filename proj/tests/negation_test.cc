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

#include <gtest/gtest.h>

#include <random>

#include "cmine/errors.h"
#include "test_support.h"

namespace cmine {
namespace {

TriggerSet small_triggers() {
  return TriggerSet::parse(
      "PRE: no\nPRE: does not have\nPOST: ruled out\nPSEUDO: not ruled out\nTERM: but\n",
      "<test>");
}

std::vector<bool> flags_for(const std::string& text, const std::vector<std::string>& targets,
                            const TriggerSet& triggers, std::size_t window = 5) {
  const auto nt = tokenize(text);
  std::vector<TokenRange> ranges;
  for (const auto& t : targets) {
    const auto tt = tokenize(t).tokens;
    for (std::size_t i = 0; i + tt.size() <= nt.tokens.size(); ++i) {
      if (std::equal(tt.begin(), tt.end(), nt.tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        ranges.push_back({i, i + tt.size()});
        break;
      }
    }
  }
  EXPECT_EQ(ranges.size(), targets.size());
  return negated_flags(ranges, nt, triggers, window);
}

TEST(TriggerSet, ParseKinds) {
  const auto t = small_triggers();
  EXPECT_EQ(t.pre_negation.size(), 2u);
  EXPECT_EQ(t.pre_negation[1], (TokenSequence{"does", "not", "have"}));
  EXPECT_EQ(t.post_negation.size(), 1u);
  EXPECT_EQ(t.pseudo.size(), 1u);
  EXPECT_EQ(t.terminators.size(), 1u);
}

TEST(TriggerSet, ParseErrors) {
  EXPECT_THROW(TriggerSet::parse("PRE no\n", "t"), ParseError);
  EXPECT_THROW(TriggerSet::parse("MAYBE: no\n", "t"), ParseError);
  EXPECT_THROW(TriggerSet::parse("PRE: ...\n", "t"), ParseError);
  EXPECT_THROW(TriggerSet::parse("PRE: no\nPOST: no\n", "t"), ParseError);
  EXPECT_NO_THROW(TriggerSet::parse("PRE: no\nPRE: No\n", "t"));
  EXPECT_THROW(TriggerSet::load("/nonexistent/triggers.txt"), IoError);
}

TEST(TriggerSet, BundledListsAreDisjoint) {
  const auto& t = TriggerSet::defaults();
  EXPECT_GE(t.pre_negation.size() + t.post_negation.size() + t.pseudo.size() +
                t.terminators.size(),
            60u);
  std::set<TokenSequence> seen;
  for (const auto* list : {&t.pre_negation, &t.post_negation, &t.pseudo, &t.terminators}) {
    for (const auto& seq : *list) EXPECT_TRUE(seen.insert(seq).second);
  }
}

TEST(Sentences, SplitOnTerminalPunctuation) {
  const auto two = split_sentences(tokenize("EEG was normal. Dose of Tegretol was reduced."));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0], (TokenRange{0, 3}));
  EXPECT_EQ(two[1], (TokenRange{3, 8}));
  EXPECT_EQ(split_sentences(tokenize("no punctuation here")).size(), 1u);
  EXPECT_TRUE(split_sentences(tokenize("")).empty());
  EXPECT_EQ(split_sentences(tokenize("Really? Yes! Fine")).size(), 3u);
}

TEST(Negation, PreTrigger) {
  EXPECT_EQ(flags_for("patient does not have diabetes", {"diabetes"}, small_triggers()),
            std::vector<bool>{true});
}

TEST(Negation, PseudoMasksPostTrigger) {
  EXPECT_EQ(flags_for("infection not ruled out", {"infection"}, small_triggers()),
            std::vector<bool>{false});
  EXPECT_EQ(flags_for("infection ruled out", {"infection"}, small_triggers()),
            std::vector<bool>{true});
}

TEST(Negation, TerminatorEndsScope) {
  EXPECT_EQ(flags_for("no fever but cough persists", {"fever", "cough"}, small_triggers()),
            (std::vector<bool>{true, false}));
}

TEST(Negation, WindowBoundary) {
  // The target must start within `window` tokens after the trigger.
  const auto t = small_triggers();
  EXPECT_EQ(flags_for("no a b c d fever", {"fever"}, t, 5), std::vector<bool>{true});
  EXPECT_EQ(flags_for("no a b c d e fever", {"fever"}, t, 5), std::vector<bool>{false});
  EXPECT_EQ(flags_for("fever a b c d ruled out", {"fever"}, t, 5), std::vector<bool>{true});
  EXPECT_EQ(flags_for("fever a b c d e ruled out", {"fever"}, t, 5), std::vector<bool>{false});
}

TEST(Negation, SentenceScope) {
  EXPECT_EQ(flags_for("No rash. Fever present.", {"fever"}, small_triggers()),
            std::vector<bool>{false});
}

TEST(Negation, BundledTriggersOnClinicalPhrases) {
  const auto& t = TriggerSet::defaults();
  EXPECT_EQ(flags_for("Patient does not have diabetes", {"diabetes"}, t),
            std::vector<bool>{true});
  EXPECT_EQ(flags_for("Pneumonia was not ruled out", {"pneumonia"}, t),
            std::vector<bool>{false});
  EXPECT_EQ(flags_for("Pneumonia was ruled out", {"pneumonia"}, t), std::vector<bool>{true});
  EXPECT_EQ(flags_for("EEG was normal", {"eeg"}, t), std::vector<bool>{false});
  EXPECT_EQ(flags_for("Gram negative rods, no fever", {"rods", "fever"}, t),
            (std::vector<bool>{false, true}));
}

TEST(Negation, FlagNegatedUsesCharacterOffsets) {
  const std::string text = "Denies chest pain. Reports palpitations.";
  const auto nt = tokenize(text);
  std::vector<Match> ms(2);
  ms[0].start_char = 7;
  ms[0].end_char = 17;
  ms[1].start_char = 27;
  ms[1].end_char = 39;
  const auto out = flag_negated(ms, nt, TriggerSet::defaults());
  EXPECT_TRUE(out[0].negated);
  EXPECT_FALSE(out[1].negated);
  EXPECT_EQ(out[0].start_char, 7u);
  EXPECT_EQ(out[1].end_char, 39u);
}

// Independent scope check written from the rule's definition.
std::vector<bool> brute_force_flags(const std::vector<std::string>& toks,
                                    const std::vector<std::size_t>& sentence_of,
                                    const std::vector<TokenRange>& targets,
                                    const TriggerSet& t, std::size_t window) {
  auto occurs = [&](const TokenSequence& seq, std::size_t at) {
    if (at + seq.size() > toks.size()) return false;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      if (toks[at + k] != seq[k] || sentence_of[at + k] != sentence_of[at]) return false;
    }
    return true;
  };
  std::vector<bool> masked(toks.size(), false);
  for (const auto& seq : t.pseudo) {
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (occurs(seq, i)) {
        for (std::size_t k = 0; k < seq.size(); ++k) masked[i + k] = true;
      }
    }
  }
  auto clean = [&](const TokenSequence& seq, std::size_t at) {
    for (std::size_t k = 0; k < seq.size(); ++k) {
      if (masked[at + k]) return false;
    }
    return true;
  };
  auto terminated = [&](std::size_t from, std::size_t to) {
    for (const auto& seq : t.terminators) {
      for (std::size_t i = from; i + seq.size() <= to; ++i) {
        if (occurs(seq, i)) return true;
      }
    }
    return false;
  };
  std::vector<bool> out;
  for (const auto& tr : targets) {
    bool neg = false;
    for (const auto& seq : t.pre_negation) {
      for (std::size_t i = 0; i < toks.size() && !neg; ++i) {
        if (!occurs(seq, i) || !clean(seq, i)) continue;
        const std::size_t end = i + seq.size();
        if (sentence_of[i] != sentence_of[tr.begin] || end > tr.begin) continue;
        if (tr.begin - end + 1 <= window && !terminated(end, tr.begin)) neg = true;
      }
    }
    for (const auto& seq : t.post_negation) {
      for (std::size_t i = 0; i < toks.size() && !neg; ++i) {
        if (!occurs(seq, i) || !clean(seq, i)) continue;
        if (sentence_of[i] != sentence_of[tr.begin] || i < tr.end) continue;
        if (i - tr.end + 1 <= window && !terminated(tr.end, i)) neg = true;
      }
    }
    out.push_back(neg);
  }
  return out;
}

TEST(Negation, ScopeProperties) {
  std::mt19937 rng(41);
  const std::vector<std::string> vocab = {"x", "y", "z", "no", "not", "ruled", "out", "but"};
  const auto triggers = small_triggers();
  auto extended = triggers;
  extended.pseudo.push_back({"no", "x"});
  TriggerSet empty_triggers = triggers;
  empty_triggers.pre_negation.clear();
  empty_triggers.post_negation.clear();

  for (int iter = 0; iter < 500; ++iter) {
    std::string text;
    const auto n = testing::uniform(rng, 1, 20);
    for (std::size_t i = 0; i < n; ++i) {
      text += testing::pick(rng, vocab);
      text += testing::uniform(rng, 0, 6) == 0 ? ". " : " ";
    }
    const auto nt = tokenize(text);
    std::vector<std::size_t> sentence_of(nt.tokens.size());
    const auto sentences = split_sentences(nt);
    for (std::size_t s = 0; s < sentences.size(); ++s) {
      for (auto i = sentences[s].begin; i < sentences[s].end; ++i) sentence_of[i] = s;
    }
    std::vector<TokenRange> targets;
    for (std::size_t i = 0; i < nt.tokens.size(); ++i) {
      if (nt.tokens[i] == "x" || nt.tokens[i] == "y") targets.push_back({i, i + 1});
    }
    const std::size_t window = testing::uniform(rng, 1, 6);
    const auto got = negated_flags(targets, nt, triggers, window);
    ASSERT_EQ(got, brute_force_flags(nt.tokens, sentence_of, targets, triggers, window)) << text;

    const auto masked_more = negated_flags(targets, nt, extended, window);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      ASSERT_LE(masked_more[k], got[k]) << text;
    }
    for (const bool f : negated_flags(targets, nt, empty_triggers, window)) ASSERT_FALSE(f);
  }
}

}  // namespace
}  // namespace cmine
