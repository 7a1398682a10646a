// Copyright 2026 The CharGround Authors.
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

#include "charground/textchars.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "charground/error.hpp"
#include "test_util.hpp"

namespace charground {
namespace {

using testing::make_story;

CharacterLexicon lexicon(std::initializer_list<const char*> words,
                         std::initializer_list<const char*> group = {}) {
  CharacterLexicon lex;
  for (const char* w : words) lex.words.insert(w);
  for (const char* g : group) lex.group_words.insert(g);
  return lex;
}

std::vector<std::string> surfaces(const TextChain& c) {
  std::vector<std::string> out;
  for (const Mention& m : c.mentions) out.push_back(m.surface);
  return out;
}

TEST(DetectMentions, NounsPronounsAndPlurals) {
  const auto story = make_story(
      {{{"the", "DT"}, {"man", "NN"}, {"walked", "VBD"}, {"his", "PRP$"}, {"dogs", "NNS"}}});
  const auto m = detect_mentions(story, lexicon({"man", "dog"}));
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].surface, "man");
  EXPECT_EQ(m[0].number, Number::kSingular);
  EXPECT_EQ(m[0].kind, MentionKind::kNoun);
  EXPECT_EQ(m[1].surface, "his");
  EXPECT_EQ(m[1].number, Number::kSingular);
  EXPECT_EQ(m[1].kind, MentionKind::kPronoun);
  EXPECT_EQ(m[2].surface, "dogs");
  EXPECT_EQ(m[2].number, Number::kPlural);
  EXPECT_EQ(m[2].kind, MentionKind::kNoun);
}

TEST(DetectMentions, GroupWord) {
  const auto story = make_story({{{"the", "DT"}, {"family", "NN"}, {"ate", "VBD"}}});
  const auto m = detect_mentions(story, lexicon({"man"}, {"family", "team"}));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].surface, "family");
  EXPECT_EQ(m[0].number, Number::kGroup);
  EXPECT_EQ(m[0].kind, MentionKind::kNoun);
}

TEST(DetectMentions, NoCharacters) {
  const auto story = make_story({{{"blue", "JJ"}, {"sky", "NN"}}});
  EXPECT_TRUE(detect_mentions(story, lexicon({"man"})).empty());
}

TEST(DetectMentions, WordInBothListsIsEmittedOnceAsGroup) {
  const auto story = make_story({{{"family", "NN"}}});
  const auto m = detect_mentions(story, lexicon({"family"}, {"family"}));
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].number, Number::kGroup);
}

TEST(DetectMentions, PluralPronounsAndCaseInsensitiveLexicon) {
  const auto story =
      make_story({{{"They", "PRP"}, {"saw", "VBD"}, {"Man", "NN"}, {"us", "PRP"}}});
  const auto m = detect_mentions(story, lexicon({"man"}));
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].number, Number::kPlural);
  EXPECT_EQ(m[1].surface, "Man");
  EXPECT_EQ(m[2].number, Number::kPlural);
}

TEST(DetectMentions, NonNounTagIsIgnoredEvenIfInLexicon) {
  const auto story = make_story({{{"man", "VB"}, {"the", "DT"}, {"boat", "NN"}}});
  EXPECT_TRUE(detect_mentions(story, lexicon({"man"})).empty());
}

TEST(DetectMentions, Idempotent) {
  const auto story = make_story({{{"a", "DT"}, {"man", "NN"}}, {{"he", "PRP"}}});
  const auto lex = lexicon({"man"});
  EXPECT_EQ(detect_mentions(story, lex), detect_mentions(story, lex));
}

TEST(SingularCandidates, RegularAndIrregular) {
  auto has = [](const std::string& plural, const std::string& singular) {
    const auto c = singular_candidates(plural);
    return std::find(c.begin(), c.end(), singular) != c.end();
  };
  EXPECT_TRUE(has("dogs", "dog"));
  EXPECT_TRUE(has("women", "woman"));
  EXPECT_TRUE(has("ladies", "lady"));
  EXPECT_TRUE(has("wolves", "wolf"));
  EXPECT_TRUE(has("wives", "wife"));
  EXPECT_TRUE(has("buses", "bus"));
  EXPECT_TRUE(has("people", "person"));
  EXPECT_TRUE(has("children", "child"));
  EXPECT_FALSE(has("glass", "glas"));
}

TEST(HeuristicCoref, RepeatedNounWithPronoun) {
  using testing::mention;
  Mention he = mention(1, 0, "he");
  he.kind = MentionKind::kPronoun;
  const auto chains = heuristic_coref(std::vector{mention(0, 0, "man"), he, mention(2, 0, "man")});
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(surfaces(chains[0]), (std::vector<std::string>{"man", "he", "man"}));
  EXPECT_EQ(chains[0].number, Number::kSingular);
}

TEST(HeuristicCoref, PluralPronounSkipsSingularChain) {
  using testing::mention;
  Mention they = mention(2, 0, "they", Number::kPlural);
  they.kind = MentionKind::kPronoun;
  const auto chains = heuristic_coref(
      std::vector{mention(0, 0, "man"), mention(1, 0, "dogs", Number::kPlural), they});
  ASSERT_EQ(chains.size(), 2u);
  EXPECT_EQ(surfaces(chains[0]), (std::vector<std::string>{"man"}));
  EXPECT_EQ(surfaces(chains[1]), (std::vector<std::string>{"dogs", "they"}));
  EXPECT_EQ(chains[1].number, Number::kPlural);
}

TEST(HeuristicCoref, PluralPronounJoinsGroupChain) {
  using testing::mention;
  Mention they = mention(1, 0, "they", Number::kPlural);
  they.kind = MentionKind::kPronoun;
  const auto chains =
      heuristic_coref(std::vector{mention(0, 0, "team", Number::kGroup), they});
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].number, Number::kGroup);
}

TEST(HeuristicCoref, PronounWithoutAntecedent) {
  using testing::mention;
  Mention he = mention(0, 0, "he");
  he.kind = MentionKind::kPronoun;
  const auto chains = heuristic_coref(std::vector{he});
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(surfaces(chains[0]), (std::vector<std::string>{"he"}));
}

// Every mention lands in exactly one chain, chains are internally ordered and
// listed by first mention.
TEST(HeuristicCoref, PartitionProperty) {
  const char* nouns[] = {"man", "woman", "dog", "boy"};
  const char* pronouns[] = {"he", "she", "they", "it"};
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Mention> mentions;
    std::set<std::pair<std::size_t, std::size_t>> used;
    const int n = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      const std::size_t s = rng() % 5;
      const std::size_t t = rng() % 6;
      if (!used.emplace(s, t).second) continue;
      Mention m = testing::mention(s, t);
      if (rng() % 2) {
        m.surface = nouns[rng() % 4];
        m.number = rng() % 3 == 0 ? Number::kPlural : Number::kSingular;
      } else {
        m.surface = pronouns[rng() % 4];
        m.kind = MentionKind::kPronoun;
        m.number = m.surface == "they" ? Number::kPlural : Number::kSingular;
      }
      mentions.push_back(m);
    }
    std::shuffle(mentions.begin(), mentions.end(), rng);
    const auto chains = heuristic_coref(mentions);
    std::multiset<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      EXPECT_EQ(chains[c].chain_id, "T" + std::to_string(c));
      EXPECT_TRUE(std::is_sorted(chains[c].mentions.begin(), chains[c].mentions.end(),
                                 mention_before));
      if (c > 0) {
        EXPECT_TRUE(mention_before(chains[c - 1].mentions.front(), chains[c].mentions.front()));
      }
      for (const Mention& m : chains[c].mentions) seen.emplace(m.sentence_index, m.token_start);
    }
    EXPECT_EQ(seen.size(), mentions.size());
    EXPECT_EQ(std::set(seen.begin(), seen.end()).size(), mentions.size());
  }
}

AnnotatedStory coref_story() {
  return make_story({{{"the", "DT"}, {"man", "NN"}, {"smiled", "VBD"}},
                     {{"he", "PRP"}, {"saw", "VBD"}, {"a", "DT"}, {"dog", "NN"}},
                     {{"x", "NN"}},
                     {{"x", "NN"}},
                     {{"x", "NN"}}});
}

TEST(ExternalCoref, DirectIngestion) {
  ExternalCoref ext;
  ext.chains = {{{0, 1}, {1, 0}}};
  const auto chains = ingest_external_coref(coref_story(), ext, lexicon({"man"}));
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(surfaces(chains[0]), (std::vector<std::string>{"man", "he"}));
  EXPECT_EQ(chains[0].number, Number::kSingular);
}

TEST(ExternalCoref, NonexistentSentenceIsASpanError) {
  ExternalCoref ext;
  ext.chains = {{{9, 0}}};
  try {
    ingest_external_coref(coref_story(), ext, lexicon({"man"}));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
    EXPECT_NE(std::string(e.what()).find("sentence 9"), std::string::npos);
  }
}

TEST(ExternalCoref, UncoveredMentionsBecomeSingletons) {
  ExternalCoref ext;
  ext.chains = {{{0, 1}, {1, 0}}};  // covers man, he; dog is left over
  const auto chains = ingest_external_coref(coref_story(), ext, lexicon({"man", "dog"}));
  ASSERT_EQ(chains.size(), 2u);
  EXPECT_EQ(surfaces(chains[1]), (std::vector<std::string>{"dog"}));
}

TEST(ExternalCoref, DuplicateSpanRejected) {
  ExternalCoref ext;
  ext.chains = {{{0, 1}}, {{0, 1}}};
  EXPECT_THROW(ingest_external_coref(coref_story(), ext, lexicon({"man"})), Error);
}

TEST(HeadWord, RightmostNounElsePronoun) {
  const auto story = make_story({{{"his", "PRP$"}, {"old", "JJ"}, {"Dog", "NN"}, {"ran", "VBD"}}});
  Mention m = testing::mention(0, 0);
  m.token_end = 3;
  EXPECT_EQ(head_token(story, m), 2u);
  EXPECT_EQ(head_word(story, m), "dog");
  m.token_end = 2;
  EXPECT_EQ(head_word(story, m), "his");
}

TEST(Lexicon, ParseWordListSkipsCommentsAndBlankLines) {
  const auto words = CharacterLexicon::parse_word_list("# header\nMan\n\n  dog  # pet\n");
  EXPECT_EQ(words, (std::unordered_set<std::string>{"man", "dog"}));
}

TEST(Lexicon, ShippedFilesContainCoreWords) {
  const auto lex = CharacterLexicon::load(CHARGROUND_DATA_DIR "/lexicon/characters.txt",
                                          CHARGROUND_DATA_DIR "/lexicon/group_words.txt");
  for (const char* w : {"man", "woman", "dog", "girl", "boy", "friend"}) {
    EXPECT_TRUE(lex.words.count(w)) << w;
  }
  for (const char* w : {"team", "class", "club", "crowd", "gang", "family"}) {
    EXPECT_TRUE(lex.group_words.count(w)) << w;
  }
  EXPECT_FALSE(lex.words.count("sky"));
}

TEST(Lexicon, MissingFileIsIoError) {
  try {
    CharacterLexicon::load("/nonexistent/words.txt", "/nonexistent/group.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace
}  // namespace charground
