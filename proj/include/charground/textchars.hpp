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

// Character mention detection in story text and textual co-reference.

#ifndef CHARGROUND_TEXTCHARS_HPP_
#define CHARGROUND_TEXTCHARS_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "charground/model.hpp"

namespace charground {

/// Noun lemmas accepted as characters plus collective nouns. Both sets hold
/// lowercase entries; lookups are case-insensitive.
struct CharacterLexicon {
  std::unordered_set<std::string> words;
  std::unordered_set<std::string> group_words;

  /// One lemma per line, '#' starts a comment.
  static CharacterLexicon load(const std::filesystem::path& words_file,
                               const std::filesystem::path& group_words_file);
  static std::unordered_set<std::string> parse_word_list(std::string_view text);

  /// True when the token (or, for NNS/NNPS, a singular form of it) is in
  /// `words`.
  bool is_character_noun(std::string_view text, std::string_view pos) const;
  bool is_group_word(std::string_view text) const;
};

bool is_noun_tag(std::string_view pos);
bool is_plural_noun_tag(std::string_view pos);
bool is_pronoun_tag(std::string_view pos);
bool is_plural_pronoun(std::string_view surface);

/// Candidate singular forms of an English plural noun, most specific first.
std::vector<std::string> singular_candidates(std::string_view plural);

/// Number class and kind a single token would receive as a mention.
std::pair<Number, MentionKind> classify_token(const Token& token,
                                              const CharacterLexicon& lexicon);

/// Pronouns, lexicon nouns and group words of the story, in story order.
std::vector<Mention> detect_mentions(const AnnotatedStory& story,
                                     const CharacterLexicon& lexicon);

/// Deterministic stand-in for a neural resolver: equal noun heads share a
/// chain; a pronoun joins the chain of the nearest preceding noun mention
/// with a compatible number class.
std::vector<TextChain> heuristic_coref(std::span<const Mention> mentions);

struct ExternalCoref {
  struct TokenRef {
    std::size_t sentence_index = 0;
    std::size_t token_index = 0;
    bool operator==(const TokenRef&) const = default;
  };
  std::vector<std::vector<TokenRef>> chains;

  bool operator==(const ExternalCoref&) const = default;
};

/// Converts chains produced by an external resolver. Detected mentions left
/// uncovered by any external chain are appended as singletons.
std::vector<TextChain> ingest_external_coref(const AnnotatedStory& story,
                                             const ExternalCoref& external,
                                             const CharacterLexicon& lexicon);

/// Index of the head token of a mention: the rightmost noun token of the
/// span, else the rightmost pronoun, else the last token.
std::size_t head_token(const AnnotatedStory& story, const Mention& mention);
/// Lowercase text of the head token.
std::string head_word(const AnnotatedStory& story, const Mention& mention);

/// Sorts mentions and chains into story order, recomputes chain numbers and
/// assigns ids "T0", "T1", ...
void normalize_text_chains(std::vector<TextChain>& chains);

}  // namespace charground

#endif  // CHARGROUND_TEXTCHARS_HPP_
