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
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "charground/error.hpp"

namespace charground {

namespace {

constexpr std::array<std::string_view, 8> kPluralPronouns = {
    "they", "them", "their", "theirs", "we", "us", "our", "ours"};

struct IrregularPlural {
  std::string_view plural;
  std::string_view singular;
};

constexpr std::array<IrregularPlural, 9> kIrregularPlurals = {{
    {"people", "person"},
    {"children", "child"},
    {"feet", "foot"},
    {"teeth", "tooth"},
    {"geese", "goose"},
    {"mice", "mouse"},
    {"oxen", "ox"},
    {"wolves", "wolf"},
    {"calves", "calf"},
}};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::unordered_set<std::string> CharacterLexicon::parse_word_list(
    std::string_view text) {
  std::unordered_set<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    if (!line.empty()) out.insert(to_lower(line));
    pos = eol + 1;
  }
  return out;
}

CharacterLexicon CharacterLexicon::load(
    const std::filesystem::path& words_file,
    const std::filesystem::path& group_words_file) {
  CharacterLexicon lexicon;
  lexicon.words = parse_word_list(read_file(words_file));
  lexicon.group_words = parse_word_list(read_file(group_words_file));
  return lexicon;
}

bool CharacterLexicon::is_character_noun(std::string_view text,
                                         std::string_view pos) const {
  const std::string lower = to_lower(text);
  if (words.count(lower)) return true;
  if (!is_plural_noun_tag(pos)) return false;
  for (const std::string& s : singular_candidates(lower)) {
    if (words.count(s)) return true;
  }
  return false;
}

bool CharacterLexicon::is_group_word(std::string_view text) const {
  return group_words.count(to_lower(text)) > 0;
}

bool is_noun_tag(std::string_view pos) {
  return pos == "NN" || pos == "NNS" || pos == "NNP" || pos == "NNPS";
}

bool is_plural_noun_tag(std::string_view pos) {
  return pos == "NNS" || pos == "NNPS";
}

bool is_pronoun_tag(std::string_view pos) {
  return pos == "PRP" || pos == "PRP$";
}

bool is_plural_pronoun(std::string_view surface) {
  const std::string lower = to_lower(surface);
  return std::find(kPluralPronouns.begin(), kPluralPronouns.end(), lower) !=
         kPluralPronouns.end();
}

std::vector<std::string> singular_candidates(std::string_view plural) {
  const std::string word = to_lower(plural);
  std::vector<std::string> out;
  for (const auto& irr : kIrregularPlurals) {
    if (word == irr.plural) out.emplace_back(irr.singular);
  }
  const std::string_view w = word;
  if (ends_with(w, "men")) {
    out.push_back(word.substr(0, word.size() - 3) + "man");
  }
  if (ends_with(w, "ies") && word.size() > 3) {
    out.push_back(word.substr(0, word.size() - 3) + "y");
  }
  if (ends_with(w, "ves")) {
    out.push_back(word.substr(0, word.size() - 3) + "f");
    out.push_back(word.substr(0, word.size() - 3) + "fe");
  }
  if (ends_with(w, "es")) out.push_back(word.substr(0, word.size() - 2));
  if (ends_with(w, "s") && !ends_with(w, "ss")) {
    out.push_back(word.substr(0, word.size() - 1));
  }
  return out;
}

std::pair<Number, MentionKind> classify_token(const Token& token,
                                              const CharacterLexicon& lexicon) {
  const MentionKind kind =
      is_pronoun_tag(token.pos) ? MentionKind::kPronoun : MentionKind::kNoun;
  if (lexicon.is_group_word(token.text)) return {Number::kGroup, kind};
  if (kind == MentionKind::kPronoun) {
    return {is_plural_pronoun(token.text) ? Number::kPlural : Number::kSingular,
            kind};
  }
  return {is_plural_noun_tag(token.pos) ? Number::kPlural : Number::kSingular,
          kind};
}

std::vector<Mention> detect_mentions(const AnnotatedStory& story,
                                     const CharacterLexicon& lexicon) {
  std::vector<Mention> out;
  for (const Sentence& sentence : story.sentences) {
    for (std::size_t t = 0; t < sentence.tokens.size(); ++t) {
      const Token& tok = sentence.tokens[t];
      const bool group = lexicon.is_group_word(tok.text);
      const bool pronoun = is_pronoun_tag(tok.pos);
      const bool noun =
          is_noun_tag(tok.pos) && lexicon.is_character_noun(tok.text, tok.pos);
      if (!group && !pronoun && !noun) continue;
      Mention m;
      m.sentence_index = sentence.index;
      m.token_start = t;
      m.token_end = t + 1;
      m.surface = tok.text;
      std::tie(m.number, m.kind) = classify_token(tok, lexicon);
      out.push_back(std::move(m));
    }
  }
  return out;
}

void normalize_text_chains(std::vector<TextChain>& chains) {
  for (TextChain& c : chains) {
    std::stable_sort(c.mentions.begin(), c.mentions.end(), mention_before);
    c.number = chain_number(c.mentions);
  }
  std::erase_if(chains, [](const TextChain& c) { return c.mentions.empty(); });
  std::stable_sort(chains.begin(), chains.end(),
                   [](const TextChain& a, const TextChain& b) {
                     return mention_before(a.mentions.front(), b.mentions.front());
                   });
  for (std::size_t i = 0; i < chains.size(); ++i) {
    chains[i].chain_id = "T" + std::to_string(i);
  }
}

std::vector<TextChain> heuristic_coref(std::span<const Mention> mentions) {
  std::vector<Mention> ordered(mentions.begin(), mentions.end());
  std::stable_sort(ordered.begin(), ordered.end(), mention_before);

  std::vector<TextChain> chains;
  std::map<std::string, std::size_t> chain_of_head;
  // (mention number, chain index) of every noun mention seen so far
  std::vector<std::pair<Number, std::size_t>> nouns;

  for (const Mention& m : ordered) {
    if (m.kind == MentionKind::kNoun) {
      const std::string head = to_lower(m.surface);
      auto [it, inserted] = chain_of_head.try_emplace(head, chains.size());
      if (inserted) chains.emplace_back();
      chains[it->second].mentions.push_back(m);
      nouns.emplace_back(m.number, it->second);
      continue;
    }
    const bool plural_pronoun = m.number != Number::kSingular;
    std::optional<std::size_t> target;
    for (auto it = nouns.rbegin(); it != nouns.rend(); ++it) {
      const bool plural_noun = it->first != Number::kSingular;
      if (plural_noun == plural_pronoun) {
        target = it->second;
        break;
      }
    }
    if (!target) {
      target = chains.size();
      chains.emplace_back();
    }
    chains[*target].mentions.push_back(m);
  }
  normalize_text_chains(chains);
  return chains;
}

std::vector<TextChain> ingest_external_coref(const AnnotatedStory& story,
                                             const ExternalCoref& external,
                                             const CharacterLexicon& lexicon) {
  std::set<std::pair<std::size_t, std::size_t>> covered;
  std::vector<TextChain> chains;
  for (const auto& ext : external.chains) {
    TextChain chain;
    for (const auto& ref : ext) {
      if (ref.sentence_index >= story.length() ||
          ref.token_index >= story.sentences[ref.sentence_index].tokens.size()) {
        throw Error(ErrorCode::kSchema,
                    "external coref references nonexistent span (sentence " +
                        std::to_string(ref.sentence_index) + ", token " +
                        std::to_string(ref.token_index) + ")");
      }
      if (!covered.emplace(ref.sentence_index, ref.token_index).second) {
        throw Error(ErrorCode::kSchema,
                    "external coref lists span twice (sentence " +
                        std::to_string(ref.sentence_index) + ", token " +
                        std::to_string(ref.token_index) + ")");
      }
      const Token& tok = story.sentences[ref.sentence_index].tokens[ref.token_index];
      Mention m;
      m.sentence_index = ref.sentence_index;
      m.token_start = ref.token_index;
      m.token_end = ref.token_index + 1;
      m.surface = tok.text;
      std::tie(m.number, m.kind) = classify_token(tok, lexicon);
      chain.mentions.push_back(std::move(m));
    }
    chains.push_back(std::move(chain));
  }
  for (const Mention& m : detect_mentions(story, lexicon)) {
    if (covered.count({m.sentence_index, m.token_start})) continue;
    TextChain singleton;
    singleton.mentions.push_back(m);
    chains.push_back(std::move(singleton));
  }
  normalize_text_chains(chains);
  return chains;
}

std::size_t head_token(const AnnotatedStory& story, const Mention& mention) {
  const auto& tokens = story.sentences.at(mention.sentence_index).tokens;
  const std::size_t end = std::min(mention.token_end, tokens.size());
  for (std::size_t i = end; i > mention.token_start; --i) {
    if (is_noun_tag(tokens[i - 1].pos)) return i - 1;
  }
  for (std::size_t i = end; i > mention.token_start; --i) {
    if (is_pronoun_tag(tokens[i - 1].pos)) return i - 1;
  }
  return end > mention.token_start ? end - 1 : mention.token_start;
}

std::string head_word(const AnnotatedStory& story, const Mention& mention) {
  const auto& tokens = story.sentences.at(mention.sentence_index).tokens;
  const std::size_t h = head_token(story, mention);
  if (h < tokens.size()) return to_lower(tokens[h].text);
  return to_lower(mention.surface);
}

}  // namespace charground
