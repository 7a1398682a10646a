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

#include "charground/ranking.hpp"

#include <algorithm>
#include <limits>

#include "charground/error.hpp"
#include "charground/grounding.hpp"

namespace charground {

std::size_t importance_score(const MultiModalChain& chain) {
  return (chain.text ? chain.text->mentions.size() : 0) +
         (chain.visual ? chain.visual->faces.size() : 0);
}

OccurrenceKey first_occurrence(const MultiModalChain& chain) {
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  OccurrenceKey key{kNone, kNone, kNone, std::numeric_limits<double>::infinity()};
  if (chain.text && !chain.text->mentions.empty()) {
    const Mention& m = *std::min_element(chain.text->mentions.begin(),
                                         chain.text->mentions.end(), mention_before);
    std::get<0>(key) = m.sentence_index;
    std::get<1>(key) = m.token_start;
  }
  if (chain.visual && !chain.visual->faces.empty()) {
    const FaceInstance& f = *std::min_element(chain.visual->faces.begin(),
                                              chain.visual->faces.end(), face_before);
    std::get<2>(key) = f.image_index;
    std::get<3>(key) = f.box.x;
  }
  return key;
}

void sort_by_rank(std::vector<MultiModalChain>& chains) {
  std::stable_sort(chains.begin(), chains.end(),
                   [](const MultiModalChain& a, const MultiModalChain& b) {
                     const auto ia = importance_score(a);
                     const auto ib = importance_score(b);
                     if (ia != ib) return ia > ib;
                     return first_occurrence(a) < first_occurrence(b);
                   });
}

std::vector<std::string> rank_characters(std::span<const MultiModalChain> chains) {
  std::vector<MultiModalChain> sorted(chains.begin(), chains.end());
  sort_by_rank(sorted);
  std::vector<std::string> ids;
  ids.reserve(sorted.size());
  for (const auto& c : sorted) ids.push_back(c.chain_id);
  return ids;
}

std::string protagonist(std::span<const MultiModalChain> chains) {
  if (chains.empty()) throw_parameter("protagonist of an empty character set");
  return rank_characters(chains).front();
}

std::vector<MultiModalChain> build_characters(Modality modality,
                                              std::span<const TextChain> text_chains,
                                              std::span<const VisualChain> visual_chains,
                                              const Alignment* alignment) {
  std::vector<MultiModalChain> out;
  switch (modality) {
    case Modality::kText:
      for (const TextChain& t : text_chains) out.push_back(make_multimodal("", t, {}));
      break;
    case Modality::kImage:
      for (const VisualChain& v : visual_chains) {
        out.push_back(make_multimodal("", std::nullopt, {&v}));
      }
      break;
    case Modality::kMulti:
      if (!alignment) throw_parameter("multimodal ranking needs an alignment");
      return assemble_multimodal(text_chains, visual_chains, *alignment);
  }
  sort_by_rank(out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].chain_id = "M" + std::to_string(i);
  return out;
}

}  // namespace charground
