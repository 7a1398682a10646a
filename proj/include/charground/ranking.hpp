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

// Count-based character importance and ranking.

#ifndef CHARGROUND_RANKING_HPP_
#define CHARGROUND_RANKING_HPP_

#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "charground/model.hpp"

namespace charground {

/// Number of mentions plus number of faces.
std::size_t importance_score(const MultiModalChain& chain);

/// (sentence, token start, image, box x) of the earliest mention and face;
/// absent sides sort last.
using OccurrenceKey = std::tuple<std::size_t, std::size_t, std::size_t, double>;
OccurrenceKey first_occurrence(const MultiModalChain& chain);

/// Stable sort by importance descending, then first occurrence.
void sort_by_rank(std::vector<MultiModalChain>& chains);

std::vector<std::string> rank_characters(std::span<const MultiModalChain> chains);

/// Throws a parameter error on empty input.
std::string protagonist(std::span<const MultiModalChain> chains);

/// Characters for a single modality (text chains only, visual chains only)
/// or the grounded multimodal set, in rank order with ids "M0", ...
/// `alignment` is required for Modality::kMulti.
std::vector<MultiModalChain> build_characters(Modality modality,
                                              std::span<const TextChain> text_chains,
                                              std::span<const VisualChain> visual_chains,
                                              const Alignment* alignment);

}  // namespace charground

#endif  // CHARGROUND_RANKING_HPP_
