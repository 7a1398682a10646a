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

// Character grounding: align textual chains with visual chains by maximum
// weight bipartite matching over a chain similarity matrix, then attach
// visual chains to plural and group characters.

#ifndef CHARGROUND_GROUNDING_HPP_
#define CHARGROUND_GROUNDING_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "charground/model.hpp"

namespace charground {

enum class SimilarityMethod { kDistributional, kEmbedding };

const char* to_string(SimilarityMethod method);
std::optional<SimilarityMethod> parse_method(std::string_view text);

struct GroundingConfig {
  SimilarityMethod method = SimilarityMethod::kDistributional;
  double plural_threshold = 0.6;  // attachment needs score > threshold
  bool drop_zero_similarity = true;

  void validate() const;
};

/// Binary occupancy over the C sentences (text) or images (visual).
std::vector<std::uint8_t> presence_vector(const TextChain& chain, std::size_t C);
std::vector<std::uint8_t> presence_vector(const VisualChain& chain, std::size_t C);

/// (t . v) / (|t|_1 |v|_1). Throws a parameter error on a zero vector or a
/// length mismatch.
double distributional_similarity(std::span<const std::uint8_t> t,
                                 std::span<const std::uint8_t> v);

/// Cosine mapped to [0, 1] via (cos + 1) / 2.
double embedding_similarity(std::span<const float> a, std::span<const float> b);

/// Mean pairwise embedding_similarity over all |T| x |V| pairs.
double embedding_chain_similarity(std::span<const std::vector<float>> text_vectors,
                                  std::span<const std::vector<float>> visual_vectors);

/// Indices of the singular text chains, in order.
std::vector<std::size_t> singular_indices(std::span<const TextChain> chains);

/// Similarity of one text chain to one visual chain under `method`. The
/// embedding method looks up mention vectors by surface and face vectors by
/// the face's own embedding, falling back to `embeddings`.
double chain_similarity(const TextChain& text, const VisualChain& visual,
                        std::size_t C, const EmbeddingTable* embeddings,
                        SimilarityMethod method);

/// Rows are the singular text chains (see singular_indices), columns the
/// visual chains.
SimilarityMatrix build_similarity_matrix(std::span<const TextChain> text_chains,
                                         std::span<const VisualChain> visual_chains,
                                         std::size_t C,
                                         const EmbeddingTable* embeddings,
                                         const GroundingConfig& cfg);

/// Maximum total similarity matching of size min(rows, cols), as (row, col)
/// pairs sorted by row.
std::vector<std::pair<std::size_t, std::size_t>> kuhn_munkres(
    const SimilarityMatrix& matrix);

/// For each visual chain not in `matched_visual`, picks the best plural or
/// group text chain and attaches it when the score exceeds the threshold.
std::vector<Alignment::Attachment> attach_plural_group(
    std::span<const TextChain> text_chains,
    std::span<const VisualChain> visual_chains, std::size_t C,
    const EmbeddingTable* embeddings, const GroundingConfig& cfg,
    std::span<const std::size_t> matched_visual);

/// Singular matching followed by plural/group attachment.
Alignment ground(std::span<const TextChain> text_chains,
                 std::span<const VisualChain> visual_chains, std::size_t C,
                 const EmbeddingTable* embeddings, const GroundingConfig& cfg);

/// Builds characters from an alignment: one per accepted pair, plural/group
/// chains merged with their attached visual chains, and every remaining
/// chain as a uni-modal character. Sorted by importance, ids "M0", ...
std::vector<MultiModalChain> assemble_multimodal(
    std::span<const TextChain> text_chains,
    std::span<const VisualChain> visual_chains, const Alignment& alignment);

}  // namespace charground

#endif  // CHARGROUND_GROUNDING_HPP_
