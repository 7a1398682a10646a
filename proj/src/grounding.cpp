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

#include "charground/grounding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "charground/error.hpp"
#include "charground/ranking.hpp"

namespace charground {

const char* to_string(SimilarityMethod method) {
  return method == SimilarityMethod::kEmbedding ? "embed" : "dist";
}

std::optional<SimilarityMethod> parse_method(std::string_view text) {
  if (text == "dist") return SimilarityMethod::kDistributional;
  if (text == "embed") return SimilarityMethod::kEmbedding;
  return std::nullopt;
}

void GroundingConfig::validate() const {
  if (!(plural_threshold >= 0 && plural_threshold <= 1)) {
    throw_parameter("plural threshold must lie in [0, 1]");
  }
}

std::vector<std::uint8_t> presence_vector(const TextChain& chain, std::size_t C) {
  std::vector<std::uint8_t> out(C, 0);
  for (const Mention& m : chain.mentions) {
    if (m.sentence_index >= C) {
      throw_data("chain " + chain.chain_id + " has a mention outside the story");
    }
    out[m.sentence_index] = 1;
  }
  return out;
}

std::vector<std::uint8_t> presence_vector(const VisualChain& chain, std::size_t C) {
  std::vector<std::uint8_t> out(C, 0);
  for (const FaceInstance& f : chain.faces) {
    if (f.image_index >= C) {
      throw_data("chain " + chain.chain_id + " has a face outside the story");
    }
    out[f.image_index] = 1;
  }
  return out;
}

double distributional_similarity(std::span<const std::uint8_t> t,
                                 std::span<const std::uint8_t> v) {
  if (t.size() != v.size()) throw_parameter("presence vectors differ in length");
  std::size_t dot = 0;
  std::size_t t_norm = 0;
  std::size_t v_norm = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    dot += static_cast<std::size_t>(t[k] && v[k]);
    t_norm += t[k] ? 1 : 0;
    v_norm += v[k] ? 1 : 0;
  }
  if (t_norm == 0 || v_norm == 0) throw_parameter("zero presence vector");
  return static_cast<double>(dot) / static_cast<double>(t_norm * v_norm);
}

double embedding_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw_data("embedding dimension mismatch");
  double dot = 0;
  double na = 0;
  double nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) throw_data("zero-norm embedding vector");
  const double cosine = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp((cosine + 1.0) / 2.0, 0.0, 1.0);
}

double embedding_chain_similarity(
    std::span<const std::vector<float>> text_vectors,
    std::span<const std::vector<float>> visual_vectors) {
  if (text_vectors.empty() || visual_vectors.empty()) {
    throw_parameter("chain similarity needs non-empty chains");
  }
  double total = 0;
  for (const auto& t : text_vectors) {
    for (const auto& v : visual_vectors) total += embedding_similarity(t, v);
  }
  return total / static_cast<double>(text_vectors.size() * visual_vectors.size());
}

std::vector<std::size_t> singular_indices(std::span<const TextChain> chains) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    if (chains[i].is_singular()) out.push_back(i);
  }
  return out;
}

namespace {

std::vector<std::vector<float>> text_vectors(const TextChain& chain,
                                             const EmbeddingTable* embeddings) {
  std::vector<std::vector<float>> out;
  for (const Mention& m : chain.mentions) {
    const std::vector<float>* vec = embeddings ? embeddings->mention(m.surface) : nullptr;
    if (!vec) {
      throw_data("missing mention embedding for '" + m.surface + "' in chain " +
                 chain.chain_id);
    }
    out.push_back(*vec);
  }
  return out;
}

std::vector<std::vector<float>> visual_vectors(const VisualChain& chain,
                                               const EmbeddingTable* embeddings) {
  std::vector<std::vector<float>> out;
  for (const FaceInstance& f : chain.faces) {
    if (!f.embedding.empty()) {
      out.push_back(f.embedding);
      continue;
    }
    const std::vector<float>* vec =
        embeddings ? embeddings->face(f.image_index, f.box) : nullptr;
    if (!vec) throw_data("missing face embedding in chain " + chain.chain_id);
    out.push_back(*vec);
  }
  return out;
}

}  // namespace

double chain_similarity(const TextChain& text, const VisualChain& visual,
                        std::size_t C, const EmbeddingTable* embeddings,
                        SimilarityMethod method) {
  if (method == SimilarityMethod::kDistributional) {
    return distributional_similarity(presence_vector(text, C),
                                     presence_vector(visual, C));
  }
  const auto t = text_vectors(text, embeddings);
  const auto v = visual_vectors(visual, embeddings);
  return embedding_chain_similarity(t, v);
}

SimilarityMatrix build_similarity_matrix(std::span<const TextChain> text_chains,
                                         std::span<const VisualChain> visual_chains,
                                         std::size_t C,
                                         const EmbeddingTable* embeddings,
                                         const GroundingConfig& cfg) {
  cfg.validate();
  const std::vector<std::size_t> rows = singular_indices(text_chains);
  SimilarityMatrix matrix(rows.size(), visual_chains.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < visual_chains.size(); ++c) {
      matrix.at(r, c) = chain_similarity(text_chains[rows[r]], visual_chains[c], C,
                                         embeddings, cfg.method);
    }
  }
  return matrix;
}

std::vector<Alignment::Attachment> attach_plural_group(
    std::span<const TextChain> text_chains,
    std::span<const VisualChain> visual_chains, std::size_t C,
    const EmbeddingTable* embeddings, const GroundingConfig& cfg,
    std::span<const std::size_t> matched_visual) {
  cfg.validate();
  const std::set<std::size_t> matched(matched_visual.begin(), matched_visual.end());
  std::vector<Alignment::Attachment> out;
  for (std::size_t v = 0; v < visual_chains.size(); ++v) {
    if (matched.count(v)) continue;
    std::optional<Alignment::Attachment> best;
    for (std::size_t t = 0; t < text_chains.size(); ++t) {
      if (text_chains[t].is_singular()) continue;
      const double score = chain_similarity(text_chains[t], visual_chains[v], C,
                                            embeddings, cfg.method);
      if (!best || score > best->score) best = Alignment::Attachment{v, t, score};
    }
    if (best && best->score > cfg.plural_threshold) out.push_back(*best);
  }
  return out;
}

Alignment ground(std::span<const TextChain> text_chains,
                 std::span<const VisualChain> visual_chains, std::size_t C,
                 const EmbeddingTable* embeddings, const GroundingConfig& cfg) {
  const SimilarityMatrix matrix =
      build_similarity_matrix(text_chains, visual_chains, C, embeddings, cfg);
  const std::vector<std::size_t> rows = singular_indices(text_chains);

  Alignment alignment;
  std::vector<std::size_t> matched;
  for (const auto& [r, c] : kuhn_munkres(matrix)) {
    const double score = matrix.at(r, c);
    if (cfg.drop_zero_similarity && score <= 0) continue;
    alignment.pairs.push_back({rows[r], c, score});
    matched.push_back(c);
  }
  alignment.plural_attachments = attach_plural_group(text_chains, visual_chains, C,
                                                     embeddings, cfg, matched);
  return alignment;
}

std::vector<MultiModalChain> assemble_multimodal(
    std::span<const TextChain> text_chains,
    std::span<const VisualChain> visual_chains, const Alignment& alignment) {
  std::vector<bool> text_used(text_chains.size(), false);
  std::vector<bool> visual_used(visual_chains.size(), false);
  std::vector<MultiModalChain> out;

  for (const auto& p : alignment.pairs) {
    if (p.text_index >= text_chains.size() || p.visual_index >= visual_chains.size()) {
      throw_parameter("alignment index out of range");
    }
    text_used[p.text_index] = true;
    visual_used[p.visual_index] = true;
    out.push_back(make_multimodal("", text_chains[p.text_index],
                                  {&visual_chains[p.visual_index]}));
  }

  std::vector<std::vector<const VisualChain*>> attached(text_chains.size());
  for (const auto& a : alignment.plural_attachments) {
    if (a.text_index >= text_chains.size() || a.visual_index >= visual_chains.size()) {
      throw_parameter("plural attachment index out of range");
    }
    if (visual_used[a.visual_index]) continue;
    visual_used[a.visual_index] = true;
    attached[a.text_index].push_back(&visual_chains[a.visual_index]);
  }
  for (std::size_t t = 0; t < text_chains.size(); ++t) {
    if (attached[t].empty()) continue;
    text_used[t] = true;
    std::sort(attached[t].begin(), attached[t].end());
    out.push_back(make_multimodal("", text_chains[t], attached[t]));
  }

  for (std::size_t t = 0; t < text_chains.size(); ++t) {
    if (!text_used[t]) out.push_back(make_multimodal("", text_chains[t], {}));
  }
  for (std::size_t v = 0; v < visual_chains.size(); ++v) {
    if (!visual_used[v]) {
      out.push_back(make_multimodal("", std::nullopt, {&visual_chains[v]}));
    }
  }
  sort_by_rank(out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].chain_id = "M" + std::to_string(i);
  return out;
}

}  // namespace charground
