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

// Visual co-reference: k-means over face embeddings with the number of
// characters chosen by the Calinski-Harabasz index.

#ifndef CHARGROUND_VISUALCHARS_HPP_
#define CHARGROUND_VISUALCHARS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "charground/model.hpp"

namespace charground {

struct ClusteringConfig {
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::size_t max_iterations = 100;
  double tolerance = 1e-6;  // minimum inertia decrease per iteration
  std::uint64_t seed = 0;
  std::size_t restarts = 8;

  /// Throws a parameter error unless 1 <= k_min <= k_max, max_iterations >= 1
  /// and restarts >= 1.
  void validate() const;
};

/// Deterministic 64-bit generator (SplitMix64). Used instead of <random>
/// distributions so streams are identical across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();

 private:
  std::uint64_t state_;
};

using Embedding = std::vector<float>;

struct KMeansResult {
  std::vector<std::size_t> labels;
  double inertia = 0;
  std::vector<std::vector<double>> centroids;
  /// Inertia after every centroid update of the winning restart.
  std::vector<double> inertia_trace;
};

/// Lloyd's algorithm with k-means++ seeding, best of `cfg.restarts` runs.
/// Every returned cluster is non-empty. Throws a parameter error if k == 0 or
/// k exceeds the number of points.
KMeansResult kmeans(std::span<const Embedding> points, std::size_t k,
                    const ClusteringConfig& cfg);

/// Sum of squared distances from each point to the mean of its cluster.
double within_cluster_dispersion(std::span<const Embedding> points,
                                 std::span<const std::size_t> labels);

/// CH = [B / (k - 1)] / [W / (n - k)]. Returns +inf when W = 0 < B; throws a
/// parameter error for k < 2 or k >= n and a data error when W = B = 0.
double calinski_harabasz(std::span<const Embedding> points,
                         std::span<const std::size_t> labels);

/// Groups faces into visual chains, trying k in [k_min, min(k_max, n - 1)]
/// and keeping the k with the highest CH score (smallest k on ties).
std::vector<VisualChain> cluster_faces(std::span<const FaceInstance> faces,
                                       const ClusteringConfig& cfg);

/// Sorts faces and chains by first appearance and assigns ids "V0", ...
void normalize_visual_chains(std::vector<VisualChain>& chains);

}  // namespace charground

#endif  // CHARGROUND_VISUALCHARS_HPP_
