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

#include "charground/visualchars.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "charground/error.hpp"

namespace charground {

void ClusteringConfig::validate() const {
  if (k_min < 1) throw_parameter("k_min must be at least 1");
  if (k_min > k_max) throw_parameter("k_min must not exceed k_max");
  if (max_iterations < 1) throw_parameter("max_iterations must be at least 1");
  if (restarts < 1) throw_parameter("restarts must be at least 1");
  if (!(tolerance >= 0)) throw_parameter("tolerance must be non-negative");
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

namespace {

using Centroids = std::vector<std::vector<double>>;

double squared_distance(const Embedding& p, const std::vector<double>& c) {
  double d = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double diff = static_cast<double>(p[i]) - c[i];
    d += diff * diff;
  }
  return d;
}

std::vector<double> to_double(const Embedding& p) {
  return std::vector<double>(p.begin(), p.end());
}

std::size_t check_dimensions(std::span<const Embedding> points) {
  if (points.empty()) return 0;
  const std::size_t dim = points.front().size();
  if (dim == 0) throw_data("empty embedding vector");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) {
      throw_data("embedding dimension mismatch at point " + std::to_string(i));
    }
    for (float v : points[i]) {
      if (!std::isfinite(v)) {
        throw_data("non-finite embedding value at point " + std::to_string(i));
      }
    }
  }
  return dim;
}

// Per-restart stream, derived from (seed, restart, k) only.
std::uint64_t stream_seed(std::uint64_t seed, std::size_t restart,
                          std::size_t k) {
  SplitMix64 mix(seed);
  std::uint64_t s = mix.next();
  s ^= SplitMix64(static_cast<std::uint64_t>(restart) * 0x100000001B3ULL +
                  static_cast<std::uint64_t>(k))
           .next();
  return s;
}

Centroids seed_plus_plus(std::span<const Embedding> points, std::size_t k,
                         SplitMix64& rng) {
  const std::size_t n = points.size();
  Centroids centroids;
  std::vector<bool> chosen(n, false);
  std::size_t first = static_cast<std::size_t>(rng.uniform() * n);
  first = std::min(first, n - 1);
  centroids.push_back(to_double(points[first]));
  chosen[first] = true;

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids[0]);

  while (centroids.size() < k) {
    double total = 0;
    for (double d : d2) total += d;
    std::size_t pick = n;
    if (total > 0) {
      const double r = rng.uniform() * total;
      double acc = 0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (d2[i] > 0 && r < acc) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        // rounding left r past the last positive weight
        for (std::size_t i = n; i > 0; --i) {
          if (d2[i - 1] > 0) {
            pick = i - 1;
            break;
          }
        }
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) {
          pick = i;
          break;
        }
      }
    }
    chosen[pick] = true;
    centroids.push_back(to_double(points[pick]));
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], centroids.back()));
    }
  }
  return centroids;
}

// Assigns each point to its nearest centroid. A point keeps its previous
// label unless another centroid is strictly closer.
void assign(std::span<const Embedding> points, const Centroids& centroids,
            std::vector<std::size_t>& labels, bool initial) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t best = initial ? 0 : labels[i];
    double best_d = squared_distance(points[i], centroids[best]);
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = squared_distance(points[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = best;
  }
}

// Moves the point farthest from its centroid into each empty cluster.
void repair_empty(std::span<const Embedding> points, Centroids& centroids,
                  std::vector<std::size_t>& labels) {
  const std::size_t k = centroids.size();
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t l : labels) ++sizes[l];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] > 0) continue;
    std::size_t victim = points.size();
    double worst = -1;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (sizes[labels[i]] < 2) continue;
      const double d = squared_distance(points[i], centroids[labels[i]]);
      if (d > worst) {
        worst = d;
        victim = i;
      }
    }
    assert(victim < points.size());
    --sizes[labels[victim]];
    labels[victim] = c;
    sizes[c] = 1;
    centroids[c] = to_double(points[victim]);
  }
}

Centroids means(std::span<const Embedding> points,
                const std::vector<std::size_t>& labels, std::size_t k,
                std::size_t dim) {
  Centroids out(k, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& c = out[labels[i]];
    for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
    ++counts[labels[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (double& v : out[c]) v /= static_cast<double>(counts[c]);
  }
  return out;
}

double inertia_of(std::span<const Embedding> points,
                  const std::vector<std::size_t>& labels,
                  const Centroids& centroids) {
  double total = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    total += squared_distance(points[i], centroids[labels[i]]);
  }
  return total;
}

KMeansResult lloyd(std::span<const Embedding> points, std::size_t k,
                   std::size_t dim, const ClusteringConfig& cfg,
                   SplitMix64& rng) {
  KMeansResult r;
  Centroids centroids = seed_plus_plus(points, k, rng);
  r.labels.assign(points.size(), 0);
  assign(points, centroids, r.labels, /*initial=*/true);
  repair_empty(points, centroids, r.labels);

  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    centroids = means(points, r.labels, k, dim);
    const double inertia = inertia_of(points, r.labels, centroids);
    assert(r.inertia_trace.empty() || inertia <= r.inertia_trace.back());
    r.inertia_trace.push_back(inertia);
    if (r.inertia_trace.size() >= 2 &&
        r.inertia_trace[r.inertia_trace.size() - 2] - inertia < cfg.tolerance) {
      break;
    }
    std::vector<std::size_t> next = r.labels;
    assign(points, centroids, next, /*initial=*/false);
    repair_empty(points, centroids, next);
    if (next == r.labels) break;
    r.labels = std::move(next);
  }
  r.centroids = means(points, r.labels, k, dim);
  r.inertia = inertia_of(points, r.labels, r.centroids);
  return r;
}

}  // namespace

KMeansResult kmeans(std::span<const Embedding> points, std::size_t k,
                    const ClusteringConfig& cfg) {
  cfg.validate();
  if (k == 0) throw_parameter("k must be at least 1");
  if (k > points.size()) {
    throw_parameter("k = " + std::to_string(k) + " exceeds number of points " +
                    std::to_string(points.size()));
  }
  const std::size_t dim = check_dimensions(points);

  KMeansResult best;
  bool have_best = false;
  for (std::size_t restart = 0; restart < cfg.restarts; ++restart) {
    SplitMix64 rng(stream_seed(cfg.seed, restart, k));
    KMeansResult r = lloyd(points, k, dim, cfg, rng);
    if (!have_best || r.inertia < best.inertia) {
      best = std::move(r);
      have_best = true;
    }
  }
  return best;
}

namespace {

std::size_t label_count(std::span<const std::size_t> labels) {
  std::size_t k = 0;
  for (std::size_t l : labels) k = std::max(k, l + 1);
  return k;
}

}  // namespace

double within_cluster_dispersion(std::span<const Embedding> points,
                                 std::span<const std::size_t> labels) {
  const std::size_t dim = check_dimensions(points);
  const std::size_t k = label_count(labels);
  const std::vector<std::size_t> lab(labels.begin(), labels.end());
  return inertia_of(points, lab, means(points, lab, k, dim));
}

double calinski_harabasz(std::span<const Embedding> points,
                         std::span<const std::size_t> labels) {
  if (points.size() != labels.size()) {
    throw_parameter("points and labels differ in length");
  }
  const std::size_t n = points.size();
  const std::size_t dim = check_dimensions(points);
  const std::size_t k = label_count(labels);
  if (k < 2) throw_parameter("Calinski-Harabasz needs at least two clusters");
  if (k >= n) throw_parameter("Calinski-Harabasz needs k < n");

  const std::vector<std::size_t> lab(labels.begin(), labels.end());
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t l : lab) ++counts[l];
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) throw_parameter("empty cluster " + std::to_string(c));
  }

  const Centroids centroids = means(points, lab, k, dim);
  std::vector<double> overall(dim, 0.0);
  for (const Embedding& p : points) {
    for (std::size_t d = 0; d < dim; ++d) overall[d] += p[d];
  }
  for (double& v : overall) v /= static_cast<double>(n);

  double between = 0;
  for (std::size_t c = 0; c < k; ++c) {
    double d2 = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = centroids[c][d] - overall[d];
      d2 += diff * diff;
    }
    between += static_cast<double>(counts[c]) * d2;
  }
  const double within = inertia_of(points, lab, centroids);
  if (within == 0) {
    if (between > 0) return std::numeric_limits<double>::infinity();
    throw_data("Calinski-Harabasz undefined: all points identical");
  }
  return (between / static_cast<double>(k - 1)) /
         (within / static_cast<double>(n - k));
}

void normalize_visual_chains(std::vector<VisualChain>& chains) {
  for (VisualChain& c : chains) {
    std::stable_sort(c.faces.begin(), c.faces.end(), face_before);
  }
  std::erase_if(chains, [](const VisualChain& c) { return c.faces.empty(); });
  std::stable_sort(chains.begin(), chains.end(),
                   [](const VisualChain& a, const VisualChain& b) {
                     return face_before(a.faces.front(), b.faces.front());
                   });
  for (std::size_t i = 0; i < chains.size(); ++i) {
    chains[i].chain_id = "V" + std::to_string(i);
  }
}

std::vector<VisualChain> cluster_faces(std::span<const FaceInstance> faces,
                                       const ClusteringConfig& cfg) {
  cfg.validate();
  std::vector<Embedding> points;
  points.reserve(faces.size());
  for (const FaceInstance& f : faces) points.push_back(f.embedding);
  check_dimensions(points);

  const std::size_t n = faces.size();
  std::vector<std::size_t> labels(n);
  const std::size_t k_hi = n >= 1 ? std::min(cfg.k_max, n - 1) : 0;

  if (n < 2 || k_hi < cfg.k_min) {
    // too few faces for CH; one chain per face
    for (std::size_t i = 0; i < n; ++i) labels[i] = i;
  } else {
    double best_score = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t k = cfg.k_min; k <= k_hi; ++k) {
      KMeansResult r = kmeans(points, k, cfg);
      double score;
      try {
        score = calinski_harabasz(points, r.labels);
      } catch (const Error&) {
        continue;  // k = 1 or all points identical
      }
      if (!found || score > best_score) {
        best_score = score;
        labels = std::move(r.labels);
        found = true;
      }
    }
    if (!found) std::fill(labels.begin(), labels.end(), 0);
  }

  std::vector<VisualChain> chains(label_count(labels));
  for (std::size_t i = 0; i < n; ++i) chains[labels[i]].faces.push_back(faces[i]);
  normalize_visual_chains(chains);
  return chains;
}

}  // namespace charground
