// Copyright 2026 The flarekit Authors
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

#include <algorithm>
#include <limits>
#include <string>

#include "flarekit/cast.hpp"
#include "flarekit/random.hpp"

namespace flarekit
{

namespace
{

double squared_distance(std::span<const double> a, std::span<const double> b)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

struct Assignment
{
  std::vector<int> cluster;
  std::vector<double> dist;
  double inertia = 0.0;
};

Assignment assign(const VectorSet & points, const VectorSet & centers)
{
  const std::size_t n = points.size();
  const std::size_t k = centers.size();
  Assignment a;
  a.cluster.resize(n);
  a.dist.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double d = squared_distance(points.row(i), centers.row(c));
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<int>(c);
      }
    }
    a.cluster[i] = best;
    a.dist[i] = best_dist;
  }
  // Fixed-order reduction keeps the inertia trace reproducible.
  for (const double d : a.dist) {
    a.inertia += d;
  }
  return a;
}

VectorSet seed_plus_plus(const VectorSet & points, int k, Rng & rng)
{
  const std::size_t n = points.size();
  VectorSet centers;
  centers.dim = points.dim;
  std::vector<bool> chosen(n, false);

  std::size_t first = static_cast<std::size_t>(rng.below(n));
  centers.push_back(points.row(first));
  chosen[first] = true;

  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) {
    nearest[i] = squared_distance(points.row(i), points.row(first));
  }

  while (centers.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (const double d : nearest) {
      total += d;
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double running = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        running += nearest[i];
        if (nearest[i] > 0.0 && running > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        // Rounding left the target past the last positive weight.
        for (std::size_t i = n; i-- > 0;) {
          if (nearest[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // Every point coincides with a center; take the first unused one.
      pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
    }
    centers.push_back(points.row(pick));
    chosen[pick] = true;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), points.row(pick)));
    }
  }
  return centers;
}

}  // namespace

KMeansResult fit_codebook_kmeans(const VectorSet & features, int k, std::uint64_t seed, int max_iters)
{
  if (k < 1) {
    throw Error("k-means needs k >= 1");
  }
  if (features.dim < 1 || features.size() < static_cast<std::size_t>(k)) {
    throw Error(
      "k-means needs at least k = " + std::to_string(k) + " feature vectors, got " +
      std::to_string(features.size()));
  }
  if (max_iters < 1) {
    throw Error("k-means needs max_iters >= 1");
  }

  Rng rng(seed);
  VectorSet centers = seed_plus_plus(features, k, rng);
  const std::size_t d = static_cast<std::size_t>(features.dim);
  const std::size_t kk = static_cast<std::size_t>(k);

  KMeansResult result;
  for (int iter = 0; iter < max_iters; ++iter) {
    Assignment a = assign(features, centers);
    result.inertia.push_back(a.inertia);
    if (iter > 0) {
      const double prev = result.inertia[result.inertia.size() - 2];
      if (prev <= 0.0 || (prev - a.inertia) <= 1e-6 * prev) {
        break;
      }
    }
    if (iter + 1 == max_iters) {
      break;
    }

    std::vector<double> sums(kk * d, 0.0);
    std::vector<std::size_t> counts(kk, 0);
    for (std::size_t i = 0; i < features.size(); ++i) {
      const std::size_t c = static_cast<std::size_t>(a.cluster[i]);
      const auto p = features.row(i);
      for (std::size_t j = 0; j < d; ++j) {
        sums[c * d + j] += p[j];
      }
      ++counts[c];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < d; ++j) {
          centers.values[c * d + j] = sums[c * d + j] / static_cast<double>(counts[c]);
        }
        continue;
      }
      // Empty cluster: move it onto the worst-served point.
      const auto far = static_cast<std::size_t>(
        std::max_element(a.dist.begin(), a.dist.end()) - a.dist.begin());
      const auto p = features.row(far);
      std::copy(p.begin(), p.end(), centers.values.begin() + static_cast<std::ptrdiff_t>(c * d));
      a.dist[far] = -1.0;
    }
  }
  result.codebook.entries = std::move(centers);
  return result;
}

}  // namespace flarekit
