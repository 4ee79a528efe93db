#pragma once

#include <cstdint>
#include <vector>

namespace tracksketch {

using FeatureVector = std::vector<double>;

struct KMeansResult {
  std::vector<std::size_t> assignment;  // cluster index per point
  std::vector<FeatureVector> centroids;
  double inertia = 0.0;  // sum of squared distances to assigned centroids
  int iterations = 0;
};

/// Greedy k-means++ seeding followed by Lloyd iterations until the assignment stops
/// changing or `max_iters` is reached. An emptied cluster is reseeded with
/// the point farthest from its current centroid.
KMeansResult kmeans(const std::vector<FeatureVector>& points, std::size_t k, std::uint64_t seed,
                    int max_iters = 100);

/// Z-scores each dimension; constant dimensions become zero.
std::vector<FeatureVector> standardize(const std::vector<FeatureVector>& points);

}  // namespace tracksketch
