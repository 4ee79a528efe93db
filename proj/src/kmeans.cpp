#include "tracksketch/kmeans.hpp"

#include <cmath>
#include <limits>

#include "tracksketch/error.hpp"
#include "tracksketch/rng.hpp"

namespace tracksketch {
namespace {

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t nearest(const FeatureVector& p, const std::vector<FeatureVector>& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::size_t draw_weighted(const std::vector<double>& d2, double total, Rng& rng) {
  const double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < d2.size(); ++i) {
    if (d2[i] <= 0.0) continue;
    last_positive = i;
    acc += d2[i];
    if (acc > target) return i;
  }
  return last_positive;
}

// Greedy k-means++: each step draws a few D^2-weighted candidates and keeps
// the one that lowers the total potential the most.
std::vector<FeatureVector> seed_plus_plus(const std::vector<FeatureVector>& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.size();
  const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
  std::vector<FeatureVector> centroids;
  centroids.reserve(k);
  centroids.push_back(points[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))]);
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centroids.back());
  std::vector<double> candidate_d2(n);
  while (centroids.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    if (total <= 0.0) {
      centroids.push_back(points[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))]);
      continue;
    }
    std::size_t best = n;
    double best_total = std::numeric_limits<double>::infinity();
    std::vector<double> best_d2;
    for (std::size_t t = 0; t < trials; ++t) {
      const std::size_t pick = draw_weighted(d2, total, rng);
      double potential = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        candidate_d2[i] = std::min(d2[i], squared_distance(points[i], points[pick]));
        potential += candidate_d2[i];
      }
      if (potential < best_total) {
        best_total = potential;
        best = pick;
        best_d2 = candidate_d2;
      }
    }
    centroids.push_back(points[best]);
    d2 = std::move(best_d2);
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const std::vector<FeatureVector>& points, std::size_t k, std::uint64_t seed, int max_iters) {
  if (k == 0) throw config_error("k-means needs k >= 1");
  if (points.size() < k) {
    throw config_error("k-means needs at least k points (k=" + std::to_string(k) + ", n=" +
                       std::to_string(points.size()) + ")");
  }
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw config_error("k-means points have inconsistent dimensions");
    for (double v : p) {
      if (!std::isfinite(v)) throw config_error("k-means points must be finite");
    }
  }
  if (max_iters < 1) throw config_error("k-means max_iters must be >= 1");

  Rng rng(seed);
  KMeansResult res;
  res.centroids = seed_plus_plus(points, k, rng);
  const std::size_t n = points.size();
  std::vector<std::size_t> previous;

  for (int iter = 0; iter < max_iters; ++iter) {
    res.iterations = iter + 1;
    res.assignment.assign(n, 0);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      res.assignment[i] = nearest(points[i], res.centroids);
      ++sizes[res.assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[res.assignment[i]] < 2) continue;
        const double d = squared_distance(points[i], res.centroids[res.assignment[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == n) break;  // every cluster is a singleton already
      --sizes[res.assignment[far]];
      res.assignment[far] = c;
      sizes[c] = 1;
      res.centroids[c] = points[far];
    }
    if (res.assignment == previous) break;
    previous = res.assignment;

    std::vector<FeatureVector> sums(k, FeatureVector(dim, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = sums[res.assignment[i]];
      for (std::size_t d = 0; d < dim; ++d) s[d] += points[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      for (std::size_t d = 0; d < dim; ++d) res.centroids[c][d] = sums[c][d] / static_cast<double>(sizes[c]);
    }
  }

  res.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) res.inertia += squared_distance(points[i], res.centroids[res.assignment[i]]);
  return res;
}

std::vector<FeatureVector> standardize(const std::vector<FeatureVector>& points) {
  if (points.empty()) return {};
  const std::size_t dim = points.front().size();
  const auto n = static_cast<double>(points.size());
  std::vector<FeatureVector> out = points;
  for (std::size_t d = 0; d < dim; ++d) {
    double mean = 0.0;
    for (const auto& p : points) mean += p[d];
    mean /= n;
    double var = 0.0;
    for (const auto& p : points) var += (p[d] - mean) * (p[d] - mean);
    const double sd = std::sqrt(var / n);
    for (auto& p : out) p[d] = sd > 0.0 ? (p[d] - mean) / sd : 0.0;
  }
  return out;
}

}  // namespace tracksketch
