#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tracksketch/error.hpp"
#include "tracksketch/kmeans.hpp"

using namespace tracksketch;

TEST_CASE("one cluster per point has zero inertia") {
  const std::vector<FeatureVector> pts{{0.0, 0.0}, {1.0, 0.0}, {0.0, 2.0}, {5.0, 5.0}};
  const KMeansResult r = kmeans(pts, 4, 1);
  CHECK(r.inertia == 0.0);
  std::vector<bool> used(4, false);
  for (auto a : r.assignment) used[a] = true;
  for (bool u : used) CHECK(u);
}

TEST_CASE("planted well-separated clusters are recovered") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto planted = testing::planted_clusters(10, 12, 4, 10.0, 0.3, seed);
    const KMeansResult r = kmeans(planted.points, 10, seed);
    CHECK(testing::adjusted_rand_index(r.assignment, planted.labels) == 1.0);
  }
}

TEST_CASE("identical inputs give identical clusterings") {
  const auto planted = testing::planted_clusters(5, 20, 3, 4.0, 1.0, 3);
  const KMeansResult a = kmeans(planted.points, 5, 11);
  const KMeansResult b = kmeans(planted.points, 5, 11);
  CHECK(a.assignment == b.assignment);
  CHECK(a.inertia == b.inertia);
}

TEST_CASE("inertia equals the squared distances to the reported centroids") {
  const auto planted = testing::planted_clusters(3, 30, 2, 3.0, 1.0, 5);
  const KMeansResult r = kmeans(planted.points, 3, 2);
  double total = 0.0;
  for (std::size_t i = 0; i < planted.points.size(); ++i) {
    const auto& c = r.centroids[r.assignment[i]];
    for (std::size_t d = 0; d < c.size(); ++d) total += (planted.points[i][d] - c[d]) * (planted.points[i][d] - c[d]);
  }
  CHECK(r.inertia == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("all-equal points still fill every cluster") {
  const std::vector<FeatureVector> pts(6, FeatureVector{1.0, 1.0});
  const KMeansResult r = kmeans(pts, 3, 0);
  CHECK(r.inertia == 0.0);
  CHECK(r.assignment.size() == 6);
}

TEST_CASE("invalid inputs are config errors") {
  const std::vector<FeatureVector> pts{{0.0}, {1.0}};
  CHECK_THROWS_AS(kmeans(pts, 3, 0), Error);
  CHECK_THROWS_AS(kmeans(pts, 0, 0), Error);
  CHECK_THROWS_AS(kmeans({{0.0}, {1.0, 2.0}}, 1, 0), Error);
  try {
    (void)kmeans(pts, 3, 0);
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::config);
  }
}

TEST_CASE("standardize gives zero mean and unit spread, zero for constant columns") {
  const auto z = standardize({{1.0, 7.0}, {2.0, 7.0}, {3.0, 7.0}, {6.0, 7.0}});
  double s = 0.0, s2 = 0.0;
  for (const auto& p : z) {
    s += p[0];
    s2 += p[0] * p[0];
    CHECK(p[1] == 0.0);
  }
  CHECK(std::abs(s) < 1e-12);
  CHECK(s2 / 4.0 == doctest::Approx(1.0).epsilon(1e-12));
}
