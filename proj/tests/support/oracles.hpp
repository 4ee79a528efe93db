#pragma once

#include <cstdint>
#include <vector>

#include "tracksketch/geometry.hpp"
#include "tracksketch/raster.hpp"

// Reference implementations written directly from the definitions, used to
// check the library's faster code paths.
namespace tracksketch::testing {

/// Adjusted Rand index between two labelings of the same points.
double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

/// Symmetric mean nearest-neighbour distance between the dark pixels of two
/// images, by exhaustive search.
double naive_chamfer(const RasterImage& a, const RasterImage& b, int threshold = 128);

/// Mean SSIM over all valid 11x11 windows with a sigma 1.5 Gaussian weight,
/// evaluated window by window in two dimensions.
double naive_ssim(const RasterImage& a, const RasterImage& b, double k1 = 0.01, double k2 = 0.03);

/// Largest distance from any point of the stroke to the infinite line a-b.
double max_line_deviation(const Stroke& stroke, Point a, Point b);

/// Random image of the given size with `points` distinct black pixels.
RasterImage random_dots(int width, int height, int points, std::uint64_t seed);

struct PlantedClusters {
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> labels;
};

/// `k` Gaussian blobs of `per_cluster` points in `dim` dimensions with centres
/// on a wide grid and small spread.
PlantedClusters planted_clusters(std::size_t k, std::size_t per_cluster, std::size_t dim, double separation,
                                 double sigma, std::uint64_t seed);

}  // namespace tracksketch::testing
