#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracksketch/raster.hpp"

namespace tracksketch {

struct MetricsConfig {
  int ssim_window = 11;
  double ssim_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
  std::uint8_t cd_threshold = kDefaultForegroundThreshold;

  void validate() const;
  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }
};

/// Mean SSIM over every fully-contained Gaussian window (no padding).
double ssim(const RasterImage& a, const RasterImage& b, const MetricsConfig& cfg = {});

/// Symmetric Chamfer distance in pixels:
///   0.5 * (mean_{p in A} min_{q in B} |p - q| + mean_{q in B} min_{p in A} |q - p|)
/// where A and B are the foreground pixels. Nearest distances come from an
/// exact Euclidean distance transform of each image.
double chamfer(const RasterImage& a, const RasterImage& b, const MetricsConfig& cfg = {});

/// Same quantity by exhaustive nearest-neighbour search; the reference the
/// distance-transform route is checked against.
double chamfer_bruteforce(const RasterImage& a, const RasterImage& b,
                          std::uint8_t threshold = kDefaultForegroundThreshold);
double chamfer_bruteforce(std::span<const PixelCoord> a, std::span<const PixelCoord> b);

/// Exact squared Euclidean distance from every pixel to the nearest pixel of
/// `sites` (row-major, width * height). Pixels with no site anywhere get +inf.
std::vector<double> squared_distance_transform(std::span<const PixelCoord> sites, int width, int height);

/// Scores produced outside this toolkit (neural metrics), keyed by sample id.
struct NeuralScores {
  std::optional<double> lpips;
  std::optional<double> clip_i2i;
  std::optional<double> clip_i2t;
  std::string scorer;
};

struct MetricsReport {
  std::string sample_id;
  double ssim = 0.0;
  double cd = 0.0;
  std::optional<double> lpips;
  std::optional<double> clip_i2i;
  std::optional<double> clip_i2t;
};

MetricsReport evaluate_pair(const std::string& sample_id, const RasterImage& ground_truth,
                            const RasterImage& candidate, const MetricsConfig& cfg = {},
                            const NeuralScores* ingested = nullptr);

/// CSV with header `sample_id,ssim,cd,lpips,clip_i2i,clip_i2t`; absent
/// ingested scores are empty cells.
void write_report_csv(std::ostream& out, std::span<const MetricsReport> reports);
std::vector<MetricsReport> read_report_csv(std::istream& in);

/// JSONL sidecar: {"sample_id": ..., "lpips"?: ..., "clip_i2i"?: ..., "clip_i2t"?: ..., "scorer"?: ...}
std::map<std::string, NeuralScores> read_sidecar(std::istream& in);

// --- chaos-level analysis ---------------------------------------------------

struct ChaosRecord {
  double tracking_cd = 0.0;
  double generated_cd = 0.0;
};

enum class BinMode { equal_width, equal_count };

struct ChaosBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double mean_tracking_cd = 0.0;   // NaN for an empty bin
  double mean_generated_cd = 0.0;  // NaN for an empty bin
};

struct BinSummary {
  BinMode mode = BinMode::equal_width;
  std::vector<ChaosBin> bins;
};

/// Bins records by tracking CD. Equal width splits [min, max] into n_bins
/// equal intervals (the maximum goes to the last bin; a zero-width range
/// puts everything in the first). Equal count splits the sorted records into
/// groups whose sizes differ by at most one.
BinSummary chaos_bins(std::span<const ChaosRecord> records, std::size_t n_bins = 4,
                      BinMode mode = BinMode::equal_width);

nlohmann::json to_json(const BinSummary& summary);

}  // namespace tracksketch
