#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracksketch/augment.hpp"
#include "tracksketch/config_file.hpp"
#include "tracksketch/geometry.hpp"
#include "tracksketch/raster.hpp"

namespace tracksketch {

/// "a black and white sketch of a <category>", applied literally.
std::string make_prompt(const std::string& category);

// --- score-based filtering ---------------------------------------------------

struct ScoredItem {
  std::string id;
  double score = 0.0;
};

struct FilterResult {
  std::vector<std::string> selected;  // grouped by category (name order), best first
  std::vector<std::string> warnings;
};

/// Keeps the ceil(fraction * n) highest-scoring items of every category.
/// Ties go to the lexicographically smaller id.
FilterResult filter_top_percent(const std::map<std::string, std::vector<ScoredItem>>& scored,
                                double fraction = 0.05);

/// Reads a CLIP text-image sidecar (JSONL with sample_id and clip_i2t) and a
/// category lookup into per-category score lists.
std::map<std::string, std::vector<ScoredItem>> group_scores(
    const std::map<std::string, double>& score_by_id, const std::map<std::string, std::string>& category_by_id);

// --- holdout split -----------------------------------------------------------

inline constexpr std::size_t kCategoryFeatureCount = 4;

struct CategoryStats {
  std::string category;
  // Category means of: CLIP I2T of the ground truth, CLIP I2I ground truth vs
  // tracking, CD ground truth vs tracking, SSIM ground truth vs tracking.
  std::optional<double> clip_i2t_gt;
  std::optional<double> clip_i2i_gt_tracking;
  std::optional<double> cd_gt_tracking;
  std::optional<double> ssim_gt_tracking;

  bool complete() const;
  std::array<double, kCategoryFeatureCount> features() const;  // requires complete()
};

/// CSV with header `category,clip_i2t_gt,clip_i2i_gt_tracking,cd_gt_tracking,ssim_gt_tracking`.
/// Empty cells are missing values.
std::vector<CategoryStats> read_category_stats_csv(std::istream& in);
void write_category_stats_csv(std::ostream& out, const std::vector<CategoryStats>& stats);

struct HoldoutSplit {
  std::vector<std::string> held_out;  // one per cluster, in cluster order
  std::vector<std::string> training;  // input order
  std::map<std::string, std::size_t> cluster;  // every category
};

/// Standardises the feature vectors, clusters them into k groups and draws one
/// held-out category per cluster.
HoldoutSplit holdout_kmeans(const std::vector<CategoryStats>& stats, std::size_t k = 10,
                            std::uint64_t seed = 0);

nlohmann::json to_json(const HoldoutSplit& split);

// --- training pairs ----------------------------------------------------------

inline constexpr int kManifestSchemaVersion = 1;

struct ManifestEntry {
  std::string sample_id;
  std::string category;
  std::string prompt;
  bool empty_prompt = false;
  std::string source_id;
  std::string clean_path;  // relative to the dataset directory
  std::string noisy_path;
  std::uint64_t seed = 0;
  AugmentReport augment_report;
};

nlohmann::json to_json(const ManifestEntry& entry);
ManifestEntry manifest_entry_from_json(const nlohmann::json& j);

void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(std::istream& in);
std::vector<ManifestEntry> read_manifest_file(const std::filesystem::path& path);

struct DatasetOptions {
  AugmentConfig augment;
  RenderSpec render;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool empty_prompt_enabled = false;
  double empty_prompt_fraction = 0.25;

  void validate() const;
};

/// Sets a `render.*` or `dataset.*` option; false when the key is unknown.
bool set_dataset_option(DatasetOptions& opts, const std::string& key, const std::string& value);

/// Every option that affects the output bytes. Thread count is not listed.
KeyValues dataset_options(const DatasetOptions& opts);

/// Per-sample seed.
std::uint64_t sample_seed(std::uint64_t global_seed, std::size_t index);
std::string sample_id(std::size_t index);

/// Writes images/<id>_clean.png, images/<id>_noisy.png, manifest.jsonl and
/// config_snapshot.txt under out_dir. The corpus must already be normalised
/// to the unit canvas. On failure the manifest and any images written by this
/// call are removed before the error propagates.
std::vector<ManifestEntry> build_pairs(const std::vector<Sketch>& corpus, const DatasetOptions& opts,
                                       const std::filesystem::path& out_dir);

}  // namespace tracksketch
