#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tracksketch/geometry.hpp"

namespace tracksketch {

// Corruption model that turns a clean sketch into something that looks like a
// raw fingertip-tracking trace. Three families:
//   local       wave distortion, spikes, jitter (per stroke)
//   structural  sketch aspect distortion, stroke misplacement, stroke resize
//   false       transitional and random extra strokes
// plus optional random erasure for sketch-completion training.
//
// All lengths are canvas units on the unit square.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  double max_abs() const;
};

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct NormalDist {
  double mean = 0.0;
  double sigma = 0.0;
};

struct WaveParams {
  int n_waves = 3;
  Interval freq_range{0.5, 4.0};  // cycles per stroke
  Interval amp_range{0.005, 0.02};
  Interval phase_range{0.0, 2.0 * std::numbers::pi};

  void validate() const;
};

enum class SpikeMode { sharp, smooth };

struct SpikeParams {
  SpikeMode mode = SpikeMode::sharp;
  NormalDist height{0.03, 0.01};  // sharp mode, magnitude of the draw
  NormalDist width{0.01, 0.005};  // magnitude of the draw
  Interval bezier_offset_range{0.01, 0.05};  // smooth mode control offsets
  int max_per_stroke = 2;
  double sample_spacing = kDefaultResampleSpacing;  // smooth mode curve sampling

  void validate() const;
};

struct JitterParams {
  double sigma = 0.003;
  double vertex_fraction = 0.5;

  void validate() const;
};

struct StructParams {
  Interval scale_range{0.7, 1.0};  // per axis, whole sketch
  Interval stroke_translate_range{-0.05, 0.05};
  Interval stroke_scale_range{0.8, 1.25};
  double margin = 0.05;  // sketch distortion re-centres inside this margin

  void validate() const;
};

struct StructFire {
  bool sketch_distort = false;
  bool misplace = false;
  bool resize = false;
};

struct FalseStrokeParams {
  bool transitional = false;
  int random_count_max = 3;
  double placement_inflate = 0.1;

  void validate() const;
};

struct EraseParams {
  Interval arc_fraction_range{0.1, 0.3};
  double whole_stroke_prob = 0.5;

  void validate() const;
};

/// Execution order of the sub-augmentations inside apply().
enum class AugmentKind {
  erase,
  sketch_distort,
  misplace,
  resize,
  wave,
  spike,
  jitter,
  transitional_false,
  random_false,
};

std::string_view to_string(AugmentKind kind);
AugmentKind augment_kind_from_string(std::string_view name);

struct FiringProbabilities {
  double wave = 0.5;
  double spike = 0.5;
  double jitter = 0.5;
  double sketch_distort = 0.5;
  double misplace = 0.5;
  double resize = 0.5;
  double transitional_false = 0.5;
  double random_false = 0.5;
  double erase = 0.5;

  double& operator[](AugmentKind kind);
  double operator[](AugmentKind kind) const;
};

struct AugmentConfig {
  FiringProbabilities prob;
  IntRange wave_count{2, 5};
  WaveParams wave;  // n_waves is drawn from wave_count per sample
  SpikeParams spike;  // mode is drawn per sample
  double spike_smooth_prob = 0.5;
  double jitter_sigma = 0.003;
  Interval jitter_fraction_range{0.3, 0.7};
  StructParams structure;
  FalseStrokeParams false_strokes;  // transitional flag is set per op
  EraseParams erase;
  bool erase_enabled = false;
  double resample_spacing = kDefaultResampleSpacing;

  void validate() const;

  /// Every probability zero.
  static AugmentConfig none();
  /// Only `kind` can fire, with probability `p`.
  static AugmentConfig only(AugmentKind kind, double p = 1.0);
};

using OpParams =
    std::variant<WaveParams, SpikeParams, JitterParams, StructParams, FalseStrokeParams, EraseParams>;

struct FiredOp {
  AugmentKind kind = AugmentKind::wave;
  std::uint64_t seed = 0;
  OpParams params;
  std::vector<std::string> notes;
};

/// Everything needed to replay one sample.
struct AugmentReport {
  std::uint64_t seed = 0;
  double resample_spacing = kDefaultResampleSpacing;
  bool resampled = false;
  std::vector<FiredOp> ops;
  std::vector<std::size_t> false_strokes;  // indices into the output sketch

  bool fired(AugmentKind kind) const;
};

nlohmann::json to_json(const AugmentReport& report);
AugmentReport report_from_json(const nlohmann::json& j);

// --- individual operations -------------------------------------------------

/// Displaces each vertex along its local unit normal by
///   d(t) = sum_i A_i sin(2 pi f_i t + phi_i),  t = normalised arc length.
Stroke distort_stroke_wave(const Stroke& stroke, const WaveParams& params, std::uint64_t seed);

/// Inserts 0..max_per_stroke spikes. Strokes not longer than a drawn spike
/// width are left alone and a note is appended.
Stroke add_spike(const Stroke& stroke, const SpikeParams& params, std::uint64_t seed,
                 std::vector<std::string>* notes = nullptr);

Stroke add_jitter(const Stroke& stroke, const JitterParams& params, std::uint64_t seed);

/// Throws exclusivity when both misplace and resize are requested.
Sketch structural_transform(const Sketch& sketch, const StructParams& params, std::uint64_t seed,
                            StructFire fire);

/// Appends false strokes after the existing ones. `added` receives their
/// indices in the returned sketch.
Sketch add_false_strokes(const Sketch& sketch, const FalseStrokeParams& params,
                         std::uint64_t seed, std::vector<std::size_t>* added = nullptr);

Sketch random_erase(const Sketch& sketch, const EraseParams& params, std::uint64_t seed,
                    std::vector<std::string>* notes = nullptr);

// --- composition -------------------------------------------------------------

struct Augmented {
  Sketch sketch;
  AugmentReport report;
};

/// Draws which sub-augmentations fire (misplace and resize never together)
/// and their per-sample parameters, then executes them. Deterministic in
/// (sketch, cfg, seed).
Augmented apply(const Sketch& sketch, const AugmentConfig& cfg, std::uint64_t seed);

/// Re-executes the operations recorded in a report.
Sketch replay(const Sketch& sketch, const AugmentReport& report);

}  // namespace tracksketch
