#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tracksketch/geometry.hpp"

namespace tracksketch {

// Hand-landmark recordings, one JSON object per line:
//
//   {"frame_rate": 30, "source": "real", "frame_width": 1280, "frame_height": 720}   optional header, first line only
//   {"t": 0.033, "hand": [[x, y], ... 21 pairs], "pen": true}                         "pen" optional
//   {"t": 0.066, "hand": null}                                                         hand not detected
//
// Landmark coordinates are normalised to the video frame (0..1 on each axis,
// y down) in the usual 21-point hand topology: 0 wrist, 6 index PIP, 8 index tip.

inline constexpr std::size_t kLandmarkCount = 21;
inline constexpr std::size_t kWrist = 0;
inline constexpr std::size_t kIndexPip = 6;
inline constexpr std::size_t kIndexTip = 8;

using HandLandmarks = std::array<Point, kLandmarkCount>;

struct LandmarkFrame {
  double timestamp = 0.0;  // seconds
  std::optional<HandLandmarks> hand;
  std::optional<bool> pen_flag;
};

enum class TrackSource { synthetic, real };

struct TrackRecording {
  std::vector<LandmarkFrame> frames;
  double frame_rate = 30.0;
  TrackSource source = TrackSource::real;
  int frame_width = 0;  // 0 = unknown, treated as square
  int frame_height = 0;
};

struct PenHeuristic {
  double extension_ratio_threshold = 1.3;

  void validate() const;
};

TrackRecording parse_landmarks(std::istream& in);
TrackRecording parse_landmarks_file(const std::string& path);
void write_landmarks(std::ostream& out, const TrackRecording& rec);

/// Explicit pen flag if present, else index finger extension:
/// |wrist - tip| / |wrist - pip| > threshold.
bool pen_state(const LandmarkFrame& frame, const PenHeuristic& h = {});

/// Fingertip positions of every maximal pen-down run become one stroke each,
/// in frame order, then the sketch is normalised onto the canvas. Frames
/// without a hand end the current run.
Sketch to_sketch(const TrackRecording& rec, const PenHeuristic& h = {}, const CanvasSpec& canvas = {});

}  // namespace tracksketch
