#include "tracksketch/tracking.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "tracksketch/config_file.hpp"
#include "tracksketch/error.hpp"

namespace tracksketch {

void PenHeuristic::validate() const {
  if (!(extension_ratio_threshold > 1.0) || !std::isfinite(extension_ratio_threshold)) {
    throw config_error("pen extension ratio threshold must be > 1, got " + format_double(extension_ratio_threshold));
  }
}

namespace {

Error format_error(std::size_t line_number, const std::string& what) {
  return Error(ErrorCategory::format, "landmarks line " + std::to_string(line_number) + ": " + what);
}

double finite_number(const nlohmann::json& j, std::size_t line_number, const char* what) {
  if (!j.is_number()) throw format_error(line_number, std::string(what) + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw format_error(line_number, std::string(what) + " is not finite");
  return v;
}

int positive_int(const nlohmann::json& j, std::size_t line_number, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() <= 0 || j.get<long long>() > 1'000'000) {
    throw format_error(line_number, std::string(what) + " must be a positive integer");
  }
  return j.get<int>();
}

void parse_header(const nlohmann::json& j, std::size_t line_number, TrackRecording& rec) {
  for (const auto& [key, value] : j.items()) {
    if (key == "frame_rate") {
      rec.frame_rate = finite_number(value, line_number, "frame_rate");
      if (rec.frame_rate <= 0.0) throw format_error(line_number, "frame_rate must be positive");
    } else if (key == "source") {
      if (value == "synthetic") {
        rec.source = TrackSource::synthetic;
      } else if (value == "real") {
        rec.source = TrackSource::real;
      } else {
        throw format_error(line_number, "source must be \"synthetic\" or \"real\"");
      }
    } else if (key == "frame_width") {
      rec.frame_width = positive_int(value, line_number, "frame_width");
    } else if (key == "frame_height") {
      rec.frame_height = positive_int(value, line_number, "frame_height");
    } else {
      throw format_error(line_number, "unknown header field '" + key + "'");
    }
  }
  if ((rec.frame_width == 0) != (rec.frame_height == 0)) {
    throw format_error(line_number, "frame_width and frame_height must be given together");
  }
}

LandmarkFrame parse_frame(const nlohmann::json& j, std::size_t line_number) {
  LandmarkFrame f;
  bool has_t = false;
  bool has_hand = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "t") {
      f.timestamp = finite_number(value, line_number, "t");
      has_t = true;
    } else if (key == "hand") {
      has_hand = true;
      if (value.is_null()) continue;
      if (!value.is_array() || value.size() != kLandmarkCount) {
        throw format_error(line_number, "hand must hold exactly 21 landmarks");
      }
      HandLandmarks hand;
      for (std::size_t i = 0; i < kLandmarkCount; ++i) {
        const auto& lm = value[i];
        if (!lm.is_array() || lm.size() != 2) throw format_error(line_number, "landmark must be an [x, y] pair");
        hand[i] = {finite_number(lm[0], line_number, "landmark x"), finite_number(lm[1], line_number, "landmark y")};
      }
      f.hand = hand;
    } else if (key == "pen") {
      if (!value.is_boolean()) throw format_error(line_number, "pen must be a boolean");
      f.pen_flag = value.get<bool>();
    } else {
      throw format_error(line_number, "unknown frame field '" + key + "'");
    }
  }
  if (!has_t) throw format_error(line_number, "missing t");
  if (!has_hand) throw format_error(line_number, "missing hand (use null when no hand was detected)");
  return f;
}

}  // namespace

TrackRecording parse_landmarks(std::istream& in) {
  TrackRecording rec;
  std::string line;
  std::size_t line_number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw format_error(line_number, e.what());
    }
    if (!j.is_object()) throw format_error(line_number, "expected a JSON object");
    const bool is_header = !j.contains("t");
    if (is_header) {
      if (!first) throw format_error(line_number, "header is only allowed on the first line");
      parse_header(j, line_number, rec);
    } else {
      LandmarkFrame f = parse_frame(j, line_number);
      if (!rec.frames.empty() && !(f.timestamp > rec.frames.back().timestamp)) {
        throw format_error(line_number, "timestamps must be strictly increasing");
      }
      rec.frames.push_back(std::move(f));
    }
    first = false;
  }
  return rec;
}

TrackRecording parse_landmarks_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io, "cannot open landmarks file " + path);
  try {
    return parse_landmarks(in);
  } catch (const Error& e) {
    throw Error(e.category(), path + ": " + e.what());
  }
}

void write_landmarks(std::ostream& out, const TrackRecording& rec) {
  nlohmann::ordered_json header{{"frame_rate", rec.frame_rate},
                                {"source", rec.source == TrackSource::synthetic ? "synthetic" : "real"}};
  if (rec.frame_width > 0 && rec.frame_height > 0) {
    header["frame_width"] = rec.frame_width;
    header["frame_height"] = rec.frame_height;
  }
  out << header.dump() << '\n';
  for (const auto& f : rec.frames) {
    nlohmann::ordered_json j{{"t", f.timestamp}};
    if (f.hand) {
      nlohmann::ordered_json hand = nlohmann::ordered_json::array();
      for (const Point& p : *f.hand) hand.push_back({p.x, p.y});
      j["hand"] = std::move(hand);
    } else {
      j["hand"] = nullptr;
    }
    if (f.pen_flag) j["pen"] = *f.pen_flag;
    out << j.dump() << '\n';
  }
}

bool pen_state(const LandmarkFrame& frame, const PenHeuristic& h) {
  if (frame.pen_flag) return *frame.pen_flag;
  if (!frame.hand) return false;
  h.validate();
  const HandLandmarks& hand = *frame.hand;
  const double reference = distance(hand[kWrist], hand[kIndexPip]);
  if (reference == 0.0) {
    throw Error(ErrorCategory::degenerate_geometry, "wrist and index PIP landmarks coincide");
  }
  return distance(hand[kWrist], hand[kIndexTip]) / reference > h.extension_ratio_threshold;
}

Sketch to_sketch(const TrackRecording& rec, const PenHeuristic& h, const CanvasSpec& canvas) {
  h.validate();
  canvas.validate();
  const bool known_frame = rec.frame_width > 0 && rec.frame_height > 0;
  const double sx = known_frame ? static_cast<double>(rec.frame_width) : 1.0;
  const double sy = known_frame ? static_cast<double>(rec.frame_height) : 1.0;

  Sketch sketch;
  Stroke current;
  for (const auto& f : rec.frames) {
    if (f.hand && pen_state(f, h)) {
      const Point tip = (*f.hand)[kIndexTip];
      current.points.push_back({tip.x * sx, tip.y * sy});
    } else if (!current.points.empty()) {
      sketch.strokes.push_back(std::move(current));
      current = {};
    }
  }
  if (!current.points.empty()) sketch.strokes.push_back(std::move(current));
  if (sketch.strokes.empty()) throw Error(ErrorCategory::empty_sketch, "recording has no pen-down frames");
  return normalize(sketch, canvas);
}

}  // namespace tracksketch
