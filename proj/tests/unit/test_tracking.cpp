#include <doctest.h>

#include <cmath>
#include <sstream>

#include "synthetic.hpp"
#include "tracksketch/error.hpp"
#include "tracksketch/tracking.hpp"

using namespace tracksketch;

namespace {

template <typename Fn>
ErrorCategory error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("expected an error");
  return ErrorCategory::usage;
}

std::string hand_json(std::size_t n, double x = 0.5, double y = 0.5) {
  std::string s = "[";
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ",";
    s += "[" + std::to_string(x) + "," + std::to_string(y) + "]";
  }
  return s + "]";
}

ErrorCategory parse_error_of(const std::string& text) {
  std::istringstream in(text);
  return error_of([&] { (void)parse_landmarks(in); });
}

LandmarkFrame frame(double t, Point tip, bool down) {
  LandmarkFrame f;
  f.timestamp = t;
  f.hand = testing::hand_pose(tip, down ? 2.0 : 1.05);
  return f;
}

}  // namespace

TEST_CASE("two frames parse into a recording of length two") {
  std::istringstream in("{\"t\":0.0,\"hand\":" + hand_json(21) + "}\n{\"t\":0.033,\"hand\":null,\"pen\":false}\n");
  const TrackRecording rec = parse_landmarks(in);
  REQUIRE(rec.frames.size() == 2);
  CHECK(rec.frames[0].hand.has_value());
  CHECK_FALSE(rec.frames[1].hand.has_value());
  CHECK(rec.frames[1].pen_flag == false);
  CHECK(rec.frame_rate == 30.0);
}

TEST_CASE("a header line sets rate, source and frame size") {
  std::istringstream in(
      "{\"frame_rate\":60,\"source\":\"synthetic\",\"frame_width\":1280,\"frame_height\":720}\n"
      "{\"t\":0.5,\"hand\":null}\n");
  const TrackRecording rec = parse_landmarks(in);
  CHECK(rec.frame_rate == 60.0);
  CHECK(rec.source == TrackSource::synthetic);
  CHECK(rec.frame_width == 1280);
  CHECK(rec.frame_height == 720);
}

TEST_CASE("schema violations are format errors") {
  CHECK(parse_error_of("{\"t\":0.0,\"hand\":[0.1,0.1]}\n") == ErrorCategory::format);
  CHECK(parse_error_of("{\"t\":0.0,\"hand\":" + hand_json(20) + "}\n") == ErrorCategory::format);
  CHECK(parse_error_of("{\"t\":0.0,\"hand\":null,\"confidence\":0.9}\n") == ErrorCategory::format);
  CHECK(parse_error_of("{\"t\":0.0,\"hand\":null,\"pen\":1}\n") == ErrorCategory::format);
  CHECK(parse_error_of("{\"hand\":null}\n") == ErrorCategory::format);
  CHECK(parse_error_of("{\"t\":0.0}\n") == ErrorCategory::format);
  CHECK(parse_error_of("{\"t\":0.1,\"hand\":null}\n{\"t\":0.1,\"hand\":null}\n") == ErrorCategory::format);
  CHECK(parse_error_of("not json\n") == ErrorCategory::format);
  CHECK(parse_error_of("{\"t\":0.1,\"hand\":null}\n{\"frame_rate\":30}\n") == ErrorCategory::format);
}

TEST_CASE("a missing landmarks file is an I/O error") {
  CHECK(error_of([] { (void)parse_landmarks_file("/nonexistent/rec.jsonl"); }) == ErrorCategory::io);
}

TEST_CASE("a thousand frame recording survives write and parse") {
  const Sketch s = testing::synthetic_sketch("spiral", 2);
  testing::RecordingOptions opts;
  opts.missing_hand_every = 3;
  opts.explicit_flags = true;
  opts.frame_width = 640;
  opts.frame_height = 480;
  TrackRecording rec = testing::synthesize_recording(s, opts);
  while (rec.frames.size() < 1000) {
    TrackRecording more = testing::synthesize_recording(s, opts);
    const double offset = rec.frames.back().timestamp + 1.0;
    for (auto f : more.frames) {
      f.timestamp += offset;
      rec.frames.push_back(f);
    }
  }
  rec.frames.resize(1000);
  std::stringstream buf;
  write_landmarks(buf, rec);
  const TrackRecording back = parse_landmarks(buf);
  REQUIRE(back.frames.size() == 1000);
  CHECK(back.frame_width == 640);
  CHECK(back.source == rec.source);
  for (std::size_t i = 0; i < 1000; ++i) {
    CHECK(back.frames[i].timestamp == rec.frames[i].timestamp);
    CHECK(back.frames[i].pen_flag == rec.frames[i].pen_flag);
    REQUIRE(back.frames[i].hand.has_value() == rec.frames[i].hand.has_value());
    if (rec.frames[i].hand) CHECK(*back.frames[i].hand == *rec.frames[i].hand);
  }
}

TEST_CASE("pen state from flags and finger extension") {
  LandmarkFrame f = frame(0.0, {0.5, 0.5}, false);
  f.pen_flag = true;
  CHECK(pen_state(f));
  CHECK(pen_state(frame(0.0, {0.5, 0.5}, true)));
  LandmarkFrame curled;
  curled.hand = testing::hand_pose({0.5, 0.5}, 1.1);
  CHECK_FALSE(pen_state(curled));
  LandmarkFrame none;
  CHECK_FALSE(pen_state(none));
  LandmarkFrame flat;
  flat.hand = HandLandmarks{};
  CHECK(error_of([&] { (void)pen_state(flat); }) == ErrorCategory::degenerate_geometry);
  CHECK(error_of([] { PenHeuristic{1.0}.validate(); }) == ErrorCategory::config);
}

TEST_CASE("pen-down runs become strokes in frame order") {
  TrackRecording rec;
  rec.frames = {frame(0.0, {0.2, 0.2}, true), frame(0.1, {0.3, 0.2}, true), frame(0.2, {0.5, 0.5}, false),
                frame(0.3, {0.6, 0.6}, true), frame(0.4, {0.6, 0.8}, true), frame(0.5, {0.7, 0.8}, true)};
  const Sketch s = to_sketch(rec);
  REQUIRE(s.strokes.size() == 2);
  CHECK(s.strokes[0].points.size() == 2);
  CHECK(s.strokes[1].points.size() == 3);
  CHECK(s.strokes[0].points[0].x < s.strokes[0].points[1].x);
  CHECK(s.strokes[1].points[1].y > s.strokes[1].points[0].y);
}

TEST_CASE("a single pen-down run is one stroke") {
  TrackRecording rec;
  for (int i = 0; i < 10; ++i) rec.frames.push_back(frame(0.1 * i, {0.1 + 0.05 * i, 0.3}, true));
  CHECK(to_sketch(rec).strokes.size() == 1);
}

TEST_CASE("a frame without a hand splits the stroke") {
  TrackRecording rec;
  rec.frames = {frame(0.0, {0.2, 0.2}, true), frame(0.1, {0.3, 0.2}, true)};
  LandmarkFrame gap;
  gap.timestamp = 0.2;
  rec.frames.push_back(gap);
  rec.frames.push_back(frame(0.3, {0.4, 0.4}, true));
  rec.frames.push_back(frame(0.4, {0.4, 0.6}, true));
  CHECK(to_sketch(rec).strokes.size() == 2);
}

TEST_CASE("a recording with no pen-down frame is an empty sketch") {
  TrackRecording rec;
  rec.frames = {frame(0.0, {0.2, 0.2}, false), frame(0.1, {0.3, 0.2}, false)};
  CHECK(error_of([&] { (void)to_sketch(rec); }) == ErrorCategory::empty_sketch);
}

TEST_CASE("ideal tracking of a sketch returns its strokes") {
  for (const auto& s : testing::synthetic_corpus(20, 9)) {
    testing::RecordingOptions opts;
    opts.missing_hand_every = 2;
    const Sketch back = to_sketch(testing::synthesize_recording(s, opts));
    CHECK(back.strokes.size() == s.strokes.size());
  }
}
