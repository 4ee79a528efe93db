#include "tracksketch/quickdraw.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>

#include <json.hpp>

#include "tracksketch/error.hpp"

namespace tracksketch {
namespace {

std::string where(std::size_t line_number) {
  return line_number == 0 ? std::string("quickdraw record")
                          : "quickdraw record at line " + std::to_string(line_number);
}

Error parse_error(std::size_t line_number, const std::string& what) {
  return Error(ErrorCategory::parse, where(line_number) + ": " + what);
}

std::vector<long long> read_axis(const nlohmann::json& axis, std::size_t line_number) {
  if (!axis.is_array()) throw parse_error(line_number, "coordinate list is not an array");
  std::vector<long long> out;
  out.reserve(axis.size());
  for (const auto& v : axis) {
    if (!v.is_number_integer()) throw parse_error(line_number, "coordinate is not an integer");
    const long long c = v.get<long long>();
    if (c < 0 || c > 255) {
      throw Error(ErrorCategory::range, where(line_number) + ": coordinate " + std::to_string(c) +
                                            " outside [0,255]");
    }
    out.push_back(c);
  }
  return out;
}

int quantize(double c) {
  return static_cast<int>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
}

}  // namespace

Sketch parse_quickdraw_line(std::string_view text, std::size_t line_number) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(line_number, std::string("malformed JSON: ") + e.what());
  }
  if (!record.is_object()) throw parse_error(line_number, "record is not an object");

  const auto word = record.find("word");
  if (word == record.end() || !word->is_string()) {
    throw parse_error(line_number, "missing string field 'word'");
  }
  const auto drawing = record.find("drawing");
  if (drawing == record.end() || !drawing->is_array()) {
    throw parse_error(line_number, "missing array field 'drawing'");
  }
  if (drawing->empty()) {
    throw Error(ErrorCategory::empty_sketch, where(line_number) + ": drawing has no strokes");
  }

  Sketch sketch;
  sketch.category = word->get<std::string>();
  if (const auto key = record.find("key_id"); key != record.end()) {
    sketch.source_id = key->is_string() ? key->get<std::string>() : key->dump();
  }

  for (const auto& entry : *drawing) {
    if (!entry.is_array() || entry.size() < 2) {
      throw parse_error(line_number, "stroke is not an [xs, ys] pair");
    }
    const auto xs = read_axis(entry[0], line_number);
    const auto ys = read_axis(entry[1], line_number);
    if (xs.size() != ys.size()) throw parse_error(line_number, "stroke xs/ys length mismatch");
    if (xs.empty()) throw parse_error(line_number, "stroke has no points");
    Stroke st;
    st.points.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      st.points.push_back({static_cast<double>(xs[i]) / 255.0, static_cast<double>(ys[i]) / 255.0});
    }
    sketch.strokes.push_back(std::move(st));
  }
  return sketch;
}

std::string serialize_quickdraw(const Sketch& sketch) {
  nlohmann::json drawing = nlohmann::json::array();
  for (const auto& st : sketch.strokes) {
    nlohmann::json xs = nlohmann::json::array();
    nlohmann::json ys = nlohmann::json::array();
    for (const Point& p : st.points) {
      xs.push_back(quantize(p.x));
      ys.push_back(quantize(p.y));
    }
    drawing.push_back(nlohmann::json::array({std::move(xs), std::move(ys)}));
  }
  // Field order follows the published files.
  nlohmann::ordered_json record;
  record["word"] = sketch.category;
  if (!sketch.source_id.empty()) record["key_id"] = sketch.source_id;
  record["drawing"] = std::move(drawing);
  return record.dump();
}

std::vector<Sketch> read_quickdraw(std::istream& in) {
  std::vector<Sketch> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_quickdraw_line(line, line_number));
  }
  return out;
}

std::vector<Sketch> read_quickdraw_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path);
  return read_quickdraw(in);
}

}  // namespace tracksketch
