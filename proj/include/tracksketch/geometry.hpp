#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tracksketch {

/// Absolute position on the unit canvas. x grows rightwards, y grows downwards
/// (image convention, same as Quick, Draw!).
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }

double distance(Point a, Point b);
double dot(Point a, Point b);
Point clamp_unit(Point p);

/// Points in drawing order.
struct Stroke {
  std::vector<Point> points;

  friend bool operator==(const Stroke&, const Stroke&) = default;
};

struct Sketch {
  std::vector<Stroke> strokes;
  std::string category;
  std::string source_id;

  friend bool operator==(const Sketch&, const Sketch&) = default;

  std::size_t point_count() const;
};

struct CanvasSpec {
  double margin = 0.05;

  void validate() const;
};

struct Bounds {
  Point min;
  Point max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  Point center() const { return {(min.x + max.x) * 0.5, (min.y + max.y) * 0.5}; }
};

inline constexpr double kDefaultResampleSpacing = 0.01;

/// Axis-aligned box of every point in the sketch. Throws empty_sketch when the
/// sketch holds no points.
Bounds bounds(const Sketch& sketch);
Bounds bounds(std::span<const Point> points);

/// Uniform scale + translate so the bounding box is centred in
/// [margin, 1 - margin]^2, preserving aspect ratio. Single-point sketches are
/// centred without scaling. Strokes with a single point are widened to two
/// coincident points so every stroke is drawable.
Sketch normalize(const Sketch& sketch, const CanvasSpec& spec = {});

double path_length(const Stroke& stroke);
double path_length(const Sketch& sketch);

/// Cumulative arc length at each vertex (first entry 0).
std::vector<double> cumulative_length(std::span<const Point> points);

/// Subdivides every segment into equal pieces no longer than `spacing`.
/// Original vertices are kept, consecutive duplicates dropped.
Stroke resample_arclength(const Stroke& stroke, double spacing);
Sketch resample_arclength(const Sketch& sketch, double spacing);

/// Position and unit tangent at arc length `s` along the polyline.
struct ArcSample {
  Point position;
  Point tangent;
  std::size_t segment = 0;
};
ArcSample sample_at_length(std::span<const Point> points,
                           std::span<const double> cumulative, double s);

/// Mean of the stroke's vertices.
Point vertex_centroid(const Stroke& stroke);

}  // namespace tracksketch
