#include "tracksketch/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tracksketch/error.hpp"

namespace tracksketch {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

Point clamp_unit(Point p) {
  return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)};
}

std::size_t Sketch::point_count() const {
  std::size_t n = 0;
  for (const auto& st : strokes) n += st.points.size();
  return n;
}

void CanvasSpec::validate() const {
  if (!(margin >= 0.0 && margin < 0.5)) {
    throw config_error("canvas margin must lie in [0, 0.5)");
  }
}

Bounds bounds(std::span<const Point> points) {
  if (points.empty()) {
    throw Error(ErrorCategory::empty_sketch, "bounds of an empty point set");
  }
  Bounds b{points.front(), points.front()};
  for (const Point& p : points) {
    b.min.x = std::min(b.min.x, p.x);
    b.min.y = std::min(b.min.y, p.y);
    b.max.x = std::max(b.max.x, p.x);
    b.max.y = std::max(b.max.y, p.y);
  }
  return b;
}

Bounds bounds(const Sketch& sketch) {
  bool any = false;
  Bounds b;
  for (const auto& st : sketch.strokes) {
    if (st.points.empty()) continue;
    const Bounds sb = bounds(st.points);
    if (!any) {
      b = sb;
      any = true;
      continue;
    }
    b.min.x = std::min(b.min.x, sb.min.x);
    b.min.y = std::min(b.min.y, sb.min.y);
    b.max.x = std::max(b.max.x, sb.max.x);
    b.max.y = std::max(b.max.y, sb.max.y);
  }
  if (!any) throw Error(ErrorCategory::empty_sketch, "bounds of an empty sketch");
  return b;
}

Sketch normalize(const Sketch& sketch, const CanvasSpec& spec) {
  spec.validate();
  const Bounds b = bounds(sketch);
  const double extent = std::max(b.width(), b.height());
  const double scale = extent > 0.0 ? (1.0 - 2.0 * spec.margin) / extent : 1.0;
  const Point c = b.center();

  Sketch out;
  out.category = sketch.category;
  out.source_id = sketch.source_id;
  out.strokes.reserve(sketch.strokes.size());
  for (const auto& st : sketch.strokes) {
    if (st.points.empty()) continue;
    Stroke ns;
    ns.points.reserve(std::max<std::size_t>(2, st.points.size()));
    for (const Point& p : st.points) {
      ns.points.push_back(clamp_unit({(p.x - c.x) * scale + 0.5, (p.y - c.y) * scale + 0.5}));
    }
    if (ns.points.size() == 1) ns.points.push_back(ns.points.front());
    out.strokes.push_back(std::move(ns));
  }
  return out;
}

double path_length(const Stroke& stroke) {
  double len = 0.0;
  for (std::size_t i = 1; i < stroke.points.size(); ++i) {
    len += distance(stroke.points[i - 1], stroke.points[i]);
  }
  return len;
}

double path_length(const Sketch& sketch) {
  double len = 0.0;
  for (const auto& st : sketch.strokes) len += path_length(st);
  return len;
}

std::vector<double> cumulative_length(std::span<const Point> points) {
  std::vector<double> cum(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    cum[i] = cum[i - 1] + distance(points[i - 1], points[i]);
  }
  return cum;
}

Stroke resample_arclength(const Stroke& stroke, double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw config_error("resample spacing must be positive");
  }
  if (stroke.points.size() < 2 || path_length(stroke) == 0.0) return stroke;

  Stroke out;
  out.points.push_back(stroke.points.front());
  for (std::size_t i = 1; i < stroke.points.size(); ++i) {
    const Point a = stroke.points[i - 1];
    const Point b = stroke.points[i];
    const double len = distance(a, b);
    if (len == 0.0) continue;
    // The small slack keeps exact multiples (1.0 / 0.25) from gaining a piece.
    const auto pieces = static_cast<std::size_t>(
        std::max(1.0, std::ceil(len / spacing - 1e-9)));
    for (std::size_t k = 1; k < pieces; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(pieces);
      out.points.push_back({a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t});
    }
    out.points.push_back(b);
  }
  return out;
}

Sketch resample_arclength(const Sketch& sketch, double spacing) {
  Sketch out;
  out.category = sketch.category;
  out.source_id = sketch.source_id;
  out.strokes.reserve(sketch.strokes.size());
  for (const auto& st : sketch.strokes) out.strokes.push_back(resample_arclength(st, spacing));
  return out;
}

ArcSample sample_at_length(std::span<const Point> points, std::span<const double> cumulative,
                           double s) {
  ArcSample out;
  if (points.empty()) return out;
  if (points.size() == 1) {
    out.position = points.front();
    out.tangent = {1.0, 0.0};
    return out;
  }
  const double total = cumulative.back();
  s = std::clamp(s, 0.0, total);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
  std::size_t seg = it == cumulative.begin() ? 0 : static_cast<std::size_t>(it - cumulative.begin()) - 1;
  seg = std::min(seg, points.size() - 2);
  // Skip zero-length segments so the tangent is well defined.
  while (seg + 1 < points.size() - 1 && cumulative[seg + 1] == cumulative[seg]) ++seg;
  const Point a = points[seg];
  const Point b = points[seg + 1];
  const double seg_len = cumulative[seg + 1] - cumulative[seg];
  const double t = seg_len > 0.0 ? (s - cumulative[seg]) / seg_len : 0.0;
  out.position = {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
  out.tangent = seg_len > 0.0 ? Point{(b.x - a.x) / seg_len, (b.y - a.y) / seg_len} : Point{1.0, 0.0};
  out.segment = seg;
  return out;
}

Point vertex_centroid(const Stroke& stroke) {
  Point c;
  if (stroke.points.empty()) return c;
  for (const Point& p : stroke.points) c = c + p;
  return c * (1.0 / static_cast<double>(stroke.points.size()));
}

}  // namespace tracksketch
