#include "tracksketch/raster.hpp"

#include <algorithm>
#include <cmath>

#include "tracksketch/error.hpp"

namespace tracksketch {

void RenderSpec::validate() const {
  if (size < 16) throw config_error("render size must be >= 16");
  if (!(stroke_width >= 1.0) || !std::isfinite(stroke_width)) throw config_error("stroke width must be >= 1");
  if (supersample < 1) throw config_error("supersample must be >= 1");
}

RasterImage::RasterImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw Error(ErrorCategory::shape, "negative image dimensions");
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

namespace {

struct Coverage {
  int n = 0;
  std::vector<std::uint8_t> mask;

  explicit Coverage(int side) : n(side), mask(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), 0) {}

  // Marks every sample centre within `radius` of segment ab (a capsule, so
  // consecutive segments give round joins and the ends give round caps).
  void capsule(Point a, Point b, double radius) {
    const double r2 = radius * radius;
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - radius)));
    const int x1 = std::min(n - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius)));
    const int y1 = std::min(n - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + radius)));
    if (x0 > x1 || y0 > y1) return;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    for (int y = y0; y <= y1; ++y) {
      std::uint8_t* row = mask.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(n);
      const double py = static_cast<double>(y) - a.y;
      for (int x = x0; x <= x1; ++x) {
        if (row[x]) continue;
        const double px = static_cast<double>(x) - a.x;
        double t = len2 > 0.0 ? (px * dx + py * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double ex = px - t * dx;
        const double ey = py - t * dy;
        if (ex * ex + ey * ey <= r2) row[x] = 1;
      }
    }
  }
};

}  // namespace

RasterImage render(const Sketch& sketch, const RenderSpec& spec) {
  spec.validate();
  const int ss = spec.supersample;
  const int n = spec.size * ss;
  Coverage cov(n);
  const double radius = 0.5 * spec.stroke_width * ss;
  // Sub-sample m has its centre at output coordinate (m + 0.5) / ss - 0.5.
  auto to_sample = [&](Point p) {
    return Point{(p.x * spec.size + 0.5) * ss - 0.5, (p.y * spec.size + 0.5) * ss - 0.5};
  };

  for (const auto& st : sketch.strokes) {
    if (st.points.empty()) continue;
    if (st.points.size() == 1) {
      const Point p = to_sample(st.points.front());
      cov.capsule(p, p, radius);
      continue;
    }
    Point prev = to_sample(st.points.front());
    for (std::size_t i = 1; i < st.points.size(); ++i) {
      const Point cur = to_sample(st.points[i]);
      cov.capsule(prev, cur, radius);
      prev = cur;
    }
  }

  RasterImage img(spec.size, spec.size, 255);
  const int area = ss * ss;
  for (int y = 0; y < spec.size; ++y) {
    for (int x = 0; x < spec.size; ++x) {
      int count = 0;
      for (int sy = 0; sy < ss; ++sy) {
        const std::uint8_t* row =
            cov.mask.data() + static_cast<std::size_t>(y * ss + sy) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(x * ss);
        for (int sx = 0; sx < ss; ++sx) count += row[sx];
      }
      if (count) img.at(x, y) = static_cast<std::uint8_t>(255 - (255 * count + area / 2) / area);
    }
  }
  return img;
}

std::vector<PixelCoord> foreground_points(const RasterImage& image, std::uint8_t threshold) {
  std::vector<PixelCoord> out;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (image.at(x, y) < threshold) out.push_back({x, y});
    }
  }
  return out;
}

}  // namespace tracksketch
