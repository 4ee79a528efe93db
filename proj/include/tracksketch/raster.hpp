#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tracksketch/geometry.hpp"

namespace tracksketch {

struct RenderSpec {
  int size = 512;          // output pixels per side
  double stroke_width = 3.0;  // output pixels
  int supersample = 2;

  void validate() const;
};

/// 8-bit grayscale, row-major, 0 = black ink, 255 = white paper.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, std::uint8_t fill = 255);

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct PixelCoord {
  int x = 0;
  int y = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Draws every stroke as a round-capped, round-joined polyline. Canvas
/// coordinate c maps to pixel coordinate c * size, with pixel centres at
/// integers. Coverage is sampled at supersample^2 points per pixel and box
/// filtered; the result is bit-exact for a given input.
RasterImage render(const Sketch& sketch, const RenderSpec& spec = {});

inline constexpr std::uint8_t kDefaultForegroundThreshold = 128;

/// Pixels darker than `threshold`, in row-major order.
std::vector<PixelCoord> foreground_points(const RasterImage& image,
                                          std::uint8_t threshold = kDefaultForegroundThreshold);

// PNG I/O (8-bit grayscale, no alpha, no interlacing).
void write_png(const RasterImage& image, const std::string& path);
std::vector<std::uint8_t> encode_png(const RasterImage& image);
/// Colour or alpha inputs are converted to 8-bit gray.
RasterImage read_png(const std::string& path);

}  // namespace tracksketch
