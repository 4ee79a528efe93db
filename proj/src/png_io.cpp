#include <png.h>

#include <cstring>
#include <fstream>

#include "tracksketch/error.hpp"
#include "tracksketch/raster.hpp"

namespace tracksketch {
namespace {

png_image gray_header(const RasterImage& image) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_GRAY;
  return img;
}

}  // namespace

// The simplified libpng API writes no time chunk and uses fixed compression
// settings, so the bytes depend only on the pixels.
std::vector<std::uint8_t> encode_png(const RasterImage& image) {
  png_image img = gray_header(image);
  png_alloc_size_t size = PNG_IMAGE_PNG_SIZE_MAX(img);
  std::vector<std::uint8_t> bytes(size);
  if (!png_image_write_to_memory(&img, bytes.data(), &size, 0, image.pixels().data(), 0, nullptr)) {
    throw Error(ErrorCategory::io, std::string("png encode: ") + img.message);
  }
  bytes.resize(size);
  return bytes;
}

void write_png(const RasterImage& image, const std::string& path) {
  const auto bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::io, "cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCategory::io, "failed writing " + path);
}

RasterImage read_png(const std::string& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw Error(ErrorCategory::io, "cannot read png " + path + ": " + img.message);
  }
  img.format = PNG_FORMAT_GRAY;
  RasterImage out(static_cast<int>(img.width), static_cast<int>(img.height));
  if (!png_image_finish_read(&img, nullptr, out.pixels().data(), 0, nullptr)) {
    const std::string message = img.message;
    png_image_free(&img);
    throw Error(ErrorCategory::io, "cannot decode png " + path + ": " + message);
  }
  return out;
}

}  // namespace tracksketch
