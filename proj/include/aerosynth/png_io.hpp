#pragma once

#include <png.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "aerosynth/errors.hpp"
#include "aerosynth/image.hpp"

namespace aerosynth {

// Reads any PNG libpng understands. Images with transparency come back as
// 4-channel RGBA, everything else as RGB.
inline Image read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  const std::string p = path.string();
  if (!png_image_begin_read_from_file(&img, p.c_str()))
    throw IoError(p, img.message);

  const bool has_alpha = (img.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  img.format = has_alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  Image out(static_cast<int>(img.width), static_cast<int>(img.height),
            has_alpha ? 4 : 3);
  if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
    png_image_free(&img);
    throw IoError(p, img.message);
  }
  return out;
}

inline void write_png(const std::filesystem::path& path, const Image& image) {
  if (image.channels != 3 && image.channels != 4)
    throw std::invalid_argument("write_png: expected RGB or RGBA");
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = image.channels == 4 ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  const std::string p = path.string();
  if (!png_image_write_to_file(&img, p.c_str(), 0, image.pixels.data(), 0,
                               nullptr))
    throw IoError(p, img.message);
}

}  // namespace aerosynth
