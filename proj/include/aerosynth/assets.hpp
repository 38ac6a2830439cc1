#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aerosynth/errors.hpp"
#include "aerosynth/geometry.hpp"
#include "aerosynth/image.hpp"
#include "aerosynth/png_io.hpp"

namespace aerosynth {

// Background-subtracted sprite. The sprite raster covers exactly `tight_box`,
// which is expressed in the coordinates of the image the sprite was cut from
// (scaled along with the sprite on resize).
struct ForegroundAsset {
  RgbaF sprite;
  ObjectClass class_label = ObjectClass::drone;
  BoundingBox tight_box;
  std::string asset_id;

  int width() const noexcept { return sprite.width; }
  int height() const noexcept { return sprite.height; }
};

struct BackgroundVideo {
  std::vector<Image> frames;
  std::string video_id;

  int width() const noexcept { return frames.empty() ? 0 : frames.front().width; }
  int height() const noexcept { return frames.empty() ? 0 : frames.front().height; }
};

// Minimal rectangle holding every alpha > 0 pixel, in sprite coordinates.
inline std::optional<BoundingBox> support_box(const RgbaF& s) {
  int x0 = s.width, y0 = s.height, x1 = -1, y1 = -1;
  for (int y = 0; y < s.height; ++y)
    for (int x = 0; x < s.width; ++x)
      if (s.alpha[s.index(x, y)] > 0.0f) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) return std::nullopt;
  return BoundingBox{double(x0), double(y0), double(x1 - x0 + 1),
                     double(y1 - y0 + 1)};
}

// Chroma-key extraction: a pixel is background when every channel is within
// `tolerance` of `background`. Fully transparent RGBA pixels also count as
// background. The result is cropped to the remaining support.
inline ForegroundAsset extract_foreground(const Image& image, Rgb background,
                                          int tolerance,
                                          ObjectClass label = ObjectClass::drone,
                                          std::string asset_id = {}) {
  if (image.empty()) throw ValidationError("extract_foreground: empty image");
  if (tolerance < 0) throw ValidationError("extract_foreground: negative tolerance");

  auto is_background = [&](const std::uint8_t* p) {
    if (image.channels == 4 && p[3] == 0) return true;
    const int dr = std::abs(int(p[0]) - background.r);
    const int dg = std::abs(int(p[std::min(1, image.channels - 1)]) - background.g);
    const int db = std::abs(int(p[std::min(2, image.channels - 1)]) - background.b);
    return std::max({dr, dg, db}) <= tolerance;
  };

  int x0 = image.width, y0 = image.height, x1 = -1, y1 = -1;
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x)
      if (!is_background(image.at(x, y))) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) throw EmptyForeground();

  ForegroundAsset a;
  a.class_label = label;
  a.asset_id = std::move(asset_id);
  a.tight_box = {double(x0), double(y0), double(x1 - x0 + 1), double(y1 - y0 + 1)};
  a.sprite = RgbaF(x1 - x0 + 1, y1 - y0 + 1);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const auto* p = image.at(x, y);
      const std::size_t i = a.sprite.index(x - x0, y - y0);
      for (int c = 0; c < 3; ++c)
        a.sprite.color[i * 3 + c] = p[std::min(c, image.channels - 1)];
      a.sprite.alpha[i] = is_background(p) ? 0.0f : 1.0f;
    }
  return a;
}

// Output size when scaling (w, h) so that the smaller edge becomes `target`.
inline std::pair<int, int> smaller_edge_size(int w, int h, int target) {
  if (target < 1) throw std::invalid_argument("target edge must be >= 1");
  if (w <= h) {
    const auto other = static_cast<int>(std::floor(double(h) * target / w + 0.5));
    return {target, std::max(other, 1)};
  }
  const auto other = static_cast<int>(std::floor(double(w) * target / h + 0.5));
  return {std::max(other, 1), target};
}

inline ForegroundAsset resize_to_smaller_edge(const ForegroundAsset& asset,
                                              int target) {
  const auto [w, h] = smaller_edge_size(asset.width(), asset.height(), target);
  if (w == asset.width() && h == asset.height()) return asset;
  ForegroundAsset out;
  out.class_label = asset.class_label;
  out.asset_id = asset.asset_id;
  out.sprite = resample(asset.sprite, w, h);
  const double sx = double(w) / asset.width();
  const double sy = double(h) / asset.height();
  out.tight_box = {asset.tight_box.x * sx, asset.tight_box.y * sy, double(w),
                   double(h)};
  return out;
}

struct PixelPos {
  int x = 0;
  int y = 0;
};

struct OverlayResult {
  Image image;
  BoundingBox box;  // pixel units
};

// Alpha-composite the sprite with its top-left corner at `pos`. The input
// frame is left untouched.
inline OverlayResult overlay(const Image& frame, const ForegroundAsset& asset,
                             PixelPos pos) {
  if (pos.x < 0 || pos.y < 0 || pos.x + asset.width() > frame.width ||
      pos.y + asset.height() > frame.height)
    throw OutOfBounds("sprite " + asset.asset_id + " at (" +
                      std::to_string(pos.x) + "," + std::to_string(pos.y) +
                      ") exceeds the frame");
  OverlayResult r{frame, {double(pos.x), double(pos.y), double(asset.width()),
                          double(asset.height())}};
  const auto& s = asset.sprite;
  for (int y = 0; y < s.height; ++y)
    for (int x = 0; x < s.width; ++x) {
      const std::size_t i = s.index(x, y);
      const double a = s.alpha[i];
      if (a <= 0.0) continue;
      auto* p = r.image.at(pos.x + x, pos.y + y);
      for (int c = 0; c < 3; ++c)
        p[c] = to_byte(a * s.color[i * 3 + c] + (1.0 - a) * p[c]);
    }
  return r;
}

// ---------------------------------------------------------------------------
// Asset manifest: `<path> <drone|bird> <RRGGBB> <tolerance>` per line.
// Blank lines and lines starting with '#' are ignored. Relative paths are
// resolved against the manifest's directory.

struct AssetEntry {
  std::filesystem::path path;
  ObjectClass class_label = ObjectClass::drone;
  Rgb background;
  int tolerance = 0;
};

inline Rgb parse_hex_color(const std::string& s) {
  std::string h = s;
  if (!h.empty() && h.front() == '#') h.erase(0, 1);
  if (h.size() != 6) throw ValidationError("bad color '" + s + "'");
  unsigned v = 0;
  const auto [ptr, ec] = std::from_chars(h.data(), h.data() + h.size(), v, 16);
  if (ec != std::errc{} || ptr != h.data() + h.size())
    throw ValidationError("bad color '" + s + "'");
  return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
          static_cast<std::uint8_t>(v)};
}

inline std::optional<ObjectClass> parse_class(const std::string& s) {
  if (s == "drone" || s == "0") return ObjectClass::drone;
  if (s == "bird" || s == "1") return ObjectClass::bird;
  return std::nullopt;
}

inline std::vector<AssetEntry> parse_asset_manifest(std::istream& in,
                                                    const std::filesystem::path& base = {}) {
  std::vector<AssetEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string path, cls, color, extra;
    int tol = -1;
    if (!(ls >> path >> cls >> color >> tol) || (ls >> extra) || tol < 0 || tol > 255)
      throw ValidationError("asset manifest line " + std::to_string(lineno) +
                            ": expected '<path> <drone|bird> <RRGGBB> <0-255>'");
    const auto c = parse_class(cls);
    if (!c)
      throw ValidationError("asset manifest line " + std::to_string(lineno) +
                            ": unknown class '" + cls + "'");
    std::filesystem::path p(path);
    if (p.is_relative() && !base.empty()) p = base / p;
    out.push_back({p, *c, parse_hex_color(color), tol});
  }
  return out;
}

inline std::vector<AssetEntry> read_asset_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError(file.string() + ": cannot open asset manifest");
  return parse_asset_manifest(in, file.parent_path());
}

inline std::vector<ForegroundAsset> load_assets(const std::vector<AssetEntry>& entries) {
  std::vector<ForegroundAsset> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    const Image img = read_png(e.path);
    try {
      out.push_back(extract_foreground(img, e.background, e.tolerance,
                                       e.class_label, e.path.stem().string()));
    } catch (const EmptyForeground&) {
      throw ValidationError(e.path.string() + ": every pixel matches the background color");
    }
  }
  return out;
}

// A video is a directory of frame images, ordered by file name.
inline BackgroundVideo load_video_dir(const std::filesystem::path& dir, int width,
                                      int height) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  if (ec) throw IoError(dir.string(), ec.message());
  if (files.empty()) throw ValidationError(dir.string() + ": no .png frames");
  std::sort(files.begin(), files.end());
  BackgroundVideo v;
  v.video_id = dir.filename().string();
  for (const auto& f : files) v.frames.push_back(resize_rgb(read_png(f), width, height));
  return v;
}

// Every subdirectory of `root` is one video.
inline std::vector<BackgroundVideo> load_videos(const std::filesystem::path& root,
                                                int width, int height) {
  std::vector<std::filesystem::path> dirs;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(root, ec))
    if (e.is_directory()) dirs.push_back(e.path());
  if (ec) throw IoError(root.string(), ec.message());
  if (dirs.empty()) throw ValidationError(root.string() + ": no video directories");
  std::sort(dirs.begin(), dirs.end());
  std::vector<BackgroundVideo> out;
  for (const auto& d : dirs) out.push_back(load_video_dir(d, width, height));
  return out;
}

}  // namespace aerosynth
