#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace aerosynth {

// 8-bit interleaved raster, row-major. Frames are RGB (3 channels).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, int c = 3, std::uint8_t fill = 0)
      : width(w), height(h), channels(c),
        pixels(static_cast<std::size_t>(w) * h * c, fill) {
    if (w <= 0 || h <= 0 || c <= 0) throw std::invalid_argument("empty image");
  }

  bool empty() const noexcept { return pixels.empty(); }

  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * width + x) * channels;
  }
  std::uint8_t* at(int x, int y) noexcept { return pixels.data() + offset(x, y); }
  const std::uint8_t* at(int x, int y) const noexcept {
    return pixels.data() + offset(x, y);
  }

  friend bool operator==(const Image&, const Image&) = default;
};

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend constexpr bool operator==(Rgb, Rgb) = default;
};

// Round half up and clamp to a byte.
inline std::uint8_t to_byte(double v) noexcept {
  const double r = std::floor(v + 0.5);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

// Floating-point RGB raster with a separate opacity plane. Used for sprites,
// where resampling needs sub-byte precision.
struct RgbaF {
  int width = 0;
  int height = 0;
  std::vector<float> color;  // 3 per pixel, [0,255]
  std::vector<float> alpha;  // 1 per pixel, [0,1]

  RgbaF() = default;
  RgbaF(int w, int h)
      : width(w), height(h), color(static_cast<std::size_t>(w) * h * 3, 0.0f),
        alpha(static_cast<std::size_t>(w) * h, 0.0f) {}

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width + x;
  }

  friend bool operator==(const RgbaF&, const RgbaF&) = default;
};

namespace detail {

// Separable triangle-filter weights for one axis. The filter support widens
// with the downscale factor so every source sample contributes to at least one
// output sample; for upscaling it is plain linear interpolation.
struct AxisWeights {
  std::vector<int> first;
  std::vector<std::vector<float>> weights;
};

inline AxisWeights triangle_weights(int in_size, int out_size) {
  AxisWeights aw;
  aw.first.resize(out_size);
  aw.weights.resize(out_size);
  const double scale = static_cast<double>(in_size) / out_size;
  const double support = std::max(1.0, scale);
  for (int i = 0; i < out_size; ++i) {
    const double center = (i + 0.5) * scale;
    int lo = static_cast<int>(std::floor(center - support));
    int hi = static_cast<int>(std::ceil(center + support));
    lo = std::max(lo, 0);
    hi = std::min(hi, in_size);
    std::vector<double> w;
    double total = 0.0;
    for (int j = lo; j < hi; ++j) {
      const double d = std::abs((j + 0.5 - center) / support);
      const double k = std::max(0.0, 1.0 - d);
      w.push_back(k);
      total += k;
    }
    if (total <= 0.0) {
      // Only reachable at the borders when upscaling; snap to nearest.
      const int nearest = std::clamp(static_cast<int>(center), 0, in_size - 1);
      aw.first[i] = nearest;
      aw.weights[i] = {1.0f};
      continue;
    }
    // Trim leading zero weights so `first` points at a contributing sample.
    std::size_t skip = 0;
    while (skip < w.size() && w[skip] == 0.0) ++skip;
    aw.first[i] = lo + static_cast<int>(skip);
    for (std::size_t j = skip; j < w.size(); ++j)
      aw.weights[i].push_back(static_cast<float>(w[j] / total));
    while (!aw.weights[i].empty() && aw.weights[i].back() == 0.0f)
      aw.weights[i].pop_back();
  }
  return aw;
}

}  // namespace detail

// Resample with premultiplied alpha so transparent pixels never bleed their
// color into the result.
inline RgbaF resample(const RgbaF& src, int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0) throw std::invalid_argument("resample: empty target");
  if (out_w == src.width && out_h == src.height) return src;

  const auto wx = detail::triangle_weights(src.width, out_w);
  const auto wy = detail::triangle_weights(src.height, out_h);

  // premultiplied planes: r*a, g*a, b*a, a
  const std::size_t n_src = static_cast<std::size_t>(src.width) * src.height;
  std::vector<float> pre(n_src * 4);
  for (std::size_t i = 0; i < n_src; ++i) {
    const float a = src.alpha[i];
    pre[i * 4 + 0] = src.color[i * 3 + 0] * a;
    pre[i * 4 + 1] = src.color[i * 3 + 1] * a;
    pre[i * 4 + 2] = src.color[i * 3 + 2] * a;
    pre[i * 4 + 3] = a;
  }

  // horizontal pass: src.height x out_w
  std::vector<float> tmp(static_cast<std::size_t>(src.height) * out_w * 4, 0.0f);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < out_w; ++x) {
      float acc[4] = {0, 0, 0, 0};
      const auto& ws = wx.weights[x];
      for (std::size_t k = 0; k < ws.size(); ++k) {
        const std::size_t s =
            (static_cast<std::size_t>(y) * src.width + wx.first[x] + k) * 4;
        for (int c = 0; c < 4; ++c) acc[c] += ws[k] * pre[s + c];
      }
      const std::size_t d = (static_cast<std::size_t>(y) * out_w + x) * 4;
      for (int c = 0; c < 4; ++c) tmp[d + c] = acc[c];
    }
  }

  RgbaF out(out_w, out_h);
  for (int y = 0; y < out_h; ++y) {
    const auto& ws = wy.weights[y];
    for (int x = 0; x < out_w; ++x) {
      double acc[4] = {0, 0, 0, 0};
      for (std::size_t k = 0; k < ws.size(); ++k) {
        const std::size_t s =
            ((static_cast<std::size_t>(wy.first[y]) + k) * out_w + x) * 4;
        for (int c = 0; c < 4; ++c) acc[c] += ws[k] * tmp[s + c];
      }
      const std::size_t i = out.index(x, y);
      const double a = std::clamp(acc[3], 0.0, 1.0);
      out.alpha[i] = static_cast<float>(a);
      for (int c = 0; c < 3; ++c) {
        const double v = a > 0.0 ? acc[c] / acc[3] : 0.0;
        out.color[i * 3 + c] = static_cast<float>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return out;
}

inline RgbaF to_float(const Image& img) {
  RgbaF out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const auto* p = img.at(x, y);
      const std::size_t i = out.index(x, y);
      for (int c = 0; c < 3; ++c) out.color[i * 3 + c] = p[std::min(c, img.channels - 1)];
      out.alpha[i] = img.channels == 4 ? p[3] / 255.0f : 1.0f;
    }
  return out;
}

inline Image to_rgb8(const RgbaF& f) {
  Image out(f.width, f.height, 3);
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x) {
      const std::size_t i = f.index(x, y);
      auto* p = out.at(x, y);
      for (int c = 0; c < 3; ++c) p[c] = to_byte(f.color[i * 3 + c]);
    }
  return out;
}

// Resize an opaque RGB frame (used to bring background frames to the target
// resolution).
inline Image resize_rgb(const Image& img, int w, int h) {
  if (img.width == w && img.height == h && img.channels == 3) return img;
  return to_rgb8(resample(to_float(img), w, h));
}

}  // namespace aerosynth
