#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "aerosynth/anchors.hpp"
#include "aerosynth/dataset_io.hpp"
#include "aerosynth/errors.hpp"
#include "aerosynth/geometry.hpp"
#include "aerosynth/random.hpp"

namespace aerosynth {

inline constexpr std::size_t output_depth(std::size_t n_cls, std::size_t n_coord,
                                          std::size_t n_anc) noexcept {
  return (n_cls + n_coord + 1) * n_anc;
}

// Raw detector output, S x S x depth, row-major (row, col, channel).
// Channels of one anchor slot are laid out as
//   tx ty tw th | objectness | class logits...
// and slots follow each other anchor by anchor.
struct DetectionGrid {
  std::size_t S = 15;
  std::size_t n_cls = 2;
  std::size_t n_coord = 4;
  std::size_t n_anc = 5;
  std::vector<float> values;

  DetectionGrid() = default;
  DetectionGrid(std::size_t s, std::size_t cls, std::size_t coord, std::size_t anc,
                float fill = 0.0f)
      : S(s), n_cls(cls), n_coord(coord), n_anc(anc),
        values(s * s * output_depth(cls, coord, anc), fill) {}

  std::size_t depth() const noexcept { return output_depth(n_cls, n_coord, n_anc); }
  std::size_t slot_width() const noexcept { return n_cls + n_coord + 1; }

  std::size_t index(std::size_t row, std::size_t col, std::size_t channel) const noexcept {
    return (row * S + col) * depth() + channel;
  }
  std::size_t slot_index(std::size_t row, std::size_t col, std::size_t anchor) const noexcept {
    return index(row, col, anchor * slot_width());
  }

  std::span<float> slot(std::size_t row, std::size_t col, std::size_t anchor) {
    return {values.data() + slot_index(row, col, anchor), slot_width()};
  }
  std::span<const float> slot(std::size_t row, std::size_t col, std::size_t anchor) const {
    return {values.data() + slot_index(row, col, anchor), slot_width()};
  }

  std::array<std::size_t, 3> shape() const noexcept { return {S, S, depth()}; }

  friend bool operator==(const DetectionGrid&, const DetectionGrid&) = default;
};

inline double sigmoid(double v) noexcept { return 1.0 / (1.0 + std::exp(-v)); }
inline double logit(double p) noexcept { return std::log(p / (1.0 - p)); }

inline constexpr double kCodecEpsilon = 1e-6;
inline constexpr double kClassLogit = 10.0;

namespace detail {

inline void check_coords(const DetectionGrid& g) {
  if (g.n_coord != 4) throw ValidationError("grid codec needs exactly 4 box coordinates");
  if (g.S == 0 || g.n_cls == 0 || g.n_anc == 0) throw ValidationError("empty grid shape");
  if (g.values.size() != g.S * g.S * g.depth())
    throw ValidationError("grid value count does not match its shape");
}

}  // namespace detail

// Every slot of the grid becomes one Detection, in row-major, anchor-minor
// order. No thresholding.
inline std::vector<Detection> decode(const DetectionGrid& grid,
                                     std::span<const AnchorShape> anchors) {
  detail::check_coords(grid);
  if (anchors.size() != grid.n_anc)
    throw AnchorMismatch("grid has " + std::to_string(grid.n_anc) + " anchors, got " +
                         std::to_string(anchors.size()));
  const double S = static_cast<double>(grid.S);
  std::vector<Detection> out;
  out.reserve(grid.S * grid.S * grid.n_anc);
  for (std::size_t r = 0; r < grid.S; ++r)
    for (std::size_t c = 0; c < grid.S; ++c)
      for (std::size_t a = 0; a < grid.n_anc; ++a) {
        const auto v = grid.slot(r, c, a);
        Detection d;
        d.row = r;
        d.col = c;
        d.anchor = a;
        const double cx = (double(c) + sigmoid(v[0])) / S;
        const double cy = (double(r) + sigmoid(v[1])) / S;
        const double w = anchors[a].w * std::exp(double(v[2]));
        const double h = anchors[a].h * std::exp(double(v[3]));
        d.box = BoundingBox::from_center(cx, cy, w, h);
        d.objectness = sigmoid(v[4]);

        const auto logits = v.subspan(5, grid.n_cls);
        const double mx = *std::max_element(logits.begin(), logits.end());
        double total = 0.0;
        d.class_probs.resize(grid.n_cls);
        for (std::size_t k = 0; k < grid.n_cls; ++k) {
          d.class_probs[k] = std::exp(double(logits[k]) - mx);
          total += d.class_probs[k];
        }
        std::size_t best = 0;
        for (std::size_t k = 0; k < grid.n_cls; ++k) {
          d.class_probs[k] /= total;
          if (d.class_probs[k] > d.class_probs[best]) best = k;
        }
        d.class_label = best == 0 ? ObjectClass::drone : ObjectClass::bird;
        out.push_back(std::move(d));
      }
  return out;
}

// Anchor whose shape, centered on the box center, overlaps the box best.
inline std::size_t best_anchor(const BoundingBox& box, std::span<const AnchorShape> anchors) {
  std::size_t best = 0;
  double best_iou = -1.0;
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    const auto shape = BoundingBox::from_center(box.center_x(), box.center_y(),
                                                anchors[a].w, anchors[a].h);
    const double v = iou(box, shape);
    if (v > best_iou) {
      best_iou = v;
      best = a;
    }
  }
  return best;
}

struct EncodeOptions {
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
  std::size_t n_cls = 2;
};

// Ground truth to raw tensor: the exact inverse of decode() for each
// annotation. Used as a stand-in detector.
inline DetectionGrid encode(std::span<const Annotation> annotations, std::size_t S,
                            std::span<const AnchorShape> anchors,
                            const EncodeOptions& opt = {}) {
  if (S == 0) throw ValidationError("grid side must be >= 1");
  if (anchors.empty()) throw AnchorMismatch("no anchors");
  DetectionGrid g(S, opt.n_cls, 4, anchors.size());
  const float empty_objectness = static_cast<float>(logit(kCodecEpsilon));
  for (std::size_t r = 0; r < S; ++r)
    for (std::size_t c = 0; c < S; ++c)
      for (std::size_t a = 0; a < g.n_anc; ++a) g.slot(r, c, a)[4] = empty_objectness;

  std::vector<bool> taken(S * S * g.n_anc, false);
  const double s = static_cast<double>(S);
  for (const auto& ann : annotations) {
    const auto& b = ann.box;
    if (!b.valid()) throw ValidationError("annotation box must have positive size");
    const auto cls = static_cast<std::size_t>(ann.class_label);
    if (cls >= g.n_cls) throw ValidationError("annotation class outside the grid's classes");
    const double gx = b.center_x() * s;
    const double gy = b.center_y() * s;
    const auto col = static_cast<std::size_t>(std::clamp(std::floor(gx), 0.0, s - 1.0));
    const auto row = static_cast<std::size_t>(std::clamp(std::floor(gy), 0.0, s - 1.0));
    const std::size_t a = best_anchor(b, anchors);
    const std::size_t key = (row * S + col) * g.n_anc + a;
    if (taken[key])
      throw CellCollision("two annotations map to cell (" + std::to_string(row) + "," +
                          std::to_string(col) + ") anchor " + std::to_string(a));
    taken[key] = true;

    auto v = g.slot(row, col, a);
    const double ox = std::clamp(gx - double(col), kCodecEpsilon, 1.0 - kCodecEpsilon);
    const double oy = std::clamp(gy - double(row), kCodecEpsilon, 1.0 - kCodecEpsilon);
    v[0] = static_cast<float>(logit(ox));
    v[1] = static_cast<float>(logit(oy));
    v[2] = static_cast<float>(std::log(b.w / anchors[a].w));
    v[3] = static_cast<float>(std::log(b.h / anchors[a].h));
    v[4] = static_cast<float>(logit(1.0 - kCodecEpsilon));
    for (std::size_t k = 0; k < g.n_cls; ++k)
      v[5 + k] = static_cast<float>(k == cls ? kClassLogit : -kClassLogit);
  }

  if (opt.noise_sigma > 0.0) {
    Rng rng(mix_seed(opt.noise_seed, 0x9015eULL));
    std::normal_distribution<double> noise(0.0, opt.noise_sigma);
    for (auto& x : g.values) x = static_cast<float>(x + noise(rng));
  }
  return g;
}

// ---------------------------------------------------------------------------
// DGRD tensor file: "DGRD", u32 S, n_cls, n_coord, n_anc (little endian), then
// S*S*depth little-endian IEEE-754 floats, row-major.

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

}  // namespace detail

inline std::string serialize_grid(const DetectionGrid& g) {
  std::string buf = "DGRD";
  buf.reserve(20 + g.values.size() * 4);
  detail::put_u32(buf, static_cast<std::uint32_t>(g.S));
  detail::put_u32(buf, static_cast<std::uint32_t>(g.n_cls));
  detail::put_u32(buf, static_cast<std::uint32_t>(g.n_coord));
  detail::put_u32(buf, static_cast<std::uint32_t>(g.n_anc));
  for (float f : g.values) detail::put_u32(buf, std::bit_cast<std::uint32_t>(f));
  return buf;
}

inline DetectionGrid deserialize_grid(std::span<const unsigned char> bytes,
                                      const std::string& what = "tensor") {
  if (bytes.size() < 20 || std::memcmp(bytes.data(), "DGRD", 4) != 0)
    throw ValidationError(what + ": not a DGRD tensor");
  DetectionGrid g;
  g.S = detail::get_u32(bytes.data() + 4);
  g.n_cls = detail::get_u32(bytes.data() + 8);
  g.n_coord = detail::get_u32(bytes.data() + 12);
  g.n_anc = detail::get_u32(bytes.data() + 16);
  const std::uint64_t count = std::uint64_t(g.S) * g.S * g.depth();
  if (bytes.size() != 20 + count * 4)
    throw ValidationError(what + ": size does not match header shape");
  g.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    g.values[i] = std::bit_cast<float>(detail::get_u32(bytes.data() + 20 + 4 * i));
    if (!std::isfinite(g.values[i])) throw ValidationError(what + ": non-finite value");
  }
  return g;
}

inline void write_grid(const std::filesystem::path& path, const DetectionGrid& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  const auto buf = serialize_grid(g);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError(path.string(), "write failed");
}

inline DetectionGrid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open tensor file");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return deserialize_grid(bytes, path.string());
}

}  // namespace aerosynth
