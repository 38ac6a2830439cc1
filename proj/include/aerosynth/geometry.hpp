#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <vector>

namespace aerosynth {

// Axis-aligned rectangle stored as (left, top, width, height).
//
// The same type carries pixel boxes during synthesis and normalized
// (image-fraction) boxes during detection and evaluation; which one applies is
// decided by the caller. Conversion happens in to_normalized / to_pixels only.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  constexpr double left() const noexcept { return x; }
  constexpr double top() const noexcept { return y; }
  constexpr double right() const noexcept { return x + w; }
  constexpr double bottom() const noexcept { return y + h; }
  constexpr double area() const noexcept { return w * h; }
  constexpr double center_x() const noexcept { return x + 0.5 * w; }
  constexpr double center_y() const noexcept { return y + 0.5 * h; }

  constexpr bool valid() const noexcept { return w > 0.0 && h > 0.0; }

  static constexpr BoundingBox from_center(double cx, double cy, double w,
                                           double h) noexcept {
    return {cx - 0.5 * w, cy - 0.5 * h, w, h};
  }

  friend constexpr bool operator==(const BoundingBox&,
                                   const BoundingBox&) = default;
};

inline constexpr double kUnitEpsilon = 1e-9;

inline bool within_unit_square(const BoundingBox& b,
                               double eps = kUnitEpsilon) noexcept {
  return b.x >= -eps && b.y >= -eps && b.right() <= 1.0 + eps &&
         b.bottom() <= 1.0 + eps;
}

inline double intersection_area(const BoundingBox& a,
                                const BoundingBox& b) noexcept {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

// True when the two rectangles share an interior region of positive area.
inline bool intersects(const BoundingBox& a, const BoundingBox& b) noexcept {
  return intersection_area(a, b) > 0.0;
}

inline double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  if (a == b) return 1.0;
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

inline BoundingBox enclosing_box(const BoundingBox& a,
                                 const BoundingBox& b) noexcept {
  const double l = std::min(a.x, b.x);
  const double t = std::min(a.y, b.y);
  const double r = std::max(a.right(), b.right());
  const double btm = std::max(a.bottom(), b.bottom());
  return {l, t, r - l, btm - t};
}

// `outer` contains `inner` (edges may coincide).
inline bool contains(const BoundingBox& outer,
                     const BoundingBox& inner) noexcept {
  return inner.x >= outer.x && inner.y >= outer.y &&
         inner.right() <= outer.right() && inner.bottom() <= outer.bottom();
}

// Same center, each side scaled by `factor`. No clamping to the image.
inline BoundingBox expand_box(const BoundingBox& b, double factor) noexcept {
  if (factor == 1.0) return b;
  return BoundingBox::from_center(b.center_x(), b.center_y(), b.w * factor,
                                  b.h * factor);
}

inline BoundingBox to_normalized(const BoundingBox& px, double image_width,
                                 double image_height) noexcept {
  return {px.x / image_width, px.y / image_height, px.w / image_width,
          px.h / image_height};
}

inline BoundingBox to_pixels(const BoundingBox& n, double image_width,
                             double image_height) noexcept {
  return {n.x * image_width, n.y * image_height, n.w * image_width,
          n.h * image_height};
}

enum class ObjectClass : int { drone = 0, bird = 1 };

inline constexpr std::string_view to_string(ObjectClass c) noexcept {
  return c == ObjectClass::drone ? "drone" : "bird";
}

// One decoded detector slot. `box` is normalized.
struct Detection {
  BoundingBox box;
  double objectness = 0.0;
  std::vector<double> class_probs;
  ObjectClass class_label = ObjectClass::drone;

  // Position in the grid the detection came from (row-major, anchor-minor).
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t anchor = 0;

  double class_prob(ObjectClass c) const noexcept {
    const auto i = static_cast<std::size_t>(c);
    return i < class_probs.size() ? class_probs[i] : 0.0;
  }

  // objectness multiplied by the conditional probability of the drone class
  double drone_score() const noexcept {
    return objectness * class_prob(ObjectClass::drone);
  }
};

}  // namespace aerosynth
