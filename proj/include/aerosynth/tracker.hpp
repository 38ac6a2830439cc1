#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "aerosynth/geometry.hpp"

namespace aerosynth {

enum class ScoreMode {
  objectness,  // threshold and rank on objectness alone
  combined,    // objectness * P(drone)
};

inline double detection_score(const Detection& d, ScoreMode mode) noexcept {
  return mode == ScoreMode::objectness ? d.objectness : d.drone_score();
}

// Drop birds and everything scoring at or below `threshold`, then take the
// highest score. Ties keep the earliest detection (row, col, anchor order).
inline std::optional<Detection> select_best(std::span<const Detection> detections,
                                            double threshold,
                                            ScoreMode mode = ScoreMode::objectness) {
  const Detection* best = nullptr;
  double best_score = 0.0;
  for (const auto& d : detections) {
    if (d.class_label == ObjectClass::bird) continue;
    const double s = detection_score(d, mode);
    if (!(s > threshold)) continue;
    if (!best || s > best_score) {
      best = &d;
      best_score = s;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

inline constexpr int kDefaultIgnoreLimit = 10;
inline constexpr double kPlausibleMotionFactor = 3.0;

// Limited-ignorance filter memory.
//   ignore_count: consecutive frames the current detection was overridden
//   cooldown: frames left with the filter switched off
// Invariants: 0 <= ignore_count <= limit, 0 <= cooldown <= limit,
// cooldown > 0 implies ignore_count == 0.
struct TrackerState {
  std::optional<BoundingBox> prev;
  int ignore_count = 0;
  int cooldown = 0;
  int limit = kDefaultIgnoreLimit;

  bool valid() const noexcept {
    return limit >= 0 && ignore_count >= 0 && ignore_count <= limit && cooldown >= 0 &&
           cooldown <= limit && (cooldown == 0 || ignore_count == 0);
  }

  friend bool operator==(const TrackerState&, const TrackerState&) = default;
};

enum class VerdictSource { current, held_previous, fallback };

inline constexpr std::string_view to_string(VerdictSource s) noexcept {
  switch (s) {
    case VerdictSource::current: return "current";
    case VerdictSource::held_previous: return "held-previous";
    case VerdictSource::fallback: return "fallback";
  }
  return "?";
}

// `fallback` means nothing was reported for the frame; scorers substitute
// fallback_box().
struct FrameVerdict {
  std::optional<BoundingBox> reported;
  VerdictSource source = VerdictSource::fallback;
  std::optional<Detection> raw_best;
};

namespace detail {

inline FrameVerdict report_current(const std::optional<Detection>& best) {
  FrameVerdict v;
  v.raw_best = best;
  if (best) {
    v.reported = best->box;
    v.source = VerdictSource::current;
  }
  return v;
}

}  // namespace detail

// One frame of the limited-ignorance filter. A detection is plausible when it
// overlaps the previous box scaled 3x about its center. Implausible
// detections are replaced by the previous box for up to `limit` consecutive
// frames; after that the filter switches itself off for `limit` frames.
inline std::pair<TrackerState, FrameVerdict> step(TrackerState state,
                                                  const std::optional<Detection>& best) {
  if (state.cooldown > 0) {
    --state.cooldown;
    auto v = detail::report_current(best);
    state.prev = v.reported;
    return {state, v};
  }
  if (!state.prev) {
    auto v = detail::report_current(best);
    state.prev = v.reported;
    state.ignore_count = 0;
    return {state, v};
  }
  if (!best) {
    state.prev.reset();
    state.ignore_count = 0;
    return {state, detail::report_current(best)};
  }
  if (intersects(best->box, expand_box(*state.prev, kPlausibleMotionFactor))) {
    state.ignore_count = 0;
    auto v = detail::report_current(best);
    state.prev = v.reported;
    return {state, v};
  }
  if (state.ignore_count < state.limit) {
    ++state.ignore_count;
    FrameVerdict v;
    v.raw_best = best;
    v.reported = state.prev;
    v.source = VerdictSource::held_previous;
    return {state, v};
  }
  state.ignore_count = 0;
  state.cooldown = state.limit;
  auto v = detail::report_current(best);
  state.prev = v.reported;
  return {state, v};
}

// Single-pixel box at the image origin, normalized for a width x height image.
inline BoundingBox fallback_box(int width = 850, int height = 480) noexcept {
  return {0.0, 0.0, 1.0 / width, 1.0 / height};
}

// Verdict log row: `frame_index,x,y,w,h,source,objectness`; box fields are
// empty when nothing was reported, objectness is empty without a raw detection.
inline std::string format_verdict(std::size_t frame_index, const FrameVerdict& v) {
  std::string row = std::to_string(frame_index) + ',';
  char buf[128];
  if (v.reported) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,", v.reported->x, v.reported->y,
                  v.reported->w, v.reported->h);
    row += buf;
  } else {
    row += ",,,,";
  }
  row += to_string(v.source);
  row += ',';
  if (v.raw_best) {
    std::snprintf(buf, sizeof buf, "%.6f", v.raw_best->objectness);
    row += buf;
  }
  return row;
}

inline constexpr std::string_view kVerdictHeader = "frame_index,x,y,w,h,source,objectness";

}  // namespace aerosynth
