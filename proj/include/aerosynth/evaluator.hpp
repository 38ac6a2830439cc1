#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aerosynth/errors.hpp"
#include "aerosynth/geometry.hpp"
#include "aerosynth/tracker.hpp"

namespace aerosynth {

inline constexpr double kMatchIou = 0.5;

struct MatchCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  MatchCounts& operator+=(const MatchCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend constexpr bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

// A localization miss (iou <= 0.5) counts as one false positive and one false
// negative, so tp + fn always equals the number of frames with ground truth.
inline MatchCounts match_frame(const std::optional<BoundingBox>& pred,
                               const std::optional<BoundingBox>& gt) noexcept {
  if (pred && gt) {
    if (iou(*pred, *gt) > kMatchIou) return {1, 0, 0};
    return {0, 1, 1};
  }
  if (pred) return {0, 1, 0};
  if (gt) return {0, 0, 1};
  return {};
}

// Area of the rectangle enclosing both boxes over the ground-truth area.
inline double penalty(const BoundingBox& pred, const BoundingBox& gt) {
  if (!(gt.area() > 0.0)) throw DegenerateGroundTruth();
  if (contains(gt, pred)) return 1.0;
  return enclosing_box(pred, gt).area() / gt.area();
}

struct PRPoint {
  double threshold = 0.0;
  MatchCounts counts;
  std::optional<double> precision;  // absent when tp + fp == 0
  std::optional<double> recall;     // absent when tp + fn == 0

  static PRPoint from(double threshold, MatchCounts c) {
    PRPoint p{threshold, c, std::nullopt, std::nullopt};
    if (c.tp + c.fp > 0) p.precision = double(c.tp) / double(c.tp + c.fp);
    if (c.tp + c.fn > 0) p.recall = double(c.tp) / double(c.tp + c.fn);
    return p;
  }
};

struct PenaltyPoint {
  double threshold = 0.0;
  std::optional<double> mean_penalty;  // absent when no frame carried ground truth
  long frames_counted = 0;
};

struct EvalFrame {
  std::vector<Detection> detections;
  std::optional<BoundingBox> gt;  // normalized
};

struct TrackerParams {
  int limit = kDefaultIgnoreLimit;
  bool filter = true;  // false: score the raw argmax instead of tracker output
  ScoreMode score = ScoreMode::objectness;
  int width = 850;  // evaluation resolution, for the fallback box
  int height = 480;
};

// Per-frame verdicts for one threshold.
inline std::vector<FrameVerdict> run_sequence(std::span<const EvalFrame> frames,
                                              double threshold, const TrackerParams& p) {
  std::vector<FrameVerdict> out;
  out.reserve(frames.size());
  TrackerState state;
  state.limit = p.limit;
  for (const auto& f : frames) {
    auto best = select_best(f.detections, threshold, p.score);
    if (p.filter) {
      auto [next, verdict] = step(state, best);
      state = std::move(next);
      out.push_back(std::move(verdict));
    } else {
      FrameVerdict v;
      v.raw_best = best;
      if (best) {
        v.reported = best->box;
        v.source = VerdictSource::current;
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

inline MatchCounts tally(std::span<const FrameVerdict> verdicts,
                         std::span<const std::optional<BoundingBox>> gts) {
  if (verdicts.size() != gts.size())
    throw ValidationError("prediction and ground-truth frame counts differ");
  MatchCounts c;
  for (std::size_t i = 0; i < verdicts.size(); ++i) c += match_frame(verdicts[i].reported, gts[i]);
  return c;
}

// Mean penalty over frames with ground truth; unreported frames are scored
// with the top-left fallback pixel.
inline PenaltyPoint mean_penalty(double threshold, std::span<const FrameVerdict> verdicts,
                                 std::span<const std::optional<BoundingBox>> gts, int width,
                                 int height) {
  if (verdicts.size() != gts.size())
    throw ValidationError("prediction and ground-truth frame counts differ");
  PenaltyPoint pt{threshold, std::nullopt, 0};
  double total = 0.0;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    if (!gts[i]) continue;
    const BoundingBox pred = verdicts[i].reported.value_or(fallback_box(width, height));
    total += penalty(pred, *gts[i]);
    ++pt.frames_counted;
  }
  if (pt.frames_counted > 0) pt.mean_penalty = total / double(pt.frames_counted);
  return pt;
}

namespace detail {

inline std::vector<std::optional<BoundingBox>> ground_truths(std::span<const EvalFrame> frames) {
  std::vector<std::optional<BoundingBox>> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.gt);
  return out;
}

}  // namespace detail

inline std::vector<PRPoint> pr_curve(std::span<const EvalFrame> frames,
                                     std::span<const double> thresholds,
                                     const TrackerParams& p = {}) {
  const auto gts = detail::ground_truths(frames);
  std::vector<PRPoint> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto verdicts = run_sequence(frames, t, p);
    out.push_back(PRPoint::from(t, tally(verdicts, gts)));
  }
  return out;
}

inline std::vector<PenaltyPoint> penalty_curve(std::span<const EvalFrame> frames,
                                               std::span<const double> thresholds,
                                               const TrackerParams& p = {}) {
  const auto gts = detail::ground_truths(frames);
  std::vector<PenaltyPoint> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    const auto verdicts = run_sequence(frames, t, p);
    out.push_back(mean_penalty(t, verdicts, gts, p.width, p.height));
  }
  return out;
}

// 0.00, 0.01, ..., 1.00 by default. Computed as i/steps so the endpoints are
// exact.
inline std::vector<double> threshold_grid(int steps = 100, double lo = 0.0, double hi = 1.0) {
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) out.push_back(lo + (hi - lo) * double(i) / double(steps));
  return out;
}

// ---------------------------------------------------------------------------
// CSV output

inline std::string format_optional(const std::optional<double>& v) {
  if (!v) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

inline std::string format_threshold(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", t);
  return buf;
}

inline std::string pr_csv(std::span<const PRPoint> points) {
  std::string s = "threshold,precision,recall,tp,fp,fn\n";
  for (const auto& p : points)
    s += format_threshold(p.threshold) + ',' + format_optional(p.precision) + ',' +
         format_optional(p.recall) + ',' + std::to_string(p.counts.tp) + ',' +
         std::to_string(p.counts.fp) + ',' + std::to_string(p.counts.fn) + '\n';
  return s;
}

inline std::string penalty_csv(std::span<const PenaltyPoint> points) {
  std::string s = "threshold,mean_penalty,frames\n";
  for (const auto& p : points)
    s += format_threshold(p.threshold) + ',' + format_optional(p.mean_penalty) + ',' +
         std::to_string(p.frames_counted) + '\n';
  return s;
}

}  // namespace aerosynth
