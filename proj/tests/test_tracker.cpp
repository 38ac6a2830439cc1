#include <gtest/gtest.h>

#include <random>

#include "aerosynth/tracker.hpp"

using namespace aerosynth;

namespace {

Detection det(BoundingBox b, double obj, ObjectClass c = ObjectClass::drone) {
  Detection d;
  d.box = b;
  d.objectness = obj;
  d.class_label = c;
  d.class_probs = c == ObjectClass::drone ? std::vector<double>{0.9, 0.1}
                                          : std::vector<double>{0.1, 0.9};
  return d;
}

const BoundingBox kNear{0.10, 0.10, 0.05, 0.05};
const BoundingBox kFar{0.80, 0.80, 0.05, 0.05};

}  // namespace

TEST(SelectBest, Empty) {
  EXPECT_FALSE(select_best({}, 0.0));
}

TEST(SelectBest, BirdsEliminated) {
  const std::vector<Detection> d{det(kNear, 0.9), det(kFar, 0.99, ObjectClass::bird)};
  const auto best = select_best(d, 0.0);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->box, kNear);
}

TEST(SelectBest, Threshold) {
  const std::vector<Detection> d{det(kNear, 0.3), det(kFar, 0.7)};
  ASSERT_TRUE(select_best(d, 0.5));
  EXPECT_EQ(select_best(d, 0.5)->box, kFar);
  EXPECT_FALSE(select_best(d, 0.8));
  EXPECT_FALSE(select_best(d, 0.7));  // strictly above the threshold
}

TEST(SelectBest, TiesKeepGridOrder) {
  const std::vector<Detection> d{det(kNear, 0.6), det(kFar, 0.6)};
  EXPECT_EQ(select_best(d, 0.0)->box, kNear);
}

TEST(SelectBest, CombinedScore) {
  auto a = det(kNear, 0.8);
  a.class_probs = {0.55, 0.45};
  auto b = det(kFar, 0.7);
  b.class_probs = {0.95, 0.05};
  const std::vector<Detection> d{a, b};
  EXPECT_EQ(select_best(d, 0.0, ScoreMode::objectness)->box, kNear);
  EXPECT_EQ(select_best(d, 0.0, ScoreMode::combined)->box, kFar);
}

TEST(Step, NoPreviousReportsDirectly) {
  TrackerState s;
  const auto [next, v] = step(s, det(kFar, 0.4));
  EXPECT_EQ(v.source, VerdictSource::current);
  EXPECT_EQ(v.reported, kFar);
  EXPECT_EQ(next.prev, kFar);
}

TEST(Step, NearbyDetectionAccepted) {
  TrackerState s;
  s.prev = BoundingBox{0.4, 0.4, 0.1, 0.1};
  const auto moved = BoundingBox::from_center(0.45, 0.45, 0.1, 0.1);
  const auto shifted = BoundingBox{0.45, 0.45, 0.1, 0.1};
  for (const auto& b : {moved, shifted}) {
    const auto [next, v] = step(s, det(b, 0.9));
    EXPECT_EQ(v.source, VerdictSource::current);
    EXPECT_EQ(v.reported, b);
    EXPECT_EQ(next.ignore_count, 0);
  }
}

TEST(Step, HandTrace) {
  // L = 2: two held frames, then the filter gives up and stays off for 2.
  TrackerState s;
  s.limit = 2;
  s.prev = kNear;
  std::vector<VerdictSource> sources;
  std::vector<std::optional<BoundingBox>> reported;
  for (int i = 0; i < 3; ++i) {
    auto [next, v] = step(s, det(kFar, 0.9));
    s = next;
    sources.push_back(v.source);
    reported.push_back(v.reported);
    EXPECT_TRUE(s.valid());
  }
  EXPECT_EQ(sources, (std::vector<VerdictSource>{VerdictSource::held_previous,
                                                 VerdictSource::held_previous,
                                                 VerdictSource::current}));
  EXPECT_EQ(reported[0], kNear);
  EXPECT_EQ(reported[1], kNear);
  EXPECT_EQ(reported[2], kFar);
  EXPECT_EQ(s.cooldown, 2);
  EXPECT_EQ(s.ignore_count, 0);

  // cooldown: even a jump back is reported directly
  auto [s1, v1] = step(s, det(kNear, 0.9));
  EXPECT_EQ(v1.source, VerdictSource::current);
  EXPECT_EQ(s1.cooldown, 1);
  auto [s2, v2] = step(s1, det(kFar, 0.9));
  EXPECT_EQ(v2.source, VerdictSource::current);
  EXPECT_EQ(s2.cooldown, 0);
  auto [s3, v3] = step(s2, det(kNear, 0.9));
  EXPECT_EQ(v3.source, VerdictSource::held_previous);
  EXPECT_EQ(v3.reported, kFar);
}

TEST(Step, MissClearsPrevious) {
  TrackerState s;
  s.prev = kNear;
  s.ignore_count = 1;
  auto [next, v] = step(s, std::nullopt);
  EXPECT_FALSE(v.reported);
  EXPECT_EQ(v.source, VerdictSource::fallback);
  EXPECT_FALSE(next.prev);
  EXPECT_EQ(next.ignore_count, 0);
  auto [after, v2] = step(next, det(kFar, 0.9));
  EXPECT_EQ(v2.source, VerdictSource::current);
}

TEST(Step, ZeroLimitDisablesFilter) {
  TrackerState s;
  s.limit = 0;
  s.prev = kNear;
  auto [next, v] = step(s, det(kFar, 0.9));
  EXPECT_EQ(v.source, VerdictSource::current);
  EXPECT_TRUE(next.valid());
}

TEST(Step, IdentityWhenAlwaysPlausible) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  TrackerState s;
  s.limit = 5;
  BoundingBox b{0.4, 0.4, 0.05, 0.05};
  for (int i = 0; i < 1000; ++i) {
    b.x = std::clamp(b.x + jitter(rng), 0.0, 0.95);
    b.y = std::clamp(b.y + jitter(rng), 0.0, 0.95);
    auto [next, v] = step(s, det(b, 0.8));
    s = next;
    ASSERT_EQ(v.reported, b);
    ASSERT_EQ(v.source, VerdictSource::current);
  }
}

TEST(Step, CooldownLengthEqualsLimit) {
  for (int L : {1, 3, 10}) {
    TrackerState s;
    s.limit = L;
    s.prev = kNear;
    // L held frames, then the (L+1)-th implausible frame flips into cooldown
    for (int i = 0; i < L; ++i) {
      auto [n, v] = step(s, det(kFar, 0.9));
      s = n;
      ASSERT_EQ(v.source, VerdictSource::held_previous);
    }
    auto [n, v] = step(s, det(kFar, 0.9));
    s = n;
    ASSERT_EQ(v.source, VerdictSource::current);
    // alternate far apart so the filter would object if it were on
    int inactive = 0;
    for (int i = 0; i < L; ++i) {
      auto [n2, v2] = step(s, det(i % 2 ? kFar : kNear, 0.9));
      s = n2;
      if (v2.source != VerdictSource::held_previous) ++inactive;
    }
    EXPECT_EQ(inactive, L);
    auto [n3, v3] = step(s, det(L % 2 ? kFar : kNear, 0.9));
    EXPECT_EQ(v3.source, VerdictSource::held_previous) << "L=" << L;
  }
}

TEST(Step, FuzzInvariants) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 0.9);
  std::uniform_int_distribution<int> kind(0, 9);
  for (int L : {0, 1, 4, 10}) {
    TrackerState s;
    s.limit = L;
    int held_run = 0;
    std::optional<BoundingBox> last_reported;
    for (int i = 0; i < 10000; ++i) {
      std::optional<Detection> d;
      const int k = kind(rng);
      if (k > 0) d = det({u(rng), u(rng), 0.05 + 0.05 * u(rng), 0.05 + 0.05 * u(rng)}, 0.9);
      const auto before = s;
      auto [next, v] = step(s, d);
      auto [again, v_again] = step(before, d);
      ASSERT_EQ(next, again);
      ASSERT_EQ(v.reported, v_again.reported);
      s = next;
      ASSERT_TRUE(s.valid()) << "frame " << i;
      if (v.source == VerdictSource::held_previous) {
        ASSERT_EQ(v.reported, last_reported);
        ++held_run;
      } else {
        held_run = 0;
      }
      ASSERT_LE(held_run, L);
      ASSERT_EQ(v.source == VerdictSource::fallback, !v.reported);
      last_reported = v.reported;
    }
  }
}

TEST(FallbackBox, TopLeftPixel) {
  const auto b = fallback_box(850, 480);
  EXPECT_EQ(b.x, 0.0);
  EXPECT_EQ(b.y, 0.0);
  EXPECT_DOUBLE_EQ(b.w, 1.0 / 850);
  EXPECT_DOUBLE_EQ(b.h, 1.0 / 480);
  const auto px = to_pixels(b, 850, 480);
  EXPECT_DOUBLE_EQ(px.w, 1.0);
  EXPECT_DOUBLE_EQ(px.h, 1.0);
}

TEST(VerdictLog, Format) {
  FrameVerdict v;
  v.reported = BoundingBox{0.1, 0.2, 0.3, 0.4};
  v.source = VerdictSource::held_previous;
  v.raw_best = det(kFar, 0.75);
  EXPECT_EQ(format_verdict(3, v), "3,0.100000,0.200000,0.300000,0.400000,held-previous,0.750000");
  EXPECT_EQ(format_verdict(4, FrameVerdict{}), "4,,,,,fallback,");
}
