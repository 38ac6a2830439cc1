#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "aerosynth/synthesizer.hpp"
#include "toy_data.hpp"

using namespace aerosynth;

namespace {

ForegroundAsset make_asset(int w, int h, ObjectClass c, const std::string& id) {
  return extract_foreground(toy::sprite_image(w, h, {20, 20, 20}, c == ObjectClass::drone),
                            toy::kKey, 10, c, id);
}

AssetLibrary toy_library(int drones, int birds) {
  AssetLibrary lib;
  for (int i = 0; i < drones; ++i)
    lib.drones.push_back(make_asset(40 + 6 * i, 24 + 2 * i, ObjectClass::drone, "d" + std::to_string(i)));
  for (int i = 0; i < birds; ++i)
    lib.birds.push_back(make_asset(30 + 4 * i, 20, ObjectClass::bird, "b" + std::to_string(i)));
  return lib;
}

std::vector<BackgroundVideo> toy_videos(int n, int frames, int w, int h) {
  std::vector<BackgroundVideo> out;
  for (int v = 0; v < n; ++v) {
    BackgroundVideo bv;
    bv.video_id = "v" + std::to_string(v);
    for (int t = 0; t < frames; ++t) bv.frames.push_back(toy::video_frame(w, h, t + 10 * v));
    out.push_back(std::move(bv));
  }
  return out;
}

SynthesisParams toy_params(int rows, int cols, std::vector<SizeInterval> iv, int w, int h,
                           std::uint64_t seed = 1) {
  SynthesisParams p;
  p.rows = rows;
  p.cols = cols;
  p.intervals = std::move(iv);
  p.width = w;
  p.height = h;
  p.seed = seed;
  return p;
}

int smaller_edge_px(const BoundingBox& n, const SynthesisParams& p) {
  return static_cast<int>(std::lround(std::min(n.w * p.width, n.h * p.height)));
}

bool in_halves(int size, const SynthesisParams& p, std::pair<std::size_t, std::size_t> half) {
  for (std::size_t i = half.first; i < half.second; ++i)
    if (size >= p.intervals[i].lo && size < p.intervals[i].hi) return true;
  return false;
}

}  // namespace

TEST(GeometricIntervals, DefaultEndpoints) {
  const auto iv = geometric_intervals();
  ASSERT_EQ(iv.size(), 19u);
  const std::vector<int> edges{5, 6, 7, 9, 10, 12, 15, 18, 22, 26, 31, 37, 45, 54, 64, 77, 93, 111, 133, 160};
  for (std::size_t i = 0; i < iv.size(); ++i) {
    EXPECT_EQ(iv[i].lo, edges[i]);
    EXPECT_EQ(iv[i].hi, edges[i + 1]);
  }
  EXPECT_NO_THROW(SynthesisParams{}.validate());
}

TEST(SynthesisParams, BirdHalves) {
  SynthesisParams p;
  p.intervals = {{5, 6}, {6, 7}, {7, 8}, {8, 9}};
  EXPECT_EQ(p.lower_half(), (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_EQ(p.upper_half(), (std::pair<std::size_t, std::size_t>{2, 4}));
  p.intervals.push_back({9, 10});
  EXPECT_EQ(p.lower_half(), (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_EQ(p.upper_half(), (std::pair<std::size_t, std::size_t>{3, 5}));
  p.intervals = {{5, 6}};
  EXPECT_EQ(p.lower_half(), (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(p.upper_half(), (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(SynthesisParams, RejectsBadIntervals) {
  SynthesisParams p;
  p.intervals = {{5, 5}};
  EXPECT_THROW(p.validate(), ValidationError);
  p.intervals = {{5, 9}, {8, 12}};
  EXPECT_THROW(p.validate(), ValidationError);
  p.intervals = {{5, 9}};
  p.rows = 0;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(EnumerateConfigs, FullScaleCount) {
  const ConfigSpace space(89, 12, 10, 19, 11);
  EXPECT_EQ(space.size(), 2'232'120u);
  EXPECT_EQ(space.size() * kFramesPerConfig, 6'696'360u);
}

TEST(EnumerateConfigs, MatchesNestedLoops) {
  struct Shape { std::size_t d; int r, c; std::size_t s, v; };
  for (const auto& sh : {Shape{1, 1, 1, 1, 1}, Shape{2, 2, 2, 3, 2}, Shape{3, 1, 4, 2, 5}}) {
    const ConfigSpace space(sh.d, sh.r, sh.c, sh.s, sh.v);
    std::vector<SynthesisConfig> brute;
    std::uint64_t idx = 0;
    for (std::size_t d = 0; d < sh.d; ++d)
      for (int r = 0; r < sh.r; ++r)
        for (int c = 0; c < sh.c; ++c)
          for (std::size_t s = 0; s < sh.s; ++s)
            for (std::size_t v = 0; v < sh.v; ++v) brute.push_back({d, r, c, s, v, idx++});
    std::vector<SynthesisConfig> listed(space.begin(), space.end());
    EXPECT_EQ(listed, brute);
    EXPECT_EQ(space.size(), brute.size());
  }
  EXPECT_EQ(ConfigSpace(2, 2, 2, 3, 2).size(), 48u);
  EXPECT_EQ(ConfigSpace(1, 1, 1, 1, 1).size(), 1u);
}

TEST(RetentionProbability, Examples) {
  EXPECT_DOUBLE_EQ(retention_probability(500, 1000), 0.5);
  EXPECT_EQ(retention_probability(2000, 1000), 1.0);
  EXPECT_EQ(retention_probability(1000, 1000), 1.0);
  EXPECT_EQ(retention_probability(0, 1000), 0.0);
  EXPECT_NEAR(retention_probability(676'534, 6'696'360), 0.101030, 1e-6);
  EXPECT_THROW(retention_probability(1, 0), std::invalid_argument);
}

TEST(SynthesizeConfig, ForcedSize) {
  AssetLibrary lib;
  lib.drones.push_back(make_asset(20, 20, ObjectClass::drone, "sq"));
  ASSERT_EQ(lib.drones[0].width(), 20);
  const auto videos = toy_videos(1, 1, 64, 48);
  const auto p = toy_params(1, 1, {{10, 11}}, 64, 48);
  const auto frames = synthesize_config({0, 0, 0, 0, 0, 0}, lib, videos, p);
  for (const auto& f : frames) {
    ASSERT_EQ(f.annotations.size(), 1u);  // no birds supplied
    EXPECT_EQ(smaller_edge_px(f.annotations[0].box, p), 10);
  }
}

TEST(SynthesizeConfig, Deterministic) {
  const auto lib = toy_library(2, 2);
  const auto videos = toy_videos(1, 4, 120, 80);
  const auto p = toy_params(2, 2, {{8, 12}, {12, 20}}, 120, 80, 99);
  const ConfigSpace space = enumerate_configs(lib, videos, p);
  for (const auto& cfg : space) {
    const auto a = synthesize_config(cfg, lib, videos, p);
    const auto b = synthesize_config(cfg, lib, videos, p);
    for (int s = 0; s < 3; ++s) {
      EXPECT_EQ(a[s].image, b[s].image);
      ASSERT_EQ(a[s].annotations.size(), b[s].annotations.size());
      for (std::size_t k = 0; k < a[s].annotations.size(); ++k)
        EXPECT_EQ(a[s].annotations[k].box, b[s].annotations[k].box);
    }
  }
  auto other = p;
  other.seed = 100;
  EXPECT_NE(synthesize_config(space.at(0), lib, videos, p)[0].image,
            synthesize_config(space.at(0), lib, videos, other)[0].image);
}

// Exhaustive scan over every configuration of the toy set.
TEST(SynthesizeConfig, ToySetInvariants) {
  const auto lib = toy_library(2, 1);
  const auto videos = toy_videos(1, 3, 160, 120);
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto p = toy_params(2, 2, {{8, 14}, {14, 24}}, 160, 120, seed);
    const ConfigSpace space = enumerate_configs(lib, videos, p);
    ASSERT_EQ(space.size(), 16u);
    for (const auto& cfg : space) {
      const auto frames = synthesize_config(cfg, lib, videos, p);
      for (const auto& f : frames) {
        EXPECT_EQ(f.config_index, cfg.config_index);
        ASSERT_EQ(f.annotations.size(), f.slot == 0 ? 1u : 2u);
        EXPECT_EQ(f.annotations[0].class_label, ObjectClass::drone);
        for (const auto& a : f.annotations) EXPECT_TRUE(within_unit_square(a.box));

        const int drone_edge = smaller_edge_px(f.annotations[0].box, p);
        const auto iv = p.intervals[cfg.interval];
        EXPECT_GE(drone_edge, iv.lo - 1);
        EXPECT_LE(drone_edge, iv.hi);  // [lo, hi) plus one pixel of rounding

        // drone center lies in its cell (half a pixel of rounding allowed)
        const auto px = to_pixels(f.annotations[0].box, p.width, p.height);
        const double cw = double(p.width) / p.cols, ch = double(p.height) / p.rows;
        EXPECT_GE(px.center_x(), cfg.col * cw - 0.5);
        EXPECT_LE(px.center_x(), (cfg.col + 1) * cw + 0.5);
        EXPECT_GE(px.center_y(), cfg.row * ch - 0.5);
        EXPECT_LE(px.center_y(), (cfg.row + 1) * ch + 0.5);

        if (f.slot > 0) {
          EXPECT_EQ(f.annotations[1].class_label, ObjectClass::bird);
          const int bird_edge = smaller_edge_px(f.annotations[1].box, p);
          EXPECT_TRUE(in_halves(bird_edge, p, f.slot == 1 ? p.lower_half() : p.upper_half()))
              << "slot " << f.slot << " bird edge " << bird_edge;
        }
      }
    }
  }
}

TEST(SynthesizeConfig, CompositeOnlyTouchesAnnotatedBoxes) {
  const auto lib = toy_library(1, 1);
  const auto videos = toy_videos(1, 1, 100, 80);  // one frame: the background is known
  const auto p = toy_params(2, 2, {{10, 16}, {16, 22}}, 100, 80, 17);
  for (const auto& cfg : enumerate_configs(lib, videos, p)) {
    for (const auto& f : synthesize_config(cfg, lib, videos, p)) {
      std::vector<BoundingBox> px;
      for (const auto& a : f.annotations) px.push_back(to_pixels(a.box, p.width, p.height));
      for (int y = 0; y < p.height; ++y)
        for (int x = 0; x < p.width; ++x) {
          bool inside = false;
          for (const auto& b : px)
            inside = inside || (x >= b.x - 1e-6 && x < b.right() - 1e-6 && y >= b.y - 1e-6 &&
                                y < b.bottom() - 1e-6);
          if (inside) continue;
          for (int c = 0; c < 3; ++c)
            ASSERT_EQ(f.image.at(x, y)[c], videos[0].frames[0].at(x, y)[c]);
        }
    }
  }
}

TEST(SynthesizeConfig, PlacementInfeasible) {
  AssetLibrary lib;
  lib.drones.push_back(make_asset(30, 30, ObjectClass::drone, "big"));
  const auto videos = toy_videos(1, 1, 40, 40);
  // 4x4 grid of 10px cells; a 30px sprite cannot center in a corner cell.
  const auto p = toy_params(4, 4, {{30, 31}}, 40, 40);
  EXPECT_THROW(synthesize_config({0, 0, 0, 0, 0, 0}, lib, videos, p), PlacementInfeasible);
}

TEST(SynthesizeConfig, RejectsMismatchedVideo) {
  const auto lib = toy_library(1, 0);
  const auto videos = toy_videos(1, 1, 50, 50);
  const auto p = toy_params(1, 1, {{10, 11}}, 64, 48);
  EXPECT_THROW(synthesize_config({0, 0, 0, 0, 0, 0}, lib, videos, p), ValidationError);
}

class BuildDatasetTest : public ::testing::Test {
 protected:
  // 2 drones x 2x2 grid x 3 intervals x 2 videos = 48 configurations
  AssetLibrary lib = toy_library(2, 1);
  std::vector<BackgroundVideo> videos = toy_videos(2, 2, 120, 90);
  SynthesisParams params = toy_params(2, 2, {{8, 10}, {10, 13}, {13, 16}}, 120, 90, 7);
  toy::TempDir dir{"build_dataset"};
};

TEST_F(BuildDatasetTest, FullRetention) {
  const auto r = build_dataset(lib, videos, params, dir.path());
  EXPECT_EQ(r.enumerated, 48u);
  EXPECT_EQ(r.retained, 48u);
  EXPECT_EQ(r.infeasible, 0u);
  EXPECT_EQ(r.frames, 144u);
  EXPECT_EQ(r.retention, 1.0);

  const auto m = read_manifest(dir / "manifest.txt");
  EXPECT_EQ(m.entries, r.manifest);
  for (const auto& e : m.entries) {
    EXPECT_TRUE(std::filesystem::exists(m.resolve(e.image)));
    const auto anns = read_annotations(m.resolve(e.annotation));
    EXPECT_EQ(anns.size(), e.slot == 0 ? 1u : 2u);
  }
  const auto img = read_png(m.resolve(m.entries[5].image));
  EXPECT_EQ(img.width, 120);
  EXPECT_EQ(img.height, 90);

  SynthesisParams reread;
  read_params(dir / "params.txt").apply(reread);
  EXPECT_EQ(format_params(reread), format_params(params));
}

TEST_F(BuildDatasetTest, ZeroRetention) {
  params.max_frames = 0;
  const auto r = build_dataset(lib, videos, params, dir.path());
  EXPECT_EQ(r.enumerated, 48u);
  EXPECT_EQ(r.retained, 0u);
  EXPECT_EQ(r.frames, 0u);
}

TEST_F(BuildDatasetTest, ParallelMatchesSerial) {
  params.max_frames = 90;
  toy::TempDir par{"build_parallel"};
  const auto serial = build_dataset(lib, videos, params, dir.path(), {1, true});
  const auto parallel = build_dataset(lib, videos, params, par.path(), {4, true});
  EXPECT_EQ(serial.manifest, parallel.manifest);
  EXPECT_EQ(serial.retained, parallel.retained);
  EXPECT_EQ(toy::slurp(dir / "manifest.txt"), toy::slurp(par / "manifest.txt"));
  for (const auto& e : serial.manifest) {
    EXPECT_EQ(toy::slurp(dir / e.image), toy::slurp(par / e.image));
    EXPECT_EQ(toy::slurp(dir / e.annotation), toy::slurp(par / e.annotation));
  }
}

TEST(BuildDataset, HalfRetentionIsBinomial) {
  // 10 drones x 10x10 grid x 1 interval x 1 video = 1000 configurations
  AssetLibrary lib;
  for (int i = 0; i < 10; ++i)
    lib.drones.push_back(make_asset(10 + i, 6, ObjectClass::drone, "d" + std::to_string(i)));
  const auto videos = toy_videos(1, 1, 200, 100);
  auto p = toy_params(10, 10, {{4, 6}}, 200, 100, 2024);
  p.max_frames = 1500;  // 1500 / 3000
  toy::TempDir dir("binomial");
  const auto r = build_dataset(lib, videos, p, dir.path(), {4, false});
  EXPECT_EQ(r.enumerated, 1000u);
  EXPECT_DOUBLE_EQ(r.retention, 0.5);
  EXPECT_EQ(r.infeasible, 0u);
  EXPECT_GE(r.frames, 1350u);
  EXPECT_LE(r.frames, 1650u);
}

TEST(SplitDataset, EightyFiveFifteen) {
  std::vector<ManifestEntry> m;
  for (std::uint64_t c = 0; c < 100; ++c)
    for (int s = 0; s < 3; ++s) m.push_back({"i", "a", c * 7, s});
  const auto [train, val] = split_dataset(m, 0.85, 3);
  std::set<std::uint64_t> tc, vc;
  for (const auto& e : train) tc.insert(e.config_index);
  for (const auto& e : val) vc.insert(e.config_index);
  EXPECT_EQ(tc.size(), 85u);
  EXPECT_EQ(vc.size(), 15u);
  EXPECT_EQ(train.size() + val.size(), m.size());
  for (auto c : tc) EXPECT_EQ(vc.count(c), 0u);

  std::vector<ManifestEntry> joined = train;
  joined.insert(joined.end(), val.begin(), val.end());
  std::sort(joined.begin(), joined.end(), [](const auto& a, const auto& b) {
    return std::tie(a.config_index, a.slot) < std::tie(b.config_index, b.slot);
  });
  EXPECT_EQ(joined, m);

  const auto again = split_dataset(m, 0.85, 3);
  EXPECT_EQ(again.first, train);
  const auto [all, none] = split_dataset(m, 1.0, 3);
  EXPECT_EQ(all.size(), m.size());
  EXPECT_TRUE(none.empty());
  EXPECT_THROW(split_dataset(std::vector<ManifestEntry>{}, 0.85, 0), ValidationError);
}

TEST(ParamsFile, ParsesAndLayers) {
  std::istringstream in(
      "# toy\n"
      "rows = 4\n"
      "cols=3\n"
      "intervals = 5:8, 8:12\n"
      "max_frames = 90\n"
      "resolution = 320x240\n"
      "seed = 42\n");
  SynthesisParams p;
  parse_params(in).apply(p);
  EXPECT_EQ(p.rows, 4);
  EXPECT_EQ(p.cols, 3);
  EXPECT_EQ(p.intervals, (std::vector<SizeInterval>{{5, 8}, {8, 12}}));
  EXPECT_EQ(p.max_frames, std::optional<std::uint64_t>{90});
  EXPECT_EQ(p.width, 320);
  EXPECT_EQ(p.height, 240);
  EXPECT_EQ(p.seed, 42u);

  std::istringstream partial("rows = 2\n");
  SynthesisParams q;
  parse_params(partial).apply(q);
  EXPECT_EQ(q.rows, 2);
  EXPECT_EQ(q.cols, 10);
  EXPECT_EQ(q.intervals.size(), 19u);

  for (const char* bad : {"rows 4\n", "colour = 3\n", "intervals = 5-8\n", "resolution = 320\n",
                          "seed = -1\n"}) {
    std::istringstream b(bad);
    EXPECT_THROW(parse_params(b), ValidationError) << bad;
  }
}

TEST(AnnotationFormat, CenterFormatSixDecimals) {
  const Annotation a{ObjectClass::bird, {0.25, 0.5, 0.1, 0.2}};
  EXPECT_EQ(format_annotation(a), "1 0.300000 0.600000 0.100000 0.200000");
  std::istringstream in(format_annotation(a) + "\n");
  const auto back = parse_annotations(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].class_label, ObjectClass::bird);
  EXPECT_NEAR(back[0].box.x, 0.25, 1e-9);
  EXPECT_NEAR(back[0].box.h, 0.2, 1e-9);
}
