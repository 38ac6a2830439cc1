// Library walk-through without any files on disk: build a drone sprite,
// composite a few frames, cluster anchors, run the oracle detector through
// the tracker and print one PR point.

#include <cstdio>

#include "aerosynth/anchors.hpp"
#include "aerosynth/evaluator.hpp"
#include "aerosynth/grid_codec.hpp"
#include "aerosynth/synthesizer.hpp"

using namespace aerosynth;

namespace {

Image keyed_sprite(int w, int h) {
  Image img(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      auto* p = img.at(x, y);
      const bool body = (x > 2 && x < w - 3 && y > h / 3 && y < 2 * h / 3) || (x - w / 2) * (x - w / 2) < 9;
      p[0] = body ? 40 : 255;
      p[1] = body ? 40 : 0;
      p[2] = body ? 40 : 255;
    }
  return img;
}

Image sky(int w, int h) {
  Image img(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      auto* p = img.at(x, y);
      p[0] = 110;
      p[1] = static_cast<std::uint8_t>(150 + y % 60);
      p[2] = 230;
    }
  return img;
}

}  // namespace

int main() {
  AssetLibrary lib;
  lib.drones.push_back(extract_foreground(keyed_sprite(48, 30), {255, 0, 255}, 10,
                                          ObjectClass::drone, "demo"));
  BackgroundVideo video;
  video.video_id = "sky";
  for (int t = 0; t < 4; ++t) video.frames.push_back(sky(320, 180));

  SynthesisParams p;
  p.rows = 3;
  p.cols = 4;
  p.intervals = {{10, 16}, {16, 24}};
  p.width = 320;
  p.height = 180;
  p.seed = 1;

  const std::vector<BackgroundVideo> videos{video};
  const ConfigSpace space = enumerate_configs(lib, videos, p);
  std::printf("configurations: %llu\n", static_cast<unsigned long long>(space.size()));

  std::vector<AnchorShape> shapes;
  std::vector<BoundingBox> truth;
  for (const auto& cfg : space)
    for (const auto& f : synthesize_config(cfg, lib, videos, p)) {
      shapes.push_back({f.annotations[0].box.w, f.annotations[0].box.h});
      truth.push_back(f.annotations[0].box);
    }
  std::printf("frames: %zu\n", truth.size());

  const auto anchors = cluster_anchors(shapes, {3, 0}).anchors;
  for (const auto& a : anchors) std::printf("anchor %.4f x %.4f\n", a.w, a.h);

  // Synthesized frames are not a video, so score them without the tracker.
  std::vector<EvalFrame> frames;
  for (const auto& b : truth) {
    const Annotation a{ObjectClass::drone, b};
    EncodeOptions noisy;
    noisy.noise_sigma = 0.5;
    noisy.noise_seed = frames.size();
    frames.push_back({decode(encode(std::span(&a, 1), 15, anchors, noisy), anchors), b});
  }
  TrackerParams raw;
  raw.filter = false;
  const std::vector<double> thresholds{0.5};
  const auto pr = pr_curve(frames, thresholds, raw)[0];
  std::printf("threshold 0.5: precision %s recall %s\n", format_optional(pr.precision).c_str(),
              format_optional(pr.recall).c_str());
  return 0;
}
