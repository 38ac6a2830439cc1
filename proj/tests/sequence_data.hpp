#pragma once

// Hand-built annotation sequences: a drone drifting smoothly across the frame,
// written as label files plus a manifest. No images are needed by simulate
// or evaluate, so the image column points at names that do not exist.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "aerosynth/dataset_io.hpp"

namespace toy {

inline std::vector<aerosynth::BoundingBox> drifting_boxes(int n, double w = 0.06,
                                                          double h = 0.05) {
  std::vector<aerosynth::BoundingBox> out;
  for (int i = 0; i < n; ++i) {
    const double t = double(i) / std::max(1, n - 1);
    out.push_back({0.2 + 0.5 * t, 0.3 + 0.1 * std::sin(6.0 * t), w, h});
  }
  return out;
}

// One drone per frame; optional bird far away from it.
inline std::filesystem::path write_sequence(const std::filesystem::path& root,
                                            const std::vector<aerosynth::BoundingBox>& boxes,
                                            bool with_bird = false) {
  using namespace aerosynth;
  std::filesystem::create_directories(root / "labels");
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "f%04zu", i);
    std::vector<Annotation> anns{{ObjectClass::drone, boxes[i]}};
    if (with_bird) anns.push_back({ObjectClass::bird, {0.05, 0.8, 0.04, 0.03}});
    write_annotations(root / "labels" / (std::string(stem) + ".txt"), anns);
    entries.push_back({"images/" + std::string(stem) + ".png",
                       "labels/" + std::string(stem) + ".txt", i, 0});
  }
  write_manifest(root / "manifest.txt", entries);
  return root / "manifest.txt";
}

}  // namespace toy
