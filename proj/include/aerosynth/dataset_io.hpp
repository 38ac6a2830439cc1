#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aerosynth/errors.hpp"
#include "aerosynth/geometry.hpp"

namespace aerosynth {

struct Annotation {
  ObjectClass class_label = ObjectClass::drone;
  BoundingBox box;  // normalized
};

// One line per object: `<class> <cx> <cy> <w> <h>`, normalized center format.
inline std::string format_annotation(const Annotation& a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f",
                static_cast<int>(a.class_label), a.box.center_x(), a.box.center_y(),
                a.box.w, a.box.h);
  return buf;
}

inline void write_annotations(const std::filesystem::path& path,
                              const std::vector<Annotation>& annotations) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  for (const auto& a : annotations) out << format_annotation(a) << '\n';
  if (!out) throw IoError(path.string(), "write failed");
}

inline std::vector<Annotation> parse_annotations(std::istream& in,
                                                 const std::string& what = "annotations") {
  std::vector<Annotation> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    int cls = -1;
    double cx, cy, w, h;
    if (!(ls >> cls >> cx >> cy >> w >> h) || (cls != 0 && cls != 1) || w <= 0 || h <= 0)
      throw ValidationError(what + " line " + std::to_string(lineno) +
                            ": expected '<0|1> <cx> <cy> <w> <h>'");
    out.push_back({static_cast<ObjectClass>(cls), BoundingBox::from_center(cx, cy, w, h)});
  }
  return out;
}

inline std::vector<Annotation> read_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open annotation file");
  return parse_annotations(in, path.string());
}

// `<image path> <annotation path> <config_index> <slot>`
struct ManifestEntry {
  std::string image;
  std::string annotation;
  std::uint64_t config_index = 0;
  int slot = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

inline void write_manifest(const std::filesystem::path& path,
                           const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  for (const auto& e : entries)
    out << e.image << ' ' << e.annotation << ' ' << e.config_index << ' ' << e.slot << '\n';
  if (!out) throw IoError(path.string(), "write failed");
}

inline std::vector<ManifestEntry> parse_manifest(std::istream& in,
                                                 const std::string& what = "manifest") {
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    ManifestEntry e;
    std::string extra;
    if (!(ls >> e.image >> e.annotation >> e.config_index >> e.slot) || (ls >> extra) ||
        e.slot < 0 || e.slot > 2)
      throw ValidationError(what + " line " + std::to_string(lineno) +
                            ": expected '<image> <annotation> <config_index> <slot>'");
    out.push_back(std::move(e));
  }
  return out;
}

// A manifest together with the directory its relative paths resolve against.
struct Manifest {
  std::filesystem::path base;
  std::vector<ManifestEntry> entries;

  std::filesystem::path resolve(const std::string& p) const {
    const std::filesystem::path fp(p);
    return fp.is_relative() ? base / fp : fp;
  }
};

inline Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open manifest");
  return {path.parent_path(), parse_manifest(in, path.string())};
}

}  // namespace aerosynth
