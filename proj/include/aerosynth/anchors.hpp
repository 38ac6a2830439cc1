#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "aerosynth/errors.hpp"
#include "aerosynth/random.hpp"

namespace aerosynth {

struct AnchorShape {
  double w = 0.0;
  double h = 0.0;

  constexpr double area() const noexcept { return w * h; }
  friend constexpr bool operator==(const AnchorShape&, const AnchorShape&) = default;
  friend constexpr auto operator<=>(const AnchorShape&, const AnchorShape&) = default;
};

struct AnchorSet {
  std::vector<AnchorShape> anchors;  // ascending by area
  double inertia = 0.0;              // sum of squared distances to the nearest anchor
  std::vector<double> inertia_history;  // one entry per assignment step
  int iterations = 0;

  std::size_t size() const noexcept { return anchors.size(); }
};

struct KMeansOptions {
  std::size_t k = 5;
  std::uint64_t seed = 0;
  int max_iter = 300;
  double tol = 1e-6;
};

namespace detail {

inline double sq_dist(const AnchorShape& a, const AnchorShape& b) noexcept {
  const double dw = a.w - b.w;
  const double dh = a.h - b.h;
  return dw * dw + dh * dh;
}

// Nearest center, lowest index on ties.
inline std::size_t nearest(const AnchorShape& p, std::span<const AnchorShape> centers,
                           double* dist = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = sq_dist(p, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

}  // namespace detail

// Lloyd's k-means on (w, h) pairs with squared Euclidean distance.
//
// Points are sorted before clustering, so the result does not depend on input
// order. Seeding picks one point at random, then repeatedly the point farthest
// from every chosen center. A cluster that loses all its points is moved to
// the point farthest from its current center.
inline AnchorSet cluster_anchors(std::span<const AnchorShape> boxes,
                                 const KMeansOptions& opt = {}) {
  if (opt.k == 0) throw ValidationError("k must be >= 1");
  if (boxes.size() < opt.k)
    throw TooFewSamples("need at least " + std::to_string(opt.k) + " boxes, got " +
                        std::to_string(boxes.size()));
  for (const auto& b : boxes)
    if (!(b.w > 0.0) || !(b.h > 0.0) || !std::isfinite(b.w) || !std::isfinite(b.h))
      throw ValidationError("box dimensions must be positive and finite");

  std::vector<AnchorShape> pts(boxes.begin(), boxes.end());
  std::sort(pts.begin(), pts.end());
  const std::size_t n = pts.size();
  const std::size_t k = opt.k;

  Rng rng(mix_seed(opt.seed, 0xa7c4ULL));
  std::vector<AnchorShape> centers;
  centers.reserve(k);
  centers.push_back(pts[static_cast<std::size_t>(uniform_int(rng, 0, std::int64_t(n) - 1))]);
  std::vector<double> min_d(n);
  for (std::size_t i = 0; i < n; ++i) min_d[i] = detail::sq_dist(pts[i], centers[0]);
  while (centers.size() < k) {
    const auto far = static_cast<std::size_t>(
        std::max_element(min_d.begin(), min_d.end()) - min_d.begin());
    centers.push_back(pts[far]);
    for (std::size_t i = 0; i < n; ++i)
      min_d[i] = std::min(min_d[i], detail::sq_dist(pts[i], centers.back()));
  }

  AnchorSet result;
  std::vector<std::size_t> assign(n);
  std::vector<double> dist(n);
  auto assign_all = [&] {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      assign[i] = detail::nearest(pts[i], centers, &dist[i]);
      inertia += dist[i];
    }
    return inertia;
  };

  for (int it = 0; it < opt.max_iter; ++it) {
    result.inertia_history.push_back(assign_all());
    result.iterations = it + 1;

    std::vector<double> sw(k, 0.0), sh(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sw[assign[i]] += pts[i].w;
      sh[assign[i]] += pts[i].h;
      ++count[assign[i]];
    }
    double movement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      AnchorShape next;
      if (count[c] > 0) {
        next = {sw[c] / double(count[c]), sh[c] / double(count[c])};
      } else {
        const auto far = static_cast<std::size_t>(
            std::max_element(dist.begin(), dist.end()) - dist.begin());
        next = pts[far];
        dist[far] = 0.0;
      }
      movement = std::max(movement, std::sqrt(detail::sq_dist(next, centers[c])));
      centers[c] = next;
    }
    if (movement < opt.tol) break;
  }

  result.inertia = assign_all();
  result.inertia_history.push_back(result.inertia);
  result.anchors = centers;
  std::sort(result.anchors.begin(), result.anchors.end(),
            [](const AnchorShape& a, const AnchorShape& b) {
              return std::make_tuple(a.area(), a.w, a.h) < std::make_tuple(b.area(), b.w, b.h);
            });
  return result;
}

// Anchor file: one `w h` pair per line, 6 decimals.
inline void write_anchors(const std::filesystem::path& path, const AnchorSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  char buf[64];
  for (const auto& a : set.anchors) {
    std::snprintf(buf, sizeof buf, "%.6f %.6f\n", a.w, a.h);
    out << buf;
  }
  if (!out) throw IoError(path.string(), "write failed");
}

inline std::vector<AnchorShape> parse_anchors(std::istream& in,
                                              const std::string& what = "anchors") {
  std::vector<AnchorShape> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    AnchorShape a;
    std::string extra;
    if (!(ls >> a.w >> a.h) || (ls >> extra) || !(a.w > 0) || !(a.h > 0))
      throw ValidationError(what + " line " + std::to_string(lineno) + ": expected '<w> <h>'");
    out.push_back(a);
  }
  if (out.empty()) throw ValidationError(what + ": no anchors");
  return out;
}

inline std::vector<AnchorShape> read_anchors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open anchor file");
  return parse_anchors(in, path.string());
}

}  // namespace aerosynth
