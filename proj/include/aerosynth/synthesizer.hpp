#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <sstream>
#include <tuple>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "aerosynth/assets.hpp"
#include "aerosynth/dataset_io.hpp"
#include "aerosynth/errors.hpp"
#include "aerosynth/geometry.hpp"
#include "aerosynth/png_io.hpp"
#include "aerosynth/random.hpp"

namespace aerosynth {

// [lo, hi) range of the sprite's smaller edge, in pixels.
struct SizeInterval {
  int lo = 0;
  int hi = 0;
  friend constexpr bool operator==(SizeInterval, SizeInterval) = default;
};

// Geometric endpoints round(lo * (hi/lo)^(i/n)), i = 0..n: denser at small
// sizes. With the defaults (5, 160, 19) the endpoints are
// 5 6 7 9 10 12 15 18 22 26 31 37 45 54 64 77 93 111 133 160.
inline std::vector<SizeInterval> geometric_intervals(int lo = 5, int hi = 160,
                                                     int n = 19) {
  if (lo < 1 || hi <= lo || n < 1)
    throw ValidationError("geometric_intervals: need 1 <= lo < hi and n >= 1");
  std::vector<int> edges;
  for (int i = 0; i <= n; ++i)
    edges.push_back(static_cast<int>(
        std::floor(lo * std::pow(double(hi) / lo, double(i) / n) + 0.5)));
  std::vector<SizeInterval> out;
  for (int i = 0; i < n; ++i) {
    if (edges[i + 1] <= edges[i])
      throw ValidationError("geometric_intervals: too many intervals for the range");
    out.push_back({edges[i], edges[i + 1]});
  }
  return out;
}

struct SynthesisParams {
  int rows = 12;
  int cols = 10;
  std::vector<SizeInterval> intervals = geometric_intervals();
  std::optional<std::uint64_t> max_frames;  // unset: keep everything
  int width = 850;
  int height = 480;
  std::uint64_t seed = 0;

  void validate() const {
    if (rows < 1 || cols < 1) throw ValidationError("rows and cols must be >= 1");
    if (width < 1 || height < 1) throw ValidationError("resolution must be positive");
    if (intervals.empty()) throw ValidationError("at least one size interval is required");
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      const auto& s = intervals[i];
      if (s.lo < 1 || s.hi <= s.lo)
        throw ValidationError("size interval " + std::to_string(i) + " is empty");
      if (i > 0 && s.lo < intervals[i - 1].hi)
        throw ValidationError("size intervals must be ascending and non-overlapping");
    }
  }

  // Interval indices birds draw from in slot 1 (lower) and slot 2 (upper).
  // With an odd count the middle interval belongs to neither half; a single
  // interval serves as both.
  std::pair<std::size_t, std::size_t> lower_half() const noexcept {
    const std::size_t n = intervals.size();
    if (n == 1) return {0, 1};
    return {0, n / 2};
  }
  std::pair<std::size_t, std::size_t> upper_half() const noexcept {
    const std::size_t n = intervals.size();
    if (n == 1) return {0, 1};
    return {(n + 1) / 2, n};
  }
};

inline std::string format_intervals(const std::vector<SizeInterval>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i].lo) + ':' + std::to_string(v[i].hi);
  }
  return s;
}

// "lo:hi,lo:hi,..."
inline std::vector<SizeInterval> parse_intervals(const std::string& text) {
  std::vector<SizeInterval> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    SizeInterval s;
    char colon = 0;
    std::istringstream is(item);
    std::string rest;
    if (!(is >> s.lo >> colon >> s.hi) || colon != ':' || (is >> rest))
      throw ValidationError("bad size interval '" + item + "', expected lo:hi");
    out.push_back(s);
  }
  if (out.empty()) throw ValidationError("empty interval list");
  return out;
}

// "850x480"
inline std::pair<int, int> parse_resolution(const std::string& text) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream is(text);
  std::string rest;
  if (!(is >> w >> x >> h) || (x != 'x' && x != 'X') || (is >> rest) || w < 1 || h < 1)
    throw ValidationError("bad resolution '" + text + "', expected WxH");
  return {w, h};
}

// Flat `key = value` file; every key is optional so the file can sit between
// built-in defaults and command-line flags.
struct ParamsFile {
  std::optional<int> rows, cols;
  std::optional<std::vector<SizeInterval>> intervals;
  std::optional<std::optional<std::uint64_t>> max_frames;
  std::optional<std::pair<int, int>> resolution;
  std::optional<std::uint64_t> seed;

  void apply(SynthesisParams& p) const {
    if (rows) p.rows = *rows;
    if (cols) p.cols = *cols;
    if (intervals) p.intervals = *intervals;
    if (max_frames) p.max_frames = *max_frames;
    if (resolution) std::tie(p.width, p.height) = *resolution;
    if (seed) p.seed = *seed;
  }
};

inline ParamsFile parse_params(std::istream& in, const std::string& what = "params") {
  ParamsFile pf;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ValidationError(what + " line " + std::to_string(lineno) + ": " + msg);
  };
  auto to_u64 = [&](const std::string& v) -> std::uint64_t {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail("bad integer '" + v + "'");
    return out;
  };
  auto to_int = [&](const std::string& v) {
    const auto u = to_u64(v);
    if (u > 1'000'000) fail("value out of range '" + v + "'");
    return static_cast<int>(u);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string{};
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "rows") pf.rows = to_int(value);
    else if (key == "cols") pf.cols = to_int(value);
    else if (key == "intervals") pf.intervals = parse_intervals(value);
    else if (key == "max_frames")
      pf.max_frames = value == "all" ? std::optional<std::uint64_t>{}
                                     : std::optional<std::uint64_t>{to_u64(value)};
    else if (key == "resolution") pf.resolution = parse_resolution(value);
    else if (key == "seed") pf.seed = to_u64(value);
    else fail("unknown key '" + key + "'");
  }
  return pf;
}

inline ParamsFile read_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open params file");
  return parse_params(in, path.string());
}

inline std::string format_params(const SynthesisParams& p) {
  std::ostringstream os;
  os << "rows = " << p.rows << '\n'
     << "cols = " << p.cols << '\n'
     << "intervals = " << format_intervals(p.intervals) << '\n'
     << "max_frames = " << (p.max_frames ? std::to_string(*p.max_frames) : "all") << '\n'
     << "resolution = " << p.width << 'x' << p.height << '\n'
     << "seed = " << p.seed << '\n';
  return os.str();
}

inline void write_params(const std::filesystem::path& path, const SynthesisParams& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << format_params(p);
}

struct SynthesisConfig {
  std::size_t drone = 0;
  int row = 0;
  int col = 0;
  std::size_t interval = 0;
  std::size_t video = 0;
  std::uint64_t config_index = 0;

  friend constexpr bool operator==(const SynthesisConfig&,
                                   const SynthesisConfig&) = default;
};

// The Cartesian product drones x grid cells x intervals x videos, in
// lexicographic order (drone-major, video-minor). Configurations are computed
// on demand from their index.
class ConfigSpace {
 public:
  ConfigSpace(std::size_t drones, int rows, int cols, std::size_t intervals,
              std::size_t videos)
      : drones_(drones), rows_(rows), cols_(cols), intervals_(intervals),
        videos_(videos) {}

  std::uint64_t size() const noexcept {
    return std::uint64_t(drones_) * std::uint64_t(rows_) * std::uint64_t(cols_) *
           std::uint64_t(intervals_) * std::uint64_t(videos_);
  }

  SynthesisConfig at(std::uint64_t index) const {
    if (index >= size()) throw std::out_of_range("config index out of range");
    SynthesisConfig c;
    c.config_index = index;
    c.video = index % videos_;
    index /= videos_;
    c.interval = index % intervals_;
    index /= intervals_;
    c.col = static_cast<int>(index % cols_);
    index /= cols_;
    c.row = static_cast<int>(index % rows_);
    c.drone = index / rows_;
    return c;
  }

  class iterator {
   public:
    using value_type = SynthesisConfig;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(const ConfigSpace* s, std::uint64_t i) : space_(s), i_(i) {}
    SynthesisConfig operator*() const { return space_->at(i_); }
    iterator& operator++() { ++i_; return *this; }
    iterator operator++(int) { auto t = *this; ++i_; return t; }
    friend bool operator==(const iterator& a, const iterator& b) { return a.i_ == b.i_; }

   private:
    const ConfigSpace* space_ = nullptr;
    std::uint64_t i_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size()}; }

 private:
  std::size_t drones_;
  int rows_;
  int cols_;
  std::size_t intervals_;
  std::size_t videos_;
};

// Drones and birds from one asset list, order preserved.
struct AssetLibrary {
  std::vector<ForegroundAsset> drones;
  std::vector<ForegroundAsset> birds;

  static AssetLibrary from(std::vector<ForegroundAsset> assets) {
    AssetLibrary lib;
    for (auto& a : assets)
      (a.class_label == ObjectClass::drone ? lib.drones : lib.birds).push_back(std::move(a));
    return lib;
  }
};

inline ConfigSpace enumerate_configs(const AssetLibrary& assets,
                                     std::span<const BackgroundVideo> videos,
                                     const SynthesisParams& params) {
  if (assets.drones.empty()) throw ValidationError("no drone assets");
  if (videos.empty()) throw ValidationError("no background videos");
  return {assets.drones.size(), params.rows, params.cols, params.intervals.size(),
          videos.size()};
}

// Keep-probability for one configuration: the complement of the ignore
// probability 1 - max_allowed / total.
inline double retention_probability(std::uint64_t max_allowed_frames,
                                    std::uint64_t total_frames) {
  if (total_frames == 0) throw std::invalid_argument("total_frames must be > 0");
  return std::clamp(double(max_allowed_frames) / double(total_frames), 0.0, 1.0);
}

inline constexpr int kFramesPerConfig = 3;
inline constexpr int kPlacementAttempts = 16;

struct AnnotatedFrame {
  Image image;
  std::vector<Annotation> annotations;  // normalized boxes
  std::uint64_t config_index = 0;
  int slot = 0;
};

inline Rng config_rng(std::uint64_t global_seed, std::uint64_t config_index) {
  return Rng(mix_seed(global_seed, config_index));
}

namespace detail {

inline int draw_size(Rng& rng, SizeInterval s) {
  return static_cast<int>(uniform_int(rng, s.lo, s.hi - 1));
}

// Sprite center uniform over the cell; the top-left corner is the rounded
// center minus half the size. Redrawn until the sprite fits in the frame.
inline PixelPos place_in_cell(Rng& rng, int w, int h, int row, int col,
                              const SynthesisParams& p) {
  const double cw = double(p.width) / p.cols;
  const double ch = double(p.height) / p.rows;
  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    const double cx = uniform(rng, col * cw, (col + 1) * cw);
    const double cy = uniform(rng, row * ch, (row + 1) * ch);
    const int x = static_cast<int>(std::floor(cx - 0.5 * w + 0.5));
    const int y = static_cast<int>(std::floor(cy - 0.5 * h + 0.5));
    if (x >= 0 && y >= 0 && x + w <= p.width && y + h <= p.height) return {x, y};
  }
  throw PlacementInfeasible("sprite " + std::to_string(w) + "x" + std::to_string(h) +
                            " does not fit with its center in cell (" +
                            std::to_string(row) + "," + std::to_string(col) + ")");
}

inline PixelPos place_anywhere(Rng& rng, int w, int h, const SynthesisParams& p) {
  if (w > p.width || h > p.height)
    throw PlacementInfeasible("sprite larger than the frame");
  return {static_cast<int>(uniform_int(rng, 0, p.width - w)),
          static_cast<int>(uniform_int(rng, 0, p.height - h))};
}

inline Annotation annotate(const ForegroundAsset& a, const BoundingBox& px,
                           const SynthesisParams& p) {
  return {a.class_label, to_normalized(px, p.width, p.height)};
}

}  // namespace detail

// Composite the three frames of one configuration. All draws come from
// config_rng(seed, config_index) after its first value, which build_dataset
// spends on the keep/drop decision; the output therefore depends only on the
// inputs and never on the order configurations are processed in.
inline std::array<AnnotatedFrame, 3> synthesize_config(
    const SynthesisConfig& cfg, const AssetLibrary& assets,
    std::span<const BackgroundVideo> videos, const SynthesisParams& params) {
  if (cfg.drone >= assets.drones.size() || cfg.video >= videos.size() ||
      cfg.interval >= params.intervals.size() || cfg.row < 0 ||
      cfg.row >= params.rows || cfg.col < 0 || cfg.col >= params.cols)
    throw ValidationError("configuration does not match the asset/video sets");
  const auto& video = videos[cfg.video];
  if (video.frames.empty()) throw ValidationError("video " + video.video_id + " has no frames");
  if (video.width() != params.width || video.height() != params.height)
    throw ValidationError("video " + video.video_id + " does not match the target resolution");

  Rng rng = config_rng(params.seed, cfg.config_index);
  rng.discard(1);  // keep/drop draw

  const auto& drone = assets.drones[cfg.drone];
  const auto interval = params.intervals[cfg.interval];
  std::array<AnnotatedFrame, 3> out;

  for (int slot = 0; slot < kFramesPerConfig; ++slot) {
    AnnotatedFrame& f = out[slot];
    f.config_index = cfg.config_index;
    f.slot = slot;

    const int size = detail::draw_size(rng, interval);
    const auto frame_index = static_cast<std::size_t>(
        uniform_int(rng, 0, static_cast<std::int64_t>(video.frames.size()) - 1));
    const auto sized = resize_to_smaller_edge(drone, size);
    const auto pos = detail::place_in_cell(rng, sized.width(), sized.height(),
                                           cfg.row, cfg.col, params);
    auto composed = overlay(video.frames[frame_index], sized, pos);
    f.annotations.push_back(detail::annotate(sized, composed.box, params));

    if (slot > 0 && !assets.birds.empty()) {
      const auto bird_index = static_cast<std::size_t>(uniform_int(
          rng, 0, static_cast<std::int64_t>(assets.birds.size()) - 1));
      const auto [lo, hi] = slot == 1 ? params.lower_half() : params.upper_half();
      const auto bird_interval = params.intervals[static_cast<std::size_t>(
          uniform_int(rng, static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi) - 1))];
      const auto bird = resize_to_smaller_edge(assets.birds[bird_index],
                                               detail::draw_size(rng, bird_interval));
      const auto bpos = detail::place_anywhere(rng, bird.width(), bird.height(), params);
      auto with_bird = overlay(composed.image, bird, bpos);
      f.annotations.push_back(detail::annotate(bird, with_bird.box, params));
      composed.image = std::move(with_bird.image);
    }
    f.image = std::move(composed.image);
  }
  return out;
}

struct BuildOptions {
  unsigned threads = 1;
  bool write_images = true;
};

struct BuildReport {
  std::uint64_t enumerated = 0;
  std::uint64_t retained = 0;
  std::uint64_t infeasible = 0;
  std::uint64_t frames = 0;
  double retention = 1.0;
  std::vector<ManifestEntry> manifest;  // sorted by (config_index, slot)
};

inline double dataset_retention(const ConfigSpace& space, const SynthesisParams& p) {
  if (!p.max_frames) return 1.0;
  return retention_probability(*p.max_frames, space.size() * kFramesPerConfig);
}

inline std::string frame_stem(std::uint64_t config_index, int slot) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "c%010llu_s%d",
                static_cast<unsigned long long>(config_index), slot);
  return buf;
}

// Stream every configuration, keep each with the retention probability,
// synthesize the survivors and write
//   <out>/images/<stem>.png, <out>/labels/<stem>.txt, <out>/manifest.txt,
//   <out>/params.txt
// Paths in the manifest are relative to <out>.
inline BuildReport build_dataset(const AssetLibrary& assets,
                                 std::span<const BackgroundVideo> videos,
                                 const SynthesisParams& params,
                                 const std::filesystem::path& out_dir,
                                 BuildOptions opts = {}) {
  params.validate();
  const ConfigSpace space = enumerate_configs(assets, videos, params);

  BuildReport report;
  report.enumerated = space.size();
  report.retention = dataset_retention(space, params);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir / "images", ec);
  if (ec) throw IoError((out_dir / "images").string(), ec.message());
  fs::create_directories(out_dir / "labels", ec);
  if (ec) throw IoError((out_dir / "labels").string(), ec.message());

  const unsigned n_threads = std::max(1u, opts.threads);
  constexpr std::uint64_t kChunk = 256;
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> retained{0}, infeasible{0};
  std::mutex merge_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    std::vector<ManifestEntry> local;
    try {
      for (;;) {
        const std::uint64_t begin = next.fetch_add(kChunk);
        if (begin >= space.size()) break;
        const std::uint64_t end = std::min(begin + kChunk, space.size());
        for (std::uint64_t i = begin; i < end; ++i) {
          Rng rng = config_rng(params.seed, i);
          if (!(uniform01(rng) < report.retention)) continue;
          retained.fetch_add(1);
          std::array<AnnotatedFrame, 3> frames;
          try {
            frames = synthesize_config(space.at(i), assets, videos, params);
          } catch (const PlacementInfeasible&) {
            infeasible.fetch_add(1);
            continue;
          }
          for (const auto& f : frames) {
            const std::string stem = frame_stem(f.config_index, f.slot);
            ManifestEntry e{"images/" + stem + ".png", "labels/" + stem + ".txt",
                            f.config_index, f.slot};
            if (opts.write_images) write_png(out_dir / e.image, f.image);
            write_annotations(out_dir / e.annotation, f.annotations);
            local.push_back(std::move(e));
          }
        }
        std::lock_guard lock(merge_mutex);
        if (failure) break;
      }
    } catch (...) {
      std::lock_guard lock(merge_mutex);
      if (!failure) failure = std::current_exception();
      next.store(space.size());
    }
    std::lock_guard lock(merge_mutex);
    report.manifest.insert(report.manifest.end(), local.begin(), local.end());
  };

  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(report.manifest.begin(), report.manifest.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) {
              return std::tie(a.config_index, a.slot) < std::tie(b.config_index, b.slot);
            });
  report.retained = retained.load();
  report.infeasible = infeasible.load();
  report.frames = report.manifest.size();

  write_manifest(out_dir / "manifest.txt", report.manifest);
  write_params(out_dir / "params.txt", params);
  return report;
}

// Partition by configuration so the three frames of one configuration never
// straddle the two sides. Each side is returned sorted by (config, slot).
inline std::pair<std::vector<ManifestEntry>, std::vector<ManifestEntry>> split_dataset(
    std::span<const ManifestEntry> manifest, double train_fraction = 0.85,
    std::uint64_t seed = 0) {
  if (manifest.empty()) throw ValidationError("split_dataset: empty manifest");
  if (!(train_fraction >= 0.0 && train_fraction <= 1.0))
    throw ValidationError("train fraction must lie in [0, 1]");

  std::vector<std::uint64_t> configs;
  for (const auto& e : manifest) configs.push_back(e.config_index);
  std::sort(configs.begin(), configs.end());
  configs.erase(std::unique(configs.begin(), configs.end()), configs.end());

  Rng rng(mix_seed(seed, 0x5b117ULL));
  for (std::size_t i = configs.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1));
    std::swap(configs[i - 1], configs[j]);
  }
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * configs.size()));
  std::vector<std::uint64_t> train_ids(configs.begin(), configs.begin() + n_train);
  std::sort(train_ids.begin(), train_ids.end());

  std::pair<std::vector<ManifestEntry>, std::vector<ManifestEntry>> out;
  for (const auto& e : manifest) {
    const bool train = std::binary_search(train_ids.begin(), train_ids.end(), e.config_index);
    (train ? out.first : out.second).push_back(e);
  }
  auto by_key = [](const ManifestEntry& a, const ManifestEntry& b) {
    return std::tie(a.config_index, a.slot) < std::tie(b.config_index, b.slot);
  };
  std::sort(out.first.begin(), out.first.end(), by_key);
  std::sort(out.second.begin(), out.second.end(), by_key);
  return out;
}

}  // namespace aerosynth
