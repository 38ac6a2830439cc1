#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process;
// tools/aerosynth.cpp is a thin main().

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aerosynth/anchors.hpp"
#include "aerosynth/assets.hpp"
#include "aerosynth/dataset_io.hpp"
#include "aerosynth/errors.hpp"
#include "aerosynth/evaluator.hpp"
#include "aerosynth/grid_codec.hpp"
#include "aerosynth/plot.hpp"
#include "aerosynth/synthesizer.hpp"
#include "aerosynth/tracker.hpp"

namespace aerosynth::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3 };

// "start:stop:step" or a comma-separated list.
inline std::vector<double> parse_thresholds(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double lo, hi, step;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || hi < lo)
      throw ValidationError("bad threshold range '" + text + "', expected start:stop:step");
    const auto steps = static_cast<int>(std::llround((hi - lo) / step));
    if (steps == 0) return {lo};
    out = threshold_grid(steps, lo, hi);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ValidationError("bad threshold '" + item + "'");
      }
    }
  }
  if (out.empty()) throw ValidationError("no thresholds");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] < out[i - 1]) throw ValidationError("thresholds must be ascending");
  return out;
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string(), "write failed");
}

inline void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());
}

inline std::optional<BoundingBox> drone_box(const std::vector<Annotation>& anns) {
  for (const auto& a : anns)
    if (a.class_label == ObjectClass::drone) return a.box;
  return std::nullopt;
}

inline std::vector<std::optional<BoundingBox>> load_ground_truth(const Manifest& m) {
  std::vector<std::optional<BoundingBox>> out;
  out.reserve(m.entries.size());
  for (const auto& e : m.entries) out.push_back(drone_box(read_annotations(m.resolve(e.annotation))));
  return out;
}

// Resolution recorded next to a generated dataset, if any.
inline std::optional<std::pair<int, int>> dataset_resolution(const Manifest& m) {
  const fs::path p = m.base / "params.txt";
  if (!fs::exists(p)) return std::nullopt;
  return read_params(p).resolution;
}

inline std::vector<FrameVerdict> parse_verdicts(std::istream& in, const std::string& what) {
  std::vector<FrameVerdict> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == kVerdictHeader) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() == 6) f.emplace_back();
    if (f.size() != 7)
      throw ValidationError(what + " line " + std::to_string(lineno) + ": expected 7 fields");
    FrameVerdict v;
    try {
      if (!f[1].empty())
        v.reported = BoundingBox{std::stod(f[1]), std::stod(f[2]), std::stod(f[3]), std::stod(f[4])};
      if (f[5] == "current") v.source = VerdictSource::current;
      else if (f[5] == "held-previous") v.source = VerdictSource::held_previous;
      else if (f[5] == "fallback") v.source = VerdictSource::fallback;
      else throw ValidationError("unknown source '" + f[5] + "'");
      if (!f[6].empty()) {
        Detection d;
        d.objectness = std::stod(f[6]);
        if (v.reported) d.box = *v.reported;
        v.raw_best = d;
      }
    } catch (const ValidationError& e) {
      throw ValidationError(what + " line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception&) {
      throw ValidationError(what + " line " + std::to_string(lineno) + ": bad number");
    }
    out.push_back(std::move(v));
  }
  return out;
}

struct CurveOutputs {
  std::vector<PRPoint> pr;
  std::vector<PenaltyPoint> penalty;
};

inline void write_curves(const fs::path& out_dir, const CurveOutputs& c) {
  write_text(out_dir / "pr.csv", pr_csv(c.pr));
  write_text(out_dir / "penalty.csv", penalty_csv(c.penalty));
  write_text(out_dir / "curves.svg", curves_svg(c.pr, c.penalty));
}

class App {
 public:
  App(std::ostream& out, std::ostream& log) : out_(out), log_(log) {}

  int run(std::vector<std::string> args) {
    CLI::App app{"Synthetic drone dataset generation and detection post-processing"};
    app.require_subcommand(1);
    app.add_flag("-v,--verbose", verbose_, "Log progress details");

    std::uint64_t env_seed = 0;
    if (const char* s = std::getenv("AEROSYNTH_SEED")) {
      try {
        env_seed = std::stoull(s);
      } catch (const std::exception&) {
        log_ << "error: AEROSYNTH_SEED is not an integer\n";
        return kUsage;
      }
    }

    // synthesize
    auto* syn = app.add_subcommand("synthesize", "Generate an annotated synthetic dataset");
    std::string syn_assets, syn_videos, syn_params, syn_out, syn_intervals, syn_resolution;
    std::optional<int> syn_rows, syn_cols;
    std::optional<std::uint64_t> syn_max, syn_seed;
    unsigned syn_threads = 1;
    syn->add_option("--assets", syn_assets, "Asset manifest (<path> <drone|bird> <RRGGBB> <tol>)")->required();
    syn->add_option("--videos", syn_videos, "Directory with one sub-directory of PNG frames per video")->required();
    syn->add_option("--params", syn_params, "Params file (key = value)");
    syn->add_option("--out", syn_out, "Output directory")->required();
    syn->add_option("--rows", syn_rows, "Grid rows");
    syn->add_option("--cols", syn_cols, "Grid columns");
    syn->add_option("--intervals", syn_intervals, "Size intervals lo:hi,lo:hi,...");
    syn->add_option("--max-frames", syn_max, "Frame budget");
    syn->add_option("--resolution", syn_resolution, "Frame size WxH");
    syn->add_option("--seed", syn_seed, "Global seed");
    syn->add_option("--threads", syn_threads, "Worker threads")->check(CLI::Range(1u, 256u));

    // anchors
    auto* anc = app.add_subcommand("anchors", "Cluster ground-truth box shapes into anchor priors");
    std::string anc_manifest, anc_out, anc_class = "all";
    std::size_t anc_k = 5;
    std::optional<std::uint64_t> anc_seed;
    int anc_iter = 300;
    double anc_tol = 1e-6;
    anc->add_option("--manifest", anc_manifest, "Dataset manifest")->required();
    anc->add_option("--out", anc_out, "Anchor file to write")->required();
    anc->add_option("-k,--k", anc_k, "Number of anchors")->check(CLI::PositiveNumber);
    anc->add_option("--seed", anc_seed, "Seed for center initialization");
    anc->add_option("--max-iter", anc_iter, "Iteration cap");
    anc->add_option("--tol", anc_tol, "Convergence tolerance on center movement");
    anc->add_option("--class", anc_class, "Boxes to use: all, drone or bird")
        ->check(CLI::IsMember({"all", "drone", "bird"}));

    // simulate
    auto* sim = app.add_subcommand("simulate", "Oracle detector end to end: encode, decode, track, evaluate");
    std::string sim_manifest, sim_anchors, sim_out, sim_thresholds = "0:1:0.01", sim_resolution;
    double sim_noise = 0.0, sim_verdict_threshold = 0.5;
    int sim_limit = kDefaultIgnoreLimit;
    std::size_t sim_grid = 15;
    std::optional<std::uint64_t> sim_seed;
    bool sim_raw = false, sim_combined = false;
    sim->add_option("--manifest", sim_manifest, "Dataset manifest, frames in video order")->required();
    sim->add_option("--anchors", sim_anchors, "Anchor file")->required();
    sim->add_option("--out", sim_out, "Output directory")->required();
    sim->add_option("--noise", sim_noise, "Gaussian noise sigma added to raw tensor values")->check(CLI::NonNegativeNumber);
    sim->add_option("--limit", sim_limit, "Limited-ignorance frame limit")->check(CLI::NonNegativeNumber);
    sim->add_option("--thresholds", sim_thresholds, "start:stop:step or comma list");
    sim->add_option("--grid-size", sim_grid, "Grid side S")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "Noise seed");
    sim->add_option("--resolution", sim_resolution, "Evaluation resolution WxH for the fallback box");
    sim->add_option("--verdict-threshold", sim_verdict_threshold, "Threshold used for verdicts.csv");
    sim->add_flag("--raw", sim_raw, "Score raw argmax detections instead of tracker output");
    sim->add_flag("--combined-score", sim_combined, "Rank by objectness * P(drone)");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Score tensors or a verdict log against ground truth");
    std::string ev_tensors, ev_verdicts, ev_gt, ev_anchors, ev_out, ev_thresholds = "0:1:0.01", ev_resolution;
    int ev_limit = kDefaultIgnoreLimit;
    bool ev_raw = false, ev_combined = false;
    auto* ev_t = ev->add_option("--tensors", ev_tensors, "Directory of .dgrd tensors (sorted by name)");
    auto* ev_v = ev->add_option("--verdicts", ev_verdicts, "Verdict CSV");
    ev_t->excludes(ev_v);
    ev->add_option("--gt", ev_gt, "Ground-truth dataset manifest")->required();
    ev->add_option("--anchors", ev_anchors, "Anchor file (with --tensors)");
    ev->add_option("--out", ev_out, "Output directory")->required();
    ev->add_option("--thresholds", ev_thresholds, "start:stop:step or comma list");
    ev->add_option("--limit", ev_limit, "Limited-ignorance frame limit")->check(CLI::NonNegativeNumber);
    ev->add_option("--resolution", ev_resolution, "Evaluation resolution WxH for the fallback box");
    ev->add_flag("--raw", ev_raw, "Score raw argmax detections instead of tracker output");
    ev->add_flag("--combined-score", ev_combined, "Rank by objectness * P(drone)");

    // split
    auto* sp = app.add_subcommand("split", "Split a dataset manifest into training and validation");
    std::string sp_manifest, sp_train, sp_val;
    double sp_fraction = 0.85;
    std::optional<std::uint64_t> sp_seed;
    sp->add_option("--manifest", sp_manifest, "Dataset manifest")->required();
    sp->add_option("--train-out", sp_train, "Training manifest to write")->required();
    sp->add_option("--val-out", sp_val, "Validation manifest to write")->required();
    sp->add_option("--train-fraction", sp_fraction, "Fraction of configurations for training")
        ->check(CLI::Range(0.0, 1.0));
    sp->add_option("--seed", sp_seed, "Shuffle seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out_ << app.help();
        return kOk;
      }
      log_ << "error: " << e.what() << '\n';
      return kUsage;
    }

    try {
      if (*syn) {
        SynthesisParams p;
        p.seed = env_seed;
        if (!syn_params.empty()) read_params(syn_params).apply(p);
        if (syn_rows) p.rows = *syn_rows;
        if (syn_cols) p.cols = *syn_cols;
        if (!syn_intervals.empty()) p.intervals = parse_intervals(syn_intervals);
        if (syn_max) p.max_frames = *syn_max;
        if (!syn_resolution.empty()) std::tie(p.width, p.height) = parse_resolution(syn_resolution);
        if (syn_seed) p.seed = *syn_seed;
        return synthesize(syn_assets, syn_videos, syn_out, p, syn_threads);
      }
      if (*anc) {
        KMeansOptions o{anc_k, anc_seed.value_or(env_seed), anc_iter, anc_tol};
        return anchors(anc_manifest, anc_out, anc_class, o);
      }
      if (*sim) {
        TrackerParams tp{sim_limit, !sim_raw,
                         sim_combined ? ScoreMode::combined : ScoreMode::objectness, 850, 480};
        return simulate(sim_manifest, sim_anchors, sim_out, parse_thresholds(sim_thresholds),
                        sim_resolution, tp, sim_noise, sim_seed.value_or(env_seed), sim_grid,
                        sim_verdict_threshold);
      }
      if (*ev) {
        TrackerParams tp{ev_limit, !ev_raw,
                         ev_combined ? ScoreMode::combined : ScoreMode::objectness, 850, 480};
        return evaluate(ev_tensors, ev_verdicts, ev_gt, ev_anchors, ev_out,
                        parse_thresholds(ev_thresholds), ev_resolution, tp);
      }
      if (*sp) return split(sp_manifest, sp_train, sp_val, sp_fraction, sp_seed.value_or(env_seed));
    } catch (const IoError& e) {
      log_ << "error: " << e.what() << '\n';
      return kIo;
    } catch (const fs::filesystem_error& e) {
      log_ << "error: " << e.what() << '\n';
      return kIo;
    } catch (const ValidationError& e) {
      log_ << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const std::exception& e) {
      log_ << "error: " << e.what() << '\n';
      return kFailure;
    }
    return kUsage;
  }

 private:
  void echo(const std::string& key, const std::string& value) {
    log_ << "# " << key << " = " << value << '\n';
  }

  int synthesize(const fs::path& assets_manifest, const fs::path& videos_dir,
                 const fs::path& out_dir, const SynthesisParams& p, unsigned threads) {
    p.validate();
    echo("command", "synthesize");
    echo("assets", assets_manifest.string());
    echo("videos", videos_dir.string());
    echo("out", out_dir.string());
    echo("threads", std::to_string(threads));
    std::istringstream resolved(format_params(p));
    for (std::string line; std::getline(resolved, line);) log_ << "# " << line << '\n';

    auto entries = read_asset_manifest(assets_manifest);
    auto lib = AssetLibrary::from(load_assets(entries));
    if (lib.drones.empty()) throw ValidationError(assets_manifest.string() + ": no drone assets");
    if (!fs::is_directory(videos_dir))
      throw ValidationError(videos_dir.string() + ": not a directory");
    const auto videos = load_videos(videos_dir, p.width, p.height);
    if (verbose_)
      log_ << "loaded " << lib.drones.size() << " drones, " << lib.birds.size() << " birds, "
           << videos.size() << " videos\n";

    const auto report = build_dataset(lib, videos, p, out_dir, {threads, true});
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", report.retention);
    out_ << "enumerated " << report.enumerated << '\n'
         << "retention " << buf << '\n'
         << "retained " << report.retained << '\n'
         << "infeasible " << report.infeasible << '\n'
         << "frames " << report.frames << '\n';
    return kOk;
  }

  int anchors(const fs::path& manifest_path, const fs::path& out, const std::string& cls,
              const KMeansOptions& o) {
    echo("command", "anchors");
    echo("manifest", manifest_path.string());
    echo("out", out.string());
    echo("k", std::to_string(o.k));
    echo("seed", std::to_string(o.seed));
    echo("max_iter", std::to_string(o.max_iter));
    echo("tol", std::to_string(o.tol));
    echo("class", cls);

    const auto m = read_manifest(manifest_path);
    std::vector<AnchorShape> boxes;
    for (const auto& e : m.entries)
      for (const auto& a : read_annotations(m.resolve(e.annotation))) {
        if (cls == "drone" && a.class_label != ObjectClass::drone) continue;
        if (cls == "bird" && a.class_label != ObjectClass::bird) continue;
        boxes.push_back({a.box.w, a.box.h});
      }
    const auto set = cluster_anchors(boxes, o);
    write_anchors(out, set);
    char buf[64];
    for (const auto& a : set.anchors) {
      std::snprintf(buf, sizeof buf, "%.6f %.6f", a.w, a.h);
      out_ << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.9g", set.inertia);
    out_ << "inertia " << buf << '\n' << "boxes " << boxes.size() << '\n';
    return kOk;
  }

  std::pair<int, int> resolve_resolution(const std::string& flag, const Manifest& m) {
    if (!flag.empty()) return parse_resolution(flag);
    if (auto r = dataset_resolution(m)) return *r;
    return {850, 480};
  }

  void echo_tracker(const TrackerParams& tp, std::span<const double> thresholds) {
    echo("limit", std::to_string(tp.limit));
    echo("filter", tp.filter ? "tracker" : "raw");
    echo("score", tp.score == ScoreMode::objectness ? "objectness" : "combined");
    echo("resolution", std::to_string(tp.width) + "x" + std::to_string(tp.height));
    echo("thresholds", std::to_string(thresholds.size()) + " from " +
                           format_threshold(thresholds.front()) + " to " +
                           format_threshold(thresholds.back()));
  }

  int simulate(const fs::path& manifest_path, const fs::path& anchors_path, const fs::path& out_dir,
               const std::vector<double>& thresholds, const std::string& resolution,
               TrackerParams tp, double noise, std::uint64_t seed, std::size_t grid_size,
               double verdict_threshold) {
    const auto m = read_manifest(manifest_path);
    std::tie(tp.width, tp.height) = resolve_resolution(resolution, m);
    const auto anchor_shapes = read_anchors(anchors_path);
    echo("command", "simulate");
    echo("manifest", manifest_path.string());
    echo("anchors", anchors_path.string());
    echo("out", out_dir.string());
    echo("noise", std::to_string(noise));
    echo("seed", std::to_string(seed));
    echo("grid_size", std::to_string(grid_size));
    echo("verdict_threshold", std::to_string(verdict_threshold));
    echo_tracker(tp, thresholds);

    make_dirs(out_dir / "tensors");
    std::vector<EvalFrame> frames;
    frames.reserve(m.entries.size());
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
      const auto anns = read_annotations(m.resolve(m.entries[i].annotation));
      // Resolve slot collisions by keeping the first annotation.
      std::vector<Annotation> kept;
      for (const auto& a : anns) {
        kept.push_back(a);
        try {
          (void)encode(kept, grid_size, anchor_shapes);
        } catch (const CellCollision&) {
          kept.pop_back();
          ++dropped;
        }
      }
      const auto grid =
          encode(kept, grid_size, anchor_shapes, {noise, mix_seed(seed, i), 2});
      char name[32];
      std::snprintf(name, sizeof name, "%06zu.dgrd", i);
      write_grid(out_dir / "tensors" / name, grid);
      frames.push_back({decode(grid, anchor_shapes), drone_box(anns)});
    }
    if (dropped > 0) log_ << "warning: dropped " << dropped << " colliding annotations\n";

    std::string verdicts(kVerdictHeader);
    verdicts += '\n';
    const auto vs = run_sequence(frames, verdict_threshold, tp);
    for (std::size_t i = 0; i < vs.size(); ++i) verdicts += format_verdict(i, vs[i]) + '\n';
    write_text(out_dir / "verdicts.csv", verdicts);

    CurveOutputs c{pr_curve(frames, thresholds, tp), penalty_curve(frames, thresholds, tp)};
    write_curves(out_dir, c);
    summarize(c);
    return kOk;
  }

  int evaluate(const std::string& tensors_dir, const std::string& verdicts_csv,
               const fs::path& gt_manifest, const std::string& anchors_path,
               const fs::path& out_dir, const std::vector<double>& thresholds,
               const std::string& resolution, TrackerParams tp) {
    if (tensors_dir.empty() == verdicts_csv.empty())
      throw ValidationError("give exactly one of --tensors or --verdicts");
    const auto m = read_manifest(gt_manifest);
    std::tie(tp.width, tp.height) = resolve_resolution(resolution, m);
    const auto gts = load_ground_truth(m);
    echo("command", "evaluate");
    echo("gt", gt_manifest.string());
    echo("out", out_dir.string());
    make_dirs(out_dir);

    CurveOutputs c;
    if (!verdicts_csv.empty()) {
      echo("verdicts", verdicts_csv);
      echo("resolution", std::to_string(tp.width) + "x" + std::to_string(tp.height));
      std::ifstream in(verdicts_csv);
      if (!in) throw IoError(verdicts_csv, "cannot open verdict log");
      const auto vs = parse_verdicts(in, verdicts_csv);
      if (vs.size() != gts.size())
        throw ValidationError("verdict log has " + std::to_string(vs.size()) +
                              " frames, ground truth has " + std::to_string(gts.size()));
      // A verdict log is already thresholded: one point, threshold left as NaN.
      const double t = std::nan("");
      c.pr.push_back(PRPoint::from(t, tally(vs, gts)));
      c.penalty.push_back(mean_penalty(t, vs, gts, tp.width, tp.height));
    } else {
      if (anchors_path.empty()) throw ValidationError("--anchors is required with --tensors");
      echo("tensors", tensors_dir);
      echo("anchors", anchors_path);
      echo_tracker(tp, thresholds);
      const auto anchor_shapes = read_anchors(anchors_path);
      std::vector<fs::path> files;
      std::error_code ec;
      for (const auto& e : fs::directory_iterator(tensors_dir, ec))
        if (e.is_regular_file() && e.path().extension() == ".dgrd") files.push_back(e.path());
      if (ec) throw IoError(tensors_dir, ec.message());
      std::sort(files.begin(), files.end());
      if (files.size() != gts.size())
        throw ValidationError(std::to_string(files.size()) + " tensors but " +
                              std::to_string(gts.size()) + " ground-truth frames");
      std::vector<EvalFrame> frames;
      for (std::size_t i = 0; i < files.size(); ++i)
        frames.push_back({decode(read_grid(files[i]), anchor_shapes), gts[i]});
      c.pr = pr_curve(frames, thresholds, tp);
      c.penalty = penalty_curve(frames, thresholds, tp);
    }
    write_curves(out_dir, c);
    summarize(c);
    return kOk;
  }

  void summarize(const CurveOutputs& c) {
    // One line per threshold would flood the terminal; report the ends.
    auto line = [&](const PRPoint& p, const PenaltyPoint& q) {
      out_ << "threshold " << format_threshold(p.threshold) << " precision "
           << (p.precision ? format_optional(p.precision) : "-") << " recall "
           << (p.recall ? format_optional(p.recall) : "-") << " mean_penalty "
           << (q.mean_penalty ? format_optional(q.mean_penalty) : "-") << '\n';
    };
    if (c.pr.empty()) return;
    line(c.pr.front(), c.penalty.front());
    if (c.pr.size() > 1) line(c.pr.back(), c.penalty.back());
  }

  int split(const fs::path& manifest_path, const fs::path& train_out, const fs::path& val_out,
            double fraction, std::uint64_t seed) {
    echo("command", "split");
    echo("manifest", manifest_path.string());
    echo("train_fraction", std::to_string(fraction));
    echo("seed", std::to_string(seed));
    const auto m = read_manifest(manifest_path);
    auto [train, val] = split_dataset(m.entries, fraction, seed);

    // Rewrite relative paths so they resolve from each output's directory.
    auto rebase = [&](std::vector<ManifestEntry>& entries, const fs::path& out) {
      const fs::path dir = fs::absolute(out).parent_path();
      for (auto& e : entries) {
        auto fix = [&](std::string& p) {
          const fs::path abs = fs::absolute(m.resolve(p));
          p = fs::relative(abs, dir).generic_string();
        };
        fix(e.image);
        fix(e.annotation);
      }
    };
    rebase(train, train_out);
    rebase(val, val_out);
    write_manifest(train_out, train);
    write_manifest(val_out, val);
    out_ << "train " << train.size() << '\n' << "validation " << val.size() << '\n';
    return kOk;
  }

  std::ostream& out_;
  std::ostream& log_;
  bool verbose_ = false;
};

inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& log = std::cerr) {
  return App(out, log).run(std::move(args));
}

}  // namespace aerosynth::cli
