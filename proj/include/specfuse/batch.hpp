#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "specfuse/blend.hpp"
#include "specfuse/errors.hpp"
#include "specfuse/image.hpp"
#include "specfuse/io.hpp"
#include "specfuse/metrics.hpp"
#include "specfuse/pca.hpp"
#include "specfuse/region_fusion.hpp"
#include "specfuse/spectral.hpp"

namespace specfuse {

enum class Method { Alpha, Pca, Spectral, Superpixel, All };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Alpha: return "alpha";
    case Method::Pca: return "pca";
    case Method::Spectral: return "spectral";
    case Method::Superpixel: return "superpixel";
    case Method::All: return "all";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  for (Method m : {Method::Alpha, Method::Pca, Method::Spectral, Method::Superpixel, Method::All}) {
    if (s == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

inline std::vector<Method> expand_methods(Method m) {
  if (m == Method::All) return {Method::Alpha, Method::Pca, Method::Spectral, Method::Superpixel};
  return {m};
}

struct RunConfig {
  std::filesystem::path input_dir;
  std::filesystem::path nir_path;
  std::filesystem::path rgb_path;
  std::filesystem::path output_dir = "out";
  Method method = Method::Superpixel;

  double alpha = 0.5;
  double lp_sigma = 5.0;
  HighPassRule hp_rule = HighPassRule::AbsMax;
  SlicParams slic;
  MaskParams mask;
  std::optional<int> levels;
  bool shared_segmentation = false;
  ColorParams color;
  CannyParams canny;
  int radius = 1;

  bool dump_mask = false;
  bool dump_grades = false;
  std::optional<std::filesystem::path> report;
  bool report_timing = true;
  int jobs = 1;
};

inline void validate(const RunConfig& c) {
  const bool dir = !c.input_dir.empty();
  const bool explicit_pair = !c.nir_path.empty() || !c.rgb_path.empty();
  if (dir == explicit_pair) throw ConfigError("give either --input-dir or both --nir and --rgb");
  if (explicit_pair && (c.nir_path.empty() || c.rgb_path.empty())) {
    throw ConfigError("--nir and --rgb must be given together");
  }
  AlphaWeight{c.alpha};
  if (!(c.lp_sigma > 0.0)) throw ConfigError("lp-sigma must be > 0");
  if (c.slic.k_target < 1) throw ConfigError("superpixels must be >= 1");
  if (!(c.slic.compactness > 0.0)) throw ConfigError("compactness must be > 0");
  if (c.slic.iters < 1) throw ConfigError("slic-iters must be >= 1");
  if (!(c.mask.sigmoid_gain > 0.0)) throw ConfigError("sigmoid-gain must be > 0");
  if (c.mask.smooth_sigma && !(*c.mask.smooth_sigma > 0.0)) throw ConfigError("mask-sigma must be > 0");
  if (c.levels && *c.levels < 1) throw ConfigError("levels must be >= 1");
  validate(c.color);
  try {
    validate(c.canny);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (c.radius < 0) throw ConfigError("radius must be >= 0");
  if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
}

struct PairPaths {
  std::string stem;
  std::filesystem::path nir;
  std::filesystem::path rgb;
};

struct Discovery {
  std::vector<PairPaths> pairs;
  std::vector<std::string> warnings;
};

/// Matches `<stem>_nir.<ext>` with `<stem>_rgb.<ext>` (png, tif, tiff) and
/// returns the pairs ordered by stem. Unmatched files become warnings.
inline Discovery discover_pairs(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a readable directory: " + dir.string());

  std::map<std::string, std::vector<fs::path>> nir, rgb;
  fs::directory_iterator it(dir, ec);
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_regular_file(ec)) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (ext != ".png" && ext != ".tif" && ext != ".tiff") continue;
    const std::string stem = entry.path().stem().string();
    auto ends_with = [&](std::string_view s) {
      return stem.size() > s.size() && stem.compare(stem.size() - s.size(), s.size(), s) == 0;
    };
    if (ends_with("_nir")) {
      nir[stem.substr(0, stem.size() - 4)].push_back(entry.path());
    } else if (ends_with("_rgb")) {
      rgb[stem.substr(0, stem.size() - 4)].push_back(entry.path());
    }
  }

  Discovery out;
  auto pick = [&](std::vector<fs::path>& files) {
    std::sort(files.begin(), files.end());
    for (std::size_t i = 1; i < files.size(); ++i) {
      out.warnings.push_back("ignoring duplicate " + files[i].filename().string());
    }
    return files.front();
  };
  for (auto& [stem, files] : nir) {
    auto match = rgb.find(stem);
    if (match == rgb.end()) {
      for (const auto& f : files) out.warnings.push_back("unmatched file " + f.filename().string());
      continue;
    }
    out.pairs.push_back({stem, pick(files), pick(match->second)});
  }
  for (const auto& [stem, files] : rgb) {
    if (nir.count(stem)) continue;
    for (const auto& f : files) out.warnings.push_back("unmatched file " + f.filename().string());
  }
  std::sort(out.warnings.begin(), out.warnings.end());
  if (out.pairs.empty()) {
    std::string msg = "no NIR/RGB pairs found in " + dir.string();
    for (const auto& w : out.warnings) msg += "\n  " + w;
    throw NoPairsFound(msg);
  }
  return out;
}

struct FusionOutput {
  RgbImage color;
  GrayImage gray;
  std::optional<PcaStats> pca;
  std::optional<RegionFusion> region;
};

inline FusionOutput fuse(const ImagePair& pair, Method method, const RunConfig& cfg) {
  FusionOutput out;
  switch (method) {
    case Method::Alpha:
      out.gray = alpha_blend(pair.nir, pair.visible_gray, AlphaWeight(cfg.alpha));
      break;
    case Method::Pca: {
      PcaFusion p = pca_fuse(pair);
      out.gray = std::move(p.fused_gray);
      out.pca = p.stats;
      break;
    }
    case Method::Spectral:
      out.gray = spectral_fuse(pair, SpectralParams{cfg.alpha, cfg.lp_sigma, cfg.hp_rule});
      break;
    case Method::Superpixel: {
      RegionParams rp{cfg.slic, cfg.mask, cfg.levels, cfg.shared_segmentation, cfg.color};
      RegionFusion r = region_fuse(pair, rp);
      out.gray = r.fused_gray;
      out.color = std::move(r.fused);
      out.region = std::move(r);
      return out;
    }
    case Method::All:
      throw ConfigError("fuse() takes a single method");
  }
  out.color = restore_color(out.gray, pair.visible_gray, pair.visible, cfg.color);
  return out;
}

struct MethodRecord {
  Method method = Method::Superpixel;
  std::filesystem::path output;
  double wall_time_ms = 0.0;
  std::optional<double> edge_preservation_pct;
  std::optional<double> alpha_pca;
};

struct PairOutcome {
  std::string source_id;
  std::vector<MethodRecord> records;
  std::optional<std::string> error;
};

struct MethodAverage {
  Method method = Method::Superpixel;
  std::size_t count = 0;
  double edge_preservation_pct = 0.0;
  std::optional<double> alpha_pca;
  double wall_time_ms = 0.0;
};

struct RunResult {
  std::vector<PairOutcome> pairs;
  std::vector<MethodAverage> averages;
  std::vector<std::string> warnings;

  bool ok() const {
    return std::none_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.error.has_value(); });
  }
};

namespace detail {

inline void dump_grade(const GradeMap& g, const std::filesystem::path& path) {
  GrayImage img(g.width(), g.height());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = g.grades[i] / 0.5;
  save_gray(img, path);
}

inline PairOutcome process_pair(const PairPaths& paths, const RunConfig& cfg) {
  PairOutcome out;
  out.source_id = paths.stem;
  try {
    const ImagePair pair = load_pair(paths.nir, paths.rgb);
    std::optional<EdgeMap> e_nir, e_vis;
    if (cfg.report) {
      e_nir = canny_edges(pair.nir, cfg.canny);
      e_vis = canny_edges(pair.visible_gray, cfg.canny);
    }
    for (Method m : expand_methods(cfg.method)) {
      MethodRecord rec;
      rec.method = m;
      const auto t0 = std::chrono::steady_clock::now();
      FusionOutput f = fuse(pair, m, cfg);
      const auto t1 = std::chrono::steady_clock::now();
      rec.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      rec.output = cfg.output_dir / (paths.stem + "_" + to_string(m) + ".png");
      save_rgb(f.color, rec.output);
      if (f.pca) rec.alpha_pca = f.pca->alpha_pca;
      if (f.region && cfg.dump_mask) {
        GrayImage inv(f.region->mask.width(), f.region->mask.height());
        for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 - f.region->mask.weights[i];
        save_gray(inv, cfg.output_dir / (paths.stem + "_mask.png"));
      }
      if (f.region && cfg.dump_grades) {
        dump_grade(f.region->nir_grades, cfg.output_dir / (paths.stem + "_grade_nir.png"));
        dump_grade(f.region->visible_grades, cfg.output_dir / (paths.stem + "_grade_rgb.png"));
      }
      if (cfg.report) {
        rec.edge_preservation_pct =
            edge_preservation(*e_nir, *e_vis, canny_edges(f.gray, cfg.canny), cfg.radius);
      }
      out.records.push_back(std::move(rec));
    }
  } catch (const std::exception& e) {
    out.error = e.what();
    out.records.clear();
  }
  return out;
}

inline std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace detail

/// Per-method means over the successful pairs, in method order.
inline std::vector<MethodAverage> average_by_method(const std::vector<PairOutcome>& pairs) {
  std::vector<MethodAverage> out;
  for (Method m : expand_methods(Method::All)) {
    MethodAverage avg;
    avg.method = m;
    double alpha_sum = 0.0;
    std::size_t alpha_n = 0;
    for (const auto& p : pairs) {
      for (const auto& r : p.records) {
        if (r.method != m) continue;
        ++avg.count;
        avg.edge_preservation_pct += r.edge_preservation_pct.value_or(0.0);
        avg.wall_time_ms += r.wall_time_ms;
        if (r.alpha_pca) {
          alpha_sum += *r.alpha_pca;
          ++alpha_n;
        }
      }
    }
    if (avg.count == 0) continue;
    avg.edge_preservation_pct /= static_cast<double>(avg.count);
    avg.wall_time_ms /= static_cast<double>(avg.count);
    if (alpha_n > 0) avg.alpha_pca = alpha_sum / static_cast<double>(alpha_n);
    out.push_back(avg);
  }
  return out;
}

/// CSV: source_id,method,edge_preservation_pct,alpha_pca,wall_time_ms, one row
/// per (pair, method) and then one "average" row per method.
inline void write_report(const RunResult& result, const std::filesystem::path& path, bool timing) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write report " + path.string());
  os << "source_id,method,edge_preservation_pct,alpha_pca,wall_time_ms\n";
  for (const auto& p : result.pairs) {
    for (const auto& r : p.records) {
      os << p.source_id << ',' << to_string(r.method) << ','
         << (r.edge_preservation_pct ? detail::fmt(*r.edge_preservation_pct, 4) : "") << ','
         << (r.alpha_pca ? detail::fmt(*r.alpha_pca, 6) : "") << ','
         << (timing ? detail::fmt(r.wall_time_ms, 3) : "") << '\n';
    }
  }
  for (const auto& a : result.averages) {
    os << "average," << to_string(a.method) << ',' << detail::fmt(a.edge_preservation_pct, 4) << ','
       << (a.alpha_pca ? detail::fmt(*a.alpha_pca, 6) : "") << ','
       << (timing ? detail::fmt(a.wall_time_ms, 3) : "") << '\n';
  }
  if (!os) throw IoError("error writing report " + path.string());
}

/// Fuses every pair with every selected method. Per-pair failures are recorded
/// in the result; configuration and discovery errors throw before any work.
inline RunResult run(const RunConfig& cfg) {
  validate(cfg);
  RunResult result;
  std::vector<PairPaths> work;
  if (!cfg.input_dir.empty()) {
    Discovery d = discover_pairs(cfg.input_dir);
    work = std::move(d.pairs);
    result.warnings = std::move(d.warnings);
  } else {
    work.push_back({pair_stem(cfg.nir_path), cfg.nir_path, cfg.rgb_path});
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string());

  result.pairs.resize(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      result.pairs[i] = detail::process_pair(work[i], cfg);
    }
  };
  const auto n_threads = static_cast<std::size_t>(std::min<std::size_t>(cfg.jobs, work.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  result.averages = average_by_method(result.pairs);
  if (cfg.report) write_report(result, *cfg.report, cfg.report_timing);
  return result;
}

}  // namespace specfuse
