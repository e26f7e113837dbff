#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "specfuse/errors.hpp"
#include "specfuse/image.hpp"

namespace specfuse {

/// Partition of the pixel grid into k 4-connected regions labelled 0..k-1.
struct SuperpixelMap {
  Raster<int> labels;
  int k = 0;

  int width() const noexcept { return labels.width(); }
  int height() const noexcept { return labels.height(); }
};

/// Per-pixel intensity standard deviation of the enclosing superpixel.
struct GradeMap {
  Plane grades;

  int width() const noexcept { return grades.width(); }
  int height() const noexcept { return grades.height(); }
};

struct SlicParams {
  int k_target = 400;
  double compactness = 10.0;
  int iters = 10;
};

// SLIC's colour term is calibrated for L* in [0,100]; gray intensities in [0,1]
// are measured on the same scale so the usual compactness values apply.
inline constexpr double kSlicIntensityScale = 100.0;

namespace detail {

struct SlicCenter {
  double l = 0.0;
  double x = 0.0;
  double y = 0.0;
};

inline double slic_gradient(const GrayImage& img, int x, int y) {
  const double dx = img.at_clamped(x + 1, y) - img.at_clamped(x - 1, y);
  const double dy = img.at_clamped(x, y + 1) - img.at_clamped(x, y - 1);
  return dx * dx + dy * dy;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void attach(int child, int root) { parent_[child] = root; }

 private:
  std::vector<int> parent_;
};

// Seed grid of nx * ny cells: close to k seeds with near-square cells. A
// relative count error weighs twice as much as the same cell aspect error.
inline std::pair<int, int> seed_grid(int w, int h, int k) {
  std::pair<int, int> best{1, 1};
  double best_cost = std::numeric_limits<double>::infinity();
  for (int nx = 1; nx <= std::min(k, w); ++nx) {
    for (int ny : {k / nx, k / nx + 1}) {
      ny = std::clamp(ny, 1, h);
      const double count = static_cast<double>(nx) * ny;
      const double aspect = (static_cast<double>(w) / nx) / (static_cast<double>(h) / ny);
      const double cost = 2.0 * std::abs(std::log(count / k)) + std::abs(std::log(aspect));
      if (cost < best_cost) {
        best_cost = cost;
        best = {nx, ny};
      }
    }
  }
  return best;
}

// Splits every label into its 4-connected components. Components of at least
// min_size pixels anchor a region, as does the largest component of a label
// that has none that big. Every other component (including unassigned ones,
// label -1) is absorbed into the adjacent anchored region sharing the longest
// border. Labels are renumbered in raster order of first appearance.
inline SuperpixelMap enforce_connectivity(const Raster<int>& raw, std::size_t min_size) {
  const int w = raw.width();
  const int h = raw.height();
  const std::size_t n = raw.size();

  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> members;
  std::vector<int> comp_label;
  std::vector<int> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] >= 0) continue;
    const int id = static_cast<int>(members.size());
    const int lab = raw[start];
    members.emplace_back();
    comp_label.push_back(lab);
    auto& list = members.back();
    comp[start] = id;
    stack.assign(1, static_cast<int>(start));
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      list.push_back(p);
      const int x = p % w;
      const int y = p / w;
      const int nbr[4] = {x > 0 ? p - 1 : -1, x + 1 < w ? p + 1 : -1, y > 0 ? p - w : -1,
                          y + 1 < h ? p + w : -1};
      for (int q : nbr) {
        if (q >= 0 && comp[q] < 0 && raw[q] == lab) {
          comp[q] = id;
          stack.push_back(q);
        }
      }
    }
  }

  const std::size_t ncomp = members.size();
  std::vector<char> anchored(ncomp, 0);
  struct LabelInfo {
    int largest = -1;
    bool anchored = false;
  };
  std::unordered_map<int, LabelInfo> labels;
  for (std::size_t c = 0; c < ncomp; ++c) {
    if (comp_label[c] < 0) continue;
    LabelInfo& info = labels[comp_label[c]];
    if (members[c].size() >= min_size) anchored[c] = info.anchored = true;
    if (info.largest < 0 || members[c].size() > members[static_cast<std::size_t>(info.largest)].size()) {
      info.largest = static_cast<int>(c);
    }
  }
  for (const auto& [lab, info] : labels) {
    if (!info.anchored) anchored[static_cast<std::size_t>(info.largest)] = 1;
  }
  if (std::find(anchored.begin(), anchored.end(), 1) == anchored.end()) anchored[0] = 1;

  UnionFind uf(ncomp);
  std::vector<std::pair<int, int>> border;  // (anchored root, shared edge count)
  bool pending = true;
  while (pending) {
    pending = false;
    for (std::size_t c = 0; c < ncomp; ++c) {
      const int ci = static_cast<int>(c);
      if (anchored[c] || uf.find(ci) != ci) continue;
      border.clear();
      for (int p : members[c]) {
        const int x = p % w;
        const int y = p / w;
        const int nbr[4] = {x > 0 ? p - 1 : -1, x + 1 < w ? p + 1 : -1, y > 0 ? p - w : -1,
                            y + 1 < h ? p + w : -1};
        for (int q : nbr) {
          if (q < 0) continue;
          const int r = uf.find(comp[q]);
          if (r == ci || !anchored[static_cast<std::size_t>(r)]) continue;
          auto it = std::find_if(border.begin(), border.end(),
                                 [r](const auto& e) { return e.first == r; });
          if (it == border.end()) {
            border.emplace_back(r, 1);
          } else {
            ++it->second;
          }
        }
      }
      if (border.empty()) {
        pending = true;
        continue;
      }
      const auto best = std::min_element(border.begin(), border.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
      });
      const int target = best->first;
      uf.attach(ci, target);
      auto& dst = members[static_cast<std::size_t>(target)];
      dst.insert(dst.end(), members[c].begin(), members[c].end());
      members[c].clear();
      members[c].shrink_to_fit();
    }
  }

  SuperpixelMap out{Raster<int>(w, h, -1), 0};
  std::vector<int> final_label(ncomp, -1);
  for (std::size_t p = 0; p < n; ++p) {
    const int r = uf.find(comp[p]);
    if (final_label[r] < 0) final_label[r] = out.k++;
    out.labels[p] = final_label[r];
  }
  return out;
}

}  // namespace detail

/// SLIC over scalar intensity: grid seeds nudged to the 3x3 gradient minimum,
/// windowed k-means in (intensity, x, y), then connectivity enforcement.
/// Equal distances keep the lower-indexed centre.
inline SuperpixelMap slic_segment(const GrayImage& img, const SlicParams& params = {}) {
  const int w = img.width();
  const int h = img.height();
  const std::size_t n = img.size();
  if (params.k_target < 1 || static_cast<std::size_t>(params.k_target) > n) {
    throw InvalidK("superpixel count must lie in [1, " + std::to_string(n) + "], got " +
                   std::to_string(params.k_target));
  }
  if (!(params.compactness > 0.0)) throw ConfigError("compactness must be > 0");
  if (params.iters < 1) throw ConfigError("slic iterations must be >= 1");

  const int k = params.k_target;
  const double step = std::sqrt(static_cast<double>(n) / k);
  const auto [nx, ny] = detail::seed_grid(w, h, k);
  const double cell_w = static_cast<double>(w) / nx;
  const double cell_h = static_cast<double>(h) / ny;

  std::vector<detail::SlicCenter> centers;
  centers.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int sx = std::min(static_cast<int>((i + 0.5) * cell_w), w - 1);
      const int sy = std::min(static_cast<int>((j + 0.5) * cell_h), h - 1);
      int bx = sx, by = sy;
      double best = detail::slic_gradient(img, sx, sy);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int x = sx + dx, y = sy + dy;
          if (x < 0 || y < 0 || x >= w || y >= h) continue;
          const double g = detail::slic_gradient(img, x, y);
          if (g < best) {
            best = g;
            bx = x;
            by = y;
          }
        }
      }
      centers.push_back({img(bx, by), static_cast<double>(bx), static_cast<double>(by)});
    }
  }

  const double spatial = (params.compactness / step) * (params.compactness / step);
  Raster<int> labels(w, h, -1);
  std::vector<double> dist(n);
  std::vector<double> sum_l, sum_x, sum_y;
  std::vector<std::size_t> count;
  for (int it = 0; it < params.iters; ++it) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    std::fill(labels.begin(), labels.end(), -1);
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const auto& ctr = centers[c];
      const int x0 = std::max(0, static_cast<int>(std::floor(ctr.x - cell_w)));
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(ctr.x + cell_w)));
      const int y0 = std::max(0, static_cast<int>(std::floor(ctr.y - cell_h)));
      const int y1 = std::min(h - 1, static_cast<int>(std::ceil(ctr.y + cell_h)));
      for (int y = y0; y <= y1; ++y) {
        const auto row = img.row(y);
        const double dy = y - ctr.y;
        const std::size_t base = static_cast<std::size_t>(y) * w;
        for (int x = x0; x <= x1; ++x) {
          const double dl = kSlicIntensityScale * (row[x] - ctr.l);
          const double dx = x - ctr.x;
          const double d = dl * dl + spatial * (dx * dx + dy * dy);
          if (d < dist[base + x]) {
            dist[base + x] = d;
            labels[base + x] = static_cast<int>(c);
          }
        }
      }
    }

    sum_l.assign(centers.size(), 0.0);
    sum_x.assign(centers.size(), 0.0);
    sum_y.assign(centers.size(), 0.0);
    count.assign(centers.size(), 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int lab = labels(x, y);
        if (lab < 0) continue;
        sum_l[lab] += img(x, y);
        sum_x[lab] += x;
        sum_y[lab] += y;
        ++count[lab];
      }
    }
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (count[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(count[c]);
      centers[c] = {sum_l[c] * inv, sum_x[c] * inv, sum_y[c] * inv};
    }
  }

  const auto min_size = static_cast<std::size_t>(static_cast<double>(n) / (4.0 * k));
  return detail::enforce_connectivity(labels, min_size);
}

/// Population standard deviation of the intensities at the given pixel indices.
inline double superpixel_grade(const GrayImage& img, std::span<const std::size_t> region) {
  if (region.empty()) throw EmptyRegion("superpixel_grade of an empty region");
  const double ref = img[region[0]];
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t p : region) {
    const double d = img[p] - ref;
    s1 += d;
    s2 += d * d;
  }
  const double nn = static_cast<double>(region.size());
  const double mean = s1 / nn;
  return std::sqrt(std::max(0.0, s2 / nn - mean * mean));
}

/// Every pixel carries the standard deviation of its superpixel.
inline GradeMap grade_map(const GrayImage& img, const SuperpixelMap& seg) {
  require_same_shape(img, seg.labels, "grade_map");
  const auto k = static_cast<std::size_t>(seg.k);
  std::vector<double> ref(k, 0.0), s1(k, 0.0), s2(k, 0.0);
  std::vector<std::size_t> cnt(k, 0);
  for (std::size_t p = 0; p < img.size(); ++p) {
    const auto lab = static_cast<std::size_t>(seg.labels[p]);
    if (cnt[lab] == 0) ref[lab] = img[p];
    const double d = img[p] - ref[lab];
    s1[lab] += d;
    s2[lab] += d * d;
    ++cnt[lab];
  }
  std::vector<double> grade(k, 0.0);
  for (std::size_t l = 0; l < k; ++l) {
    if (cnt[l] == 0) continue;
    const double nn = static_cast<double>(cnt[l]);
    const double mean = s1[l] / nn;
    grade[l] = std::sqrt(std::max(0.0, s2[l] / nn - mean * mean));
  }
  GradeMap out{Plane(img.width(), img.height())};
  for (std::size_t p = 0; p < img.size(); ++p) {
    out.grades[p] = grade[static_cast<std::size_t>(seg.labels[p])];
  }
  return out;
}

}  // namespace specfuse
