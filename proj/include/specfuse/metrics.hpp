#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "specfuse/errors.hpp"
#include "specfuse/filter.hpp"
#include "specfuse/image.hpp"

namespace specfuse {

struct CannyParams {
  double sigma = 1.4;
  // Hysteresis thresholds as fractions of the image's maximum gradient magnitude.
  double low_frac = 0.1;
  double high_frac = 0.2;
};

inline void validate(const CannyParams& p) {
  if (!(p.sigma > 0.0)) throw InvalidSigma("canny sigma must be > 0");
  if (!(p.low_frac > 0.0 && p.low_frac < p.high_frac && p.high_frac <= 1.0)) {
    throw InvalidThresholds("canny thresholds need 0 < low < high <= 1");
  }
}

/// Gaussian smoothing, Sobel, 4-direction non-maximum suppression and
/// 8-connected hysteresis.
inline EdgeMap canny_edges(const GrayImage& img, const CannyParams& params = {}) {
  validate(params);
  const int w = img.width();
  const int h = img.height();
  const Gradient g = sobel(gaussian_blur(img, params.sigma));

  Plane mag(w, h);
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::hypot(g.gx[i], g.gy[i]);
  const double peak = *std::max_element(mag.begin(), mag.end());
  EdgeMap edges(w, h, 0);
  if (!(peak > 0.0)) return edges;

  auto m_at = [&](int x, int y) {
    return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag(x, y);
  };
  constexpr double kTan22 = 0.41421356237309503;  // tan(22.5 deg)
  constexpr double kTan67 = 2.414213562373095;    // tan(67.5 deg)

  Plane thin(w, h, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag(x, y);
      if (m == 0.0) continue;
      const double ax = std::abs(g.gx(x, y));
      const double ay = std::abs(g.gy(x, y));
      double before, after;  // neighbours on the lower-index / higher-index side
      if (ay <= kTan22 * ax) {
        before = m_at(x - 1, y);
        after = m_at(x + 1, y);
      } else if (ay > kTan67 * ax) {
        before = m_at(x, y - 1);
        after = m_at(x, y + 1);
      } else if ((g.gx(x, y) > 0.0) == (g.gy(x, y) > 0.0)) {
        before = m_at(x - 1, y - 1);
        after = m_at(x + 1, y + 1);
      } else {
        before = m_at(x + 1, y - 1);
        after = m_at(x - 1, y + 1);
      }
      // Strict on one side so a plateau two pixels wide keeps only one.
      if (m > before && m >= after) thin(x, y) = m;
    }
  }

  const double high = params.high_frac * peak;
  const double low = params.low_frac * peak;
  std::vector<int> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (edges(x, y) || thin(x, y) < high) continue;
      edges(x, y) = 1;
      stack.assign(1, y * w + x);
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        const int px = p % w, py = p / w;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int qx = px + dx, qy = py + dy;
            if (qx < 0 || qy < 0 || qx >= w || qy >= h) continue;
            if (edges(qx, qy) || thin(qx, qy) < low || thin(qx, qy) == 0.0) continue;
            edges(qx, qy) = 1;
            stack.push_back(qy * w + qx);
          }
        }
      }
    }
  }
  return edges;
}

namespace detail {

// Max filter over a (2r+1)^2 square, i.e. Chebyshev dilation.
inline EdgeMap dilate_square(const EdgeMap& e, int r) {
  if (r == 0) return e;
  const int w = e.width(), h = e.height();
  EdgeMap tmp(w, h, 0), out(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!e(x, y)) continue;
      for (int xx = std::max(0, x - r); xx <= std::min(w - 1, x + r); ++xx) tmp(xx, y) = 1;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!tmp(x, y)) continue;
      for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r); ++yy) out(x, yy) = 1;
    }
  }
  return out;
}

}  // namespace detail

/// Percentage of edge pixels of either input that have a fused edge pixel
/// within Chebyshev distance `radius`. 100 when the inputs have no edges.
inline double edge_preservation(const EdgeMap& e_in1, const EdgeMap& e_in2, const EdgeMap& e_fused,
                                int radius = 1) {
  require_same_shape(e_in1, e_in2, "edge_preservation");
  require_same_shape(e_in1, e_fused, "edge_preservation");
  if (radius < 0) throw ConfigError("edge preservation radius must be >= 0");
  const EdgeMap near = detail::dilate_square(e_fused, radius);
  std::size_t total = 0, kept = 0;
  for (std::size_t i = 0; i < e_in1.size(); ++i) {
    if (!e_in1[i] && !e_in2[i]) continue;
    ++total;
    if (near[i]) ++kept;
  }
  if (total == 0) return 100.0;
  return 100.0 * static_cast<double>(kept) / static_cast<double>(total);
}

}  // namespace specfuse
