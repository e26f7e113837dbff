#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "specfuse/errors.hpp"
#include "specfuse/filter.hpp"
#include "specfuse/image.hpp"

namespace specfuse {

/// Band-pass levels finest first, plus the coarsest Gaussian level.
struct LaplacianPyramid {
  std::vector<Plane> levels;
  Plane base;
};

inline int half_size(int n) noexcept { return (n + 1) / 2; }

/// Checks that `levels` Gaussian levels fit: every level that gets reduced
/// must leave at least 2 pixels on each side.
inline void check_levels(int width, int height, int levels) {
  if (levels < 1) throw TooManyLevels("pyramid depth must be >= 1");
  int w = width, h = height;
  for (int l = 1; l < levels; ++l) {
    w = half_size(w);
    h = half_size(h);
    if (std::min(w, h) < 2) {
      throw TooManyLevels("pyramid depth " + std::to_string(levels) + " too deep for " +
                          std::to_string(width) + "x" + std::to_string(height));
    }
  }
}

/// Deepest depth check_levels accepts.
inline int max_levels(int width, int height) {
  int levels = 1;
  int w = width, h = height;
  while (std::min(half_size(w), half_size(h)) >= 2) {
    w = half_size(w);
    h = half_size(h);
    ++levels;
  }
  return levels;
}

/// Binomial blur then keep even-indexed samples; output is ceil(w/2) x ceil(h/2).
inline Plane reduce(const Plane& img) {
  const Plane blurred = smooth_separable(img, binomial5_kernel());
  Plane out(half_size(img.width()), half_size(img.height()));
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) out(x, y) = blurred(2 * x, 2 * y);
  }
  return out;
}

namespace detail {

// Zero-insertion followed by the 2x binomial kernel, written out per output
// parity: even samples get (1/8, 6/8, 1/8) of coarse j-1, j, j+1 and odd samples
// get (1/2, 1/2) of coarse j, j+1. Coarse indices clamp to the edge.
inline double expand_even(double left, double centre, double right) noexcept {
  return centre + 0.125 * ((left - centre) + (right - centre));
}
inline double expand_odd(double centre, double right) noexcept {
  return centre + 0.5 * (right - centre);
}

}  // namespace detail

/// Upsample to an explicit finer size, which must halve (rounding up) to the
/// coarse size.
inline Plane expand(const Plane& coarse, int width, int height) {
  if (half_size(width) != coarse.width() || half_size(height) != coarse.height()) {
    throw MalformedPyramid("expand target " + std::to_string(width) + "x" +
                           std::to_string(height) + " does not halve to " +
                           std::to_string(coarse.width()) + "x" + std::to_string(coarse.height()));
  }
  const int cw = coarse.width();
  const int ch = coarse.height();
  Plane horiz(width, ch);
  for (int y = 0; y < ch; ++y) {
    const auto in = coarse.row(y);
    auto out = horiz.row(y);
    for (int x = 0; x < width; ++x) {
      const int j = x / 2;
      const double c = in[j];
      const double r = in[std::min(j + 1, cw - 1)];
      out[x] = (x % 2 == 0) ? detail::expand_even(in[std::max(j - 1, 0)], c, r)
                            : detail::expand_odd(c, r);
    }
  }
  Plane out(width, height);
  for (int y = 0; y < height; ++y) {
    const int j = y / 2;
    const auto c = horiz.row(j);
    const auto r = horiz.row(std::min(j + 1, ch - 1));
    const auto l = horiz.row(std::max(j - 1, 0));
    auto dst = out.row(y);
    if (y % 2 == 0) {
      for (int x = 0; x < width; ++x) dst[x] = detail::expand_even(l[x], c[x], r[x]);
    } else {
      for (int x = 0; x < width; ++x) dst[x] = detail::expand_odd(c[x], r[x]);
    }
  }
  return out;
}

inline std::vector<Plane> build_gaussian(const Plane& img, int levels) {
  check_levels(img.width(), img.height(), levels);
  std::vector<Plane> out;
  out.reserve(static_cast<std::size_t>(levels));
  out.push_back(img);
  for (int l = 1; l < levels; ++l) out.push_back(reduce(out.back()));
  return out;
}

inline LaplacianPyramid build_laplacian(const Plane& img, int levels) {
  std::vector<Plane> gauss = build_gaussian(img, levels);
  LaplacianPyramid p;
  p.levels.reserve(gauss.size() - 1);
  for (std::size_t l = 0; l + 1 < gauss.size(); ++l) {
    const Plane up = expand(gauss[l + 1], gauss[l].width(), gauss[l].height());
    Plane band(gauss[l].width(), gauss[l].height());
    for (std::size_t i = 0; i < band.size(); ++i) band[i] = gauss[l][i] - up[i];
    p.levels.push_back(std::move(band));
  }
  p.base = std::move(gauss.back());
  return p;
}

/// Inverse of build_laplacian. Not clamped.
inline Plane collapse(const LaplacianPyramid& p) {
  Plane acc = p.base;
  for (auto it = p.levels.rbegin(); it != p.levels.rend(); ++it) {
    Plane up = expand(acc, it->width(), it->height());
    for (std::size_t i = 0; i < up.size(); ++i) up[i] += (*it)[i];
    acc = std::move(up);
  }
  return acc;
}

}  // namespace specfuse
