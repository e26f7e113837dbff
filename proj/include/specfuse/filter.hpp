#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "specfuse/errors.hpp"
#include "specfuse/image.hpp"

namespace specfuse {

/// One half of a symmetric, unit-sum 1-D kernel: taps[0] is the centre weight,
/// taps[k] the weight at offsets +k and -k.
struct SymmetricKernel {
  std::vector<double> taps;

  int radius() const noexcept { return static_cast<int>(taps.size()) - 1; }
};

/// Sampled Gaussian, radius ceil(3*sigma), normalised to unit sum.
inline SymmetricKernel gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidSigma("gaussian sigma must be > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  SymmetricKernel k;
  k.taps.resize(static_cast<std::size_t>(radius) + 1);
  double sum = 0.0;
  for (int i = 0; i <= radius; ++i) {
    k.taps[i] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += (i == 0 ? 1.0 : 2.0) * k.taps[i];
  }
  for (double& t : k.taps) t /= sum;
  return k;
}

// 1/16 [1 4 6 4 1]
inline SymmetricKernel binomial5_kernel() { return SymmetricKernel{{6.0 / 16, 4.0 / 16, 1.0 / 16}}; }

namespace detail {

// Filters are evaluated as centre + sum_k w_k * (neighbour - centre). For a
// unit-sum kernel this is the ordinary convolution, but constants pass through
// bit-exactly.
inline void smooth_rows(const Plane& src, Plane& dst, const SymmetricKernel& k) {
  const int w = src.width();
  const int r = k.radius();
  std::vector<double> padded(static_cast<std::size_t>(w + 2 * r));
  for (int y = 0; y < src.height(); ++y) {
    const auto in = src.row(y);
    for (int i = 0; i < w + 2 * r; ++i) padded[i] = in[std::clamp(i - r, 0, w - 1)];
    auto out = dst.row(y);
    for (int x = 0; x < w; ++x) {
      const double* p = padded.data() + x + r;
      const double c = *p;
      double acc = 0.0;
      for (int j = 1; j <= r; ++j) acc += k.taps[j] * ((p[j] - c) + (p[-j] - c));
      out[x] = c + acc;
    }
  }
}

inline void smooth_cols(const Plane& src, Plane& dst, const SymmetricKernel& k) {
  const int w = src.width();
  const int h = src.height();
  const int r = k.radius();
  std::vector<double> acc(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    const auto c = src.row(y);
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int j = 1; j <= r; ++j) {
      const auto up = src.row(std::max(y - j, 0));
      const auto dn = src.row(std::min(y + j, h - 1));
      const double t = k.taps[j];
      for (int x = 0; x < w; ++x) acc[x] += t * ((dn[x] - c[x]) + (up[x] - c[x]));
    }
    auto out = dst.row(y);
    for (int x = 0; x < w; ++x) out[x] = c[x] + acc[x];
  }
}

}  // namespace detail

/// Separable filtering with a symmetric unit-sum kernel and clamp-to-edge
/// borders.
inline Plane smooth_separable(const Plane& img, const SymmetricKernel& k) {
  if (img.empty()) return img;
  Plane tmp(img.width(), img.height());
  Plane out(img.width(), img.height());
  detail::smooth_rows(img, tmp, k);
  detail::smooth_cols(tmp, out, k);
  return out;
}

inline Plane gaussian_blur(const Plane& img, double sigma) {
  return smooth_separable(img, gaussian_kernel(sigma));
}

struct Gradient {
  Plane gx;
  Plane gy;
};

/// 3x3 Sobel derivatives, clamp-to-edge.
inline Gradient sobel(const Plane& img) {
  Gradient g{Plane(img.width(), img.height()), Plane(img.width(), img.height())};
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const double a = img.at_clamped(x - 1, y - 1), b = img.at_clamped(x, y - 1),
                   c = img.at_clamped(x + 1, y - 1);
      const double d = img.at_clamped(x - 1, y), f = img.at_clamped(x + 1, y);
      const double gg = img.at_clamped(x - 1, y + 1), h = img.at_clamped(x, y + 1),
                   i = img.at_clamped(x + 1, y + 1);
      g.gx(x, y) = (c + 2.0 * f + i) - (a + 2.0 * d + gg);
      g.gy(x, y) = (gg + 2.0 * h + i) - (a + 2.0 * b + c);
    }
  }
  return g;
}

}  // namespace specfuse
