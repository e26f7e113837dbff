#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

#include "specfuse/blend.hpp"
#include "specfuse/errors.hpp"
#include "specfuse/filter.hpp"
#include "specfuse/image.hpp"
#include "specfuse/pyramid.hpp"
#include "specfuse/superpixel.hpp"

namespace specfuse {

/// Per-pixel weight of the NIR image, in [0,1].
struct FusionMask {
  Plane weights;

  int width() const noexcept { return weights.width(); }
  int height() const noexcept { return weights.height(); }
};

struct MaskParams {
  double sigmoid_gain = 8.0;
  // Gaussian smoothing of the mask; unset means max(width, height) / 64.
  std::optional<double> smooth_sigma;
  bool normalize = true;
};

inline double default_mask_sigma(int width, int height) {
  return static_cast<double>(std::max(width, height)) / 64.0;
}

/// floor(log2(min side)) - 3, clamped to [1, 8]: coarsest level keeps >= 8 px.
inline int default_levels(int width, int height) {
  const int m = std::min(width, height);
  int lg = 0;
  while ((2 << lg) <= m) ++lg;
  return std::clamp(lg - 3, 1, 8);
}

inline double logistic(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Linear rescale to span [0,1]; a constant field maps to 0.5 everywhere.
inline Plane minmax_normalize(const Plane& p) {
  Plane out(p.width(), p.height(), 0.5);
  if (p.empty()) return out;
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = (p[i] - *lo) / range;
  return out;
}

/// logistic(gain * (norm(g1) - norm(g2))), before any rescaling or smoothing.
inline Plane raw_mask(const GradeMap& g1, const GradeMap& g2, double gain) {
  require_same_shape(g1.grades, g2.grades, "fusion_mask");
  const Plane n1 = minmax_normalize(g1.grades);
  const Plane n2 = minmax_normalize(g2.grades);
  Plane out(n1.width(), n1.height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = logistic(gain * (n1[i] - n2[i]));
  return out;
}

inline FusionMask fusion_mask(const GradeMap& g1, const GradeMap& g2, const MaskParams& params = {}) {
  if (!(params.sigmoid_gain > 0.0)) throw ConfigError("sigmoid gain must be > 0");
  const double sigma =
      params.smooth_sigma.value_or(default_mask_sigma(g1.width(), g1.height()));
  if (!(sigma > 0.0)) throw InvalidSigma("mask smoothing sigma must be > 0");

  Plane m = raw_mask(g1, g2, params.sigmoid_gain);
  if (params.normalize) m = minmax_normalize(m);
  m = gaussian_blur(m, sigma);
  for (double& v : m) v = std::clamp(v, 0.0, 1.0);
  return FusionMask{std::move(m)};
}

/// mask*i1 + (1-mask)*i2, pointwise.
inline GrayImage masked_fuse_flat(const GrayImage& i1, const GrayImage& i2, const FusionMask& mask) {
  require_same_shape(i1, i2, "masked_fuse_flat");
  require_same_shape(i1, mask.weights, "masked_fuse_flat");
  GrayImage out(i1.width(), i1.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double m = mask.weights[i];
    out[i] = m * i1[i] + (1.0 - m) * i2[i];
  }
  return out;
}

/// Blends the Laplacian pyramids of i1 and i2 level by level with the Gaussian
/// pyramid of the mask, collapses, and clamps to [0,1].
inline GrayImage masked_fuse_pyramid(const GrayImage& i1, const GrayImage& i2,
                                     const FusionMask& mask, int levels) {
  require_same_shape(i1, i2, "masked_fuse_pyramid");
  require_same_shape(i1, mask.weights, "masked_fuse_pyramid");
  const LaplacianPyramid p1 = build_laplacian(i1, levels);
  const LaplacianPyramid p2 = build_laplacian(i2, levels);
  const std::vector<Plane> pm = build_gaussian(mask.weights, levels);

  auto mix = [](const Plane& a, const Plane& b, const Plane& m) {
    Plane out(a.width(), a.height());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = m[i] * a[i] + (1.0 - m[i]) * b[i];
    return out;
  };
  LaplacianPyramid fused;
  fused.levels.reserve(p1.levels.size());
  for (std::size_t l = 0; l < p1.levels.size(); ++l) {
    fused.levels.push_back(mix(p1.levels[l], p2.levels[l], pm[l]));
  }
  fused.base = mix(p1.base, p2.base, pm.back());
  return clamp01(collapse(fused));
}

struct RegionParams {
  SlicParams slic;
  MaskParams mask;
  std::optional<int> levels;  // unset: default_levels
  bool shared_segmentation = false;
  ColorParams color;
};

struct RegionFusion {
  RgbImage fused;
  GrayImage fused_gray;
  FusionMask mask;
  GradeMap nir_grades;
  GradeMap visible_grades;
};

/// Superpixel content fusion: grade both inputs by per-superpixel standard
/// deviation, turn the grade difference into a soft mask, blend through
/// Laplacian pyramids and recolour with the visible chroma.
inline RegionFusion region_fuse(const ImagePair& pair, const RegionParams& params = {}) {
  const GrayImage& nir = pair.nir;
  const GrayImage& gray = pair.visible_gray;
  require_same_shape(nir, gray, "region_fuse");

  RegionFusion out;
  if (params.shared_segmentation) {
    GrayImage mean(nir.width(), nir.height());
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] = 0.5 * (nir[i] + gray[i]);
    const SuperpixelMap seg = slic_segment(mean, params.slic);
    out.nir_grades = grade_map(nir, seg);
    out.visible_grades = grade_map(gray, seg);
  } else {
    out.nir_grades = grade_map(nir, slic_segment(nir, params.slic));
    out.visible_grades = grade_map(gray, slic_segment(gray, params.slic));
  }
  out.mask = fusion_mask(out.nir_grades, out.visible_grades, params.mask);
  const int levels = params.levels.value_or(default_levels(nir.width(), nir.height()));
  out.fused_gray = masked_fuse_pyramid(nir, gray, out.mask, levels);
  out.fused = restore_color(out.fused_gray, gray, pair.visible, params.color);
  return out;
}

}  // namespace specfuse
