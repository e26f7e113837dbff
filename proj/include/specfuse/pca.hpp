#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "specfuse/blend.hpp"
#include "specfuse/errors.hpp"
#include "specfuse/image.hpp"

namespace specfuse {

/// Second-order statistics of an image pair (population, divide-by-N).
struct ChannelStats {
  double v1 = 0.0;
  double v2 = 0.0;
  double c = 0.0;
};

/// Joint statistics and the dominant-eigenvector blend weight derived from them.
struct PcaStats {
  double v1 = 0.0;
  double v2 = 0.0;
  double c = 0.0;
  double sigma_disc = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::array<double, 2> eigvec{1.0, 0.0};
  double alpha_pca = 1.0;
  bool degenerate = false;
};

// Covariances below this are treated as a diagonal covariance matrix.
inline constexpr double kCovarianceEps = 1e-12;

namespace detail {

// Mean as x0 + mean(x - x0) so that a constant image has an exact mean.
inline double shifted_mean(const GrayImage& img) {
  const double x0 = img[0];
  double s = 0.0;
  for (double v : img) s += v - x0;
  return x0 + s / static_cast<double>(img.size());
}

}  // namespace detail

inline ChannelStats channel_stats(const GrayImage& i1, const GrayImage& i2) {
  require_same_shape(i1, i2, "channel_stats");
  if (i1.size() < 2) throw InvalidStats("channel_stats needs at least 2 pixels");
  const double m1 = detail::shifted_mean(i1);
  const double m2 = detail::shifted_mean(i2);
  double s11 = 0.0, s22 = 0.0, s12 = 0.0;
  for (std::size_t i = 0; i < i1.size(); ++i) {
    const double d1 = i1[i] - m1;
    const double d2 = i2[i] - m2;
    s11 += d1 * d1;
    s22 += d2 * d2;
    s12 += d1 * d2;
  }
  const double n = static_cast<double>(i1.size());
  return ChannelStats{s11 / n, s22 / n, s12 / n};
}

/// Eigen-analysis of [[v1, c], [c, v2]].
///
/// The discriminant is sqrt((v1-v2)^2 + 4c^2), which is what the characteristic
/// polynomial lambda^2 - lambda(v1+v2) + v1*v2 - c^2 actually gives. The
/// dominant eigenvector is normalised to first component 1 and its inverse
/// norm is the weight of the first image. When |c| < kCovarianceEps the matrix
/// is diagonal and the weight goes wholly to the higher-variance image, ties
/// to the first.
inline PcaStats pca_alpha(const ChannelStats& s) {
  if (!(s.v1 >= 0.0) || !(s.v2 >= 0.0) || !std::isfinite(s.c)) {
    throw InvalidStats("variances must be finite and non-negative");
  }
  if (s.c * s.c > s.v1 * s.v2 * (1.0 + 1e-9) + 1e-18) {
    throw InvalidStats("covariance violates Cauchy-Schwarz");
  }

  PcaStats out;
  out.v1 = s.v1;
  out.v2 = s.v2;
  out.c = s.c;
  const double diff = s.v1 - s.v2;
  out.sigma_disc = std::sqrt(diff * diff + 4.0 * s.c * s.c);
  out.lambda1 = 0.5 * (s.v1 + s.v2 + out.sigma_disc);
  const double det = s.v1 * s.v2 - s.c * s.c;
  out.lambda2 = out.lambda1 > 0.0 ? det / out.lambda1 : 0.0;

  if (std::abs(s.c) < kCovarianceEps) {
    out.degenerate = true;
    if (s.v1 >= s.v2) {
      out.eigvec = {1.0, 0.0};
      out.alpha_pca = 1.0;
    } else {
      // The dominant axis is the second one; [1, t] only reaches it as t -> inf.
      out.eigvec = {0.0, 1.0};
      out.alpha_pca = 0.0;
    }
    return out;
  }

  // (lambda1 - v1) / c, arranged to avoid cancellation on either sign of diff.
  const double t = diff >= 0.0 ? 2.0 * s.c / (out.sigma_disc + diff)
                               : (out.sigma_disc - diff) / (2.0 * s.c);
  out.eigvec = {1.0, t};
  out.alpha_pca = 1.0 / std::hypot(1.0, t);
  return out;
}

struct PcaFusion {
  GrayImage fused_gray;
  PcaStats stats;
};

inline PcaFusion pca_fuse(const ImagePair& pair) {
  PcaStats stats = pca_alpha(channel_stats(pair.nir, pair.visible_gray));
  GrayImage fused = alpha_blend(pair.nir, pair.visible_gray, AlphaWeight(stats.alpha_pca));
  return PcaFusion{std::move(fused), stats};
}

}  // namespace specfuse
