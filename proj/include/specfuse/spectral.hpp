#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string_view>

#include "specfuse/blend.hpp"
#include "specfuse/errors.hpp"
#include "specfuse/filter.hpp"
#include "specfuse/image.hpp"

namespace specfuse {

/// Gaussian low-pass and its residual. low + high == source.
struct BandSplit {
  Plane low;
  Plane high;
};

inline BandSplit band_split(const GrayImage& img, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidSigma("band_split sigma must be > 0");
  BandSplit out{gaussian_blur(img, sigma), Plane(img.width(), img.height())};
  for (std::size_t i = 0; i < img.size(); ++i) out.high[i] = img[i] - out.low[i];
  return out;
}

enum class HighPassRule {
  AbsMax,      // coefficient of larger magnitude, sign kept
  LiteralMax,  // larger signed value
};

inline HighPassRule parse_hp_rule(std::string_view s) {
  if (s == "abs") return HighPassRule::AbsMax;
  if (s == "literal") return HighPassRule::LiteralMax;
  throw ConfigError("hp-rule must be 'abs' or 'literal'");
}

inline const char* to_string(HighPassRule r) {
  return r == HighPassRule::AbsMax ? "abs" : "literal";
}

inline double select_high(double h1, double h2, HighPassRule rule) noexcept {
  if (rule == HighPassRule::LiteralMax) return std::max(h1, h2);
  return std::abs(h1) >= std::abs(h2) ? h1 : h2;
}

struct SpectralParams {
  double alpha = 0.5;
  double lp_sigma = 5.0;
  HighPassRule hp_rule = HighPassRule::AbsMax;
};

/// Low bands alpha-blended, high bands max-selected, recombined without clamping.
inline Plane spectral_fuse_unclamped(const GrayImage& i1, const GrayImage& i2,
                                     const SpectralParams& p) {
  require_same_shape(i1, i2, "spectral_fuse");
  const double a = AlphaWeight(p.alpha).value();
  const BandSplit b1 = band_split(i1, p.lp_sigma);
  const BandSplit b2 = band_split(i2, p.lp_sigma);
  Plane out(i1.width(), i1.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double low = a * b1.low[i] + (1.0 - a) * b2.low[i];
    out[i] = low + select_high(b1.high[i], b2.high[i], p.hp_rule);
  }
  return out;
}

inline GrayImage spectral_fuse(const ImagePair& pair, const SpectralParams& p) {
  return clamp01(spectral_fuse_unclamped(pair.nir, pair.visible_gray, p));
}

}  // namespace specfuse
