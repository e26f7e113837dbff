#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "specfuse/errors.hpp"
#include "specfuse/image.hpp"

namespace specfuse {

/// Weight of the first (NIR) image in a global blend. Always in [0,1].
class AlphaWeight {
 public:
  explicit AlphaWeight(double alpha) : value_(alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw ConfigError("alpha must lie in [0,1], got " + std::to_string(alpha));
    }
  }
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// F = alpha*i1 + (1-alpha)*i2, pointwise.
inline GrayImage alpha_blend(const GrayImage& i1, const GrayImage& i2, AlphaWeight alpha) {
  require_same_shape(i1, i2, "alpha_blend");
  const double a = alpha.value();
  const double b = 1.0 - a;
  GrayImage out(i1.width(), i1.height());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * i1[i] + b * i2[i];
  return out;
}

struct ColorParams {
  // Below this luminance the ratio is undefined and the pixel falls back to gray.
  double g_eps = 1.0 / 255.0;
  // Upper bound on the luminance ratio applied to the chroma.
  double r_max = 4.0;
};

inline void validate(const ColorParams& p) {
  if (!(p.g_eps >= 0.0) || !std::isfinite(p.g_eps)) throw ConfigError("g-eps must be >= 0");
  if (!(p.r_max > 0.0) || !std::isfinite(p.r_max)) throw ConfigError("r-max must be > 0");
}

/// Recolours a fused luminance with the chroma of the visible image:
/// F_c = clamp(clamp(f_gray/g, 0, r_max) * v_c, 0, 1). Pixels with g < g_eps
/// become achromatic f_gray.
inline RgbImage restore_color(const GrayImage& f_gray, const GrayImage& g, const RgbImage& v,
                              const ColorParams& params = {}) {
  require_same_shape(f_gray, g, "restore_color");
  require_same_shape(f_gray, v, "restore_color");
  RgbImage out(v.width(), v.height());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double f = f_gray[i];
    if (!(g[i] >= params.g_eps) || g[i] <= 0.0) {
      const double c = std::clamp(f, 0.0, 1.0);
      out[i] = Rgb{c, c, c};
      continue;
    }
    const double ratio = std::clamp(f / g[i], 0.0, params.r_max);
    const Rgb& p = v[i];
    out[i] = Rgb{std::clamp(ratio * p.r, 0.0, 1.0), std::clamp(ratio * p.g, 0.0, 1.0),
                 std::clamp(ratio * p.b, 0.0, 1.0)};
  }
  return out;
}

}  // namespace specfuse
