#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specfuse/errors.hpp"

namespace specfuse {

/// Row-major 2-D grid of pixels. Value type; copies are deep.
template <class T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;

  Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw DimensionMismatch("negative raster dimensions");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Raster(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 0 || height < 0 ||
        data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw DimensionMismatch("raster data length does not match width*height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  // Clamp-to-edge access; the border convention used by every filter here.
  const T& at_clamped(int x, int y) const noexcept {
    return (*this)(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
  }

  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> pixels() noexcept { return data_; }
  std::span<const T> pixels() const noexcept { return data_; }

  std::span<T> row(int y) noexcept {
    return std::span<T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<const T> row(int y) const noexcept {
    return std::span<const T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  template <class U>
  bool same_shape(const Raster<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct Rgb {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Intensities in [0,1].
using GrayImage = Raster<double>;
// Signed real-valued field (band-pass levels, high-pass residuals, gradients).
using Plane = Raster<double>;
using RgbImage = Raster<Rgb>;
using EdgeMap = Raster<std::uint8_t>;

/// An aligned NIR / visible pair. visible_gray is always to_gray(visible).
struct ImagePair {
  GrayImage nir;
  RgbImage visible;
  GrayImage visible_gray;
  std::string source_id;
};

template <class A, class B>
void require_same_shape(const Raster<A>& a, const Raster<B>& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.width()) + "x" +
                            std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                            "x" + std::to_string(b.height()));
  }
}

inline bool is_valid_gray(const GrayImage& img) {
  if (img.width() < 1 || img.height() < 1) return false;
  return std::all_of(img.begin(), img.end(),
                     [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; });
}

inline bool is_valid_rgb(const RgbImage& img) {
  if (img.width() < 1 || img.height() < 1) return false;
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  return std::all_of(img.begin(), img.end(),
                     [&](const Rgb& p) { return ok(p.r) && ok(p.g) && ok(p.b); });
}

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

/// BT.601 luma. Evaluated as r + wg*(g-r) + wb*(b-r) so that achromatic
/// pixels map to their channel value exactly.
inline double luma(const Rgb& p) noexcept {
  const double y = p.r + kLumaG * (p.g - p.r) + kLumaB * (p.b - p.r);
  const double lo = std::min({p.r, p.g, p.b});
  const double hi = std::max({p.r, p.g, p.b});
  return std::clamp(y, lo, hi);
}

inline GrayImage to_gray(const RgbImage& v) {
  GrayImage out(v.width(), v.height());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = luma(v[i]);
  return out;
}

inline ImagePair make_pair(GrayImage nir, RgbImage visible, std::string source_id = {}) {
  require_same_shape(nir, visible, "image pair");
  ImagePair pair;
  pair.visible_gray = to_gray(visible);
  pair.nir = std::move(nir);
  pair.visible = std::move(visible);
  pair.source_id = std::move(source_id);
  return pair;
}

inline RgbImage gray_to_rgb(const GrayImage& g) {
  RgbImage out(g.width(), g.height());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = Rgb{g[i], g[i], g[i]};
  return out;
}

inline GrayImage clamp01(GrayImage img) {
  for (double& v : img) v = std::clamp(v, 0.0, 1.0);
  return img;
}

}  // namespace specfuse
