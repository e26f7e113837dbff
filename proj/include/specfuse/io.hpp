#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "specfuse/errors.hpp"
#include "specfuse/image.hpp"

namespace specfuse {

namespace detail {

inline cv::Mat read_raw(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw FileNotFound("no such file: " + path.string());
  }
  cv::Mat m;
  try {
    m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw DecodeError("cannot decode " + path.string() + ": " + e.what());
  }
  if (m.empty()) throw DecodeError("cannot decode " + path.string());
  if (m.depth() != CV_8U && m.depth() != CV_16U) {
    throw DecodeError("unsupported bit depth in " + path.string() + " (need 8 or 16 bit)");
  }
  if (m.channels() != 1 && m.channels() != 3 && m.channels() != 4) {
    throw DecodeError("unsupported channel count in " + path.string());
  }
  return m;
}

inline double sample_scale(const cv::Mat& m) { return m.depth() == CV_8U ? 255.0 : 65535.0; }

// Channel c of pixel (x,y), in OpenCV's BGR(A) order, normalised to [0,1].
inline double sample(const cv::Mat& m, int x, int y, int c) {
  const int ch = m.channels();
  if (m.depth() == CV_8U) return m.ptr<std::uint8_t>(y)[x * ch + c] / 255.0;
  return m.ptr<std::uint16_t>(y)[x * ch + c] / 65535.0;
}

inline std::uint8_t to_byte(double v) {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

inline void write_png(const std::filesystem::path& path, const cv::Mat& m) {
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), m, {cv::IMWRITE_PNG_COMPRESSION, 6});
  } catch (const cv::Exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write " + path.string());
}

}  // namespace detail

/// Loads a single-band image. Colour files are reduced with to_gray.
inline GrayImage load_gray(const std::filesystem::path& path) {
  const cv::Mat m = detail::read_raw(path);
  GrayImage out(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    for (int x = 0; x < m.cols; ++x) {
      if (m.channels() == 1) {
        out(x, y) = detail::sample(m, x, y, 0);
      } else {
        out(x, y) = luma(Rgb{detail::sample(m, x, y, 2), detail::sample(m, x, y, 1),
                             detail::sample(m, x, y, 0)});
      }
    }
  }
  return out;
}

/// Loads a colour image; single-band files are replicated to three channels and
/// alpha is dropped.
inline RgbImage load_rgb(const std::filesystem::path& path) {
  const cv::Mat m = detail::read_raw(path);
  RgbImage out(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    for (int x = 0; x < m.cols; ++x) {
      if (m.channels() == 1) {
        const double v = detail::sample(m, x, y, 0);
        out(x, y) = Rgb{v, v, v};
      } else {
        out(x, y) = Rgb{detail::sample(m, x, y, 2), detail::sample(m, x, y, 1),
                        detail::sample(m, x, y, 0)};
      }
    }
  }
  return out;
}

// Strips a trailing "_nir" / "_rgb" role suffix from a file stem.
inline std::string pair_stem(const std::filesystem::path& path) {
  std::string stem = path.stem().string();
  for (const char* suffix : {"_nir", "_rgb"}) {
    const std::string s(suffix);
    if (stem.size() > s.size() && stem.compare(stem.size() - s.size(), s.size(), s) == 0) {
      return stem.substr(0, stem.size() - s.size());
    }
  }
  return stem;
}

inline ImagePair load_pair(const std::filesystem::path& nir_path,
                           const std::filesystem::path& rgb_path) {
  GrayImage nir = load_gray(nir_path);
  RgbImage rgb = load_rgb(rgb_path);
  if (!nir.same_shape(rgb)) {
    throw DimensionMismatch("pair " + nir_path.filename().string() + " / " +
                            rgb_path.filename().string() + " differs in size: NIR " +
                            std::to_string(nir.width()) + "x" + std::to_string(nir.height()) +
                            ", RGB " + std::to_string(rgb.width()) + "x" +
                            std::to_string(rgb.height()));
  }
  return make_pair(std::move(nir), std::move(rgb), pair_stem(nir_path));
}

/// 8-bit PNG; values are clamped to [0,1] and rounded half-up.
inline void save_gray(const GrayImage& img, const std::filesystem::path& path) {
  cv::Mat m(img.height(), img.width(), CV_8UC1);
  for (int y = 0; y < img.height(); ++y) {
    auto* dst = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) dst[x] = detail::to_byte(img(x, y));
  }
  detail::write_png(path, m);
}

inline void save_rgb(const RgbImage& img, const std::filesystem::path& path) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* dst = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      const Rgb& p = img(x, y);
      dst[3 * x + 0] = detail::to_byte(p.b);
      dst[3 * x + 1] = detail::to_byte(p.g);
      dst[3 * x + 2] = detail::to_byte(p.r);
    }
  }
  detail::write_png(path, m);
}

}  // namespace specfuse
