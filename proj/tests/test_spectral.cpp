#include <gtest/gtest.h>

#include <random>

#include "specfuse/spectral.hpp"
#include "support/generators.hpp"

using namespace specfuse;

TEST(BandSplit, ConstantImage) {
  const BandSplit b = band_split(GrayImage(9, 7, 0.42), 5.0);
  for (double v : b.low) EXPECT_EQ(v, 0.42);
  for (double v : b.high) EXPECT_EQ(v, 0.0);
}

TEST(BandSplit, Reconstructs) {
  std::mt19937 rng(1);
  const GrayImage img = fixtures::random_gray(31, 17, rng);
  const BandSplit b = band_split(img, 2.0);
  for (std::size_t i = 0; i < img.size(); ++i) ASSERT_NEAR(b.low[i] + b.high[i], img[i], 1e-12);
}

TEST(BandSplit, SinglePixel) {
  const BandSplit b = band_split(GrayImage(1, 1, 0.8), 3.0);
  EXPECT_EQ(b.low(0, 0), 0.8);
  EXPECT_EQ(b.high(0, 0), 0.0);
}

TEST(BandSplit, InvalidSigma) {
  EXPECT_THROW(band_split(GrayImage(3, 3), 0.0), InvalidSigma);
  EXPECT_THROW(band_split(GrayImage(3, 3), -2.0), InvalidSigma);
}

TEST(SpectralFuse, EqualInputs) {
  std::mt19937 rng(2);
  const GrayImage g = fixtures::random_gray(20, 20, rng);
  const ImagePair pair = make_pair(g, gray_to_rgb(g));
  for (auto rule : {HighPassRule::AbsMax, HighPassRule::LiteralMax}) {
    const GrayImage f = spectral_fuse(pair, {0.3, 2.0, rule});
    for (std::size_t i = 0; i < g.size(); ++i) ASSERT_NEAR(f[i], g[i], 1e-12);
  }
}

TEST(SpectralFuse, ConstantInputs) {
  const ImagePair pair = make_pair(GrayImage(8, 8, 0.9), RgbImage(8, 8, Rgb{0.1, 0.1, 0.1}));
  const GrayImage f = spectral_fuse(pair, {0.25, 5.0, HighPassRule::AbsMax});
  for (double v : f) EXPECT_NEAR(v, 0.25 * 0.9 + 0.75 * 0.1, 1e-15);
}

TEST(SpectralFuse, ConstantNirTakesVisibleDetail) {
  std::mt19937 rng(3);
  const GrayImage tex = fixtures::smooth_random_gray(24, 24, rng);
  const ImagePair pair = make_pair(GrayImage(24, 24, 0.5), gray_to_rgb(tex));
  const double alpha = 0.4;
  const BandSplit b2 = band_split(pair.visible_gray, 5.0);
  const Plane f = spectral_fuse_unclamped(pair.nir, pair.visible_gray, {alpha, 5.0, HighPassRule::AbsMax});
  for (std::size_t i = 0; i < f.size(); ++i) {
    ASSERT_NEAR(f[i], alpha * 0.5 + (1 - alpha) * b2.low[i] + b2.high[i], 1e-15);
  }
}

TEST(SpectralFuse, HighPassRuleProperties) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage a = fixtures::random_gray(16, 12, rng), b = fixtures::random_gray(16, 12, rng);
    const BandSplit ba = band_split(a, 1.5), bb = band_split(b, 1.5);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double h1 = ba.high[i], h2 = bb.high[i];
      const double abs_sel = select_high(h1, h2, HighPassRule::AbsMax);
      ASSERT_EQ(std::abs(abs_sel), std::max(std::abs(h1), std::abs(h2)));
      ASSERT_TRUE(abs_sel == h1 || abs_sel == h2);
      const double lit = select_high(h1, h2, HighPassRule::LiteralMax);
      ASSERT_GE(lit, h1);
      ASSERT_GE(lit, h2);
    }
  }
}

TEST(SpectralFuse, OutputClamped) {
  std::mt19937 rng(5);
  const ImagePair pair = make_pair(fixtures::random_gray(16, 16, rng), fixtures::random_rgb(16, 16, rng));
  for (double v : spectral_fuse(pair, {0.5, 3.0, HighPassRule::LiteralMax})) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(HighPassRule, Parse) {
  EXPECT_EQ(parse_hp_rule("abs"), HighPassRule::AbsMax);
  EXPECT_EQ(parse_hp_rule("literal"), HighPassRule::LiteralMax);
  EXPECT_THROW(parse_hp_rule("max"), ConfigError);
}
