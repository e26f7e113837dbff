#include <gtest/gtest.h>

#include <random>

#include "specfuse/region_fusion.hpp"
#include "support/generators.hpp"

using namespace specfuse;

namespace {

GradeMap random_grades(int w, int h, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 0.5);
  GradeMap g{Plane(w, h)};
  for (double& v : g.grades) v = u(rng);
  return g;
}

}  // namespace

TEST(Defaults, LevelsAndSigma) {
  EXPECT_EQ(default_levels(1024, 680), 6);
  EXPECT_EQ(default_levels(16, 16), 1);
  EXPECT_EQ(default_levels(3, 200), 1);
  EXPECT_EQ(default_levels(100000, 100000), 8);
  EXPECT_DOUBLE_EQ(default_mask_sigma(1024, 680), 16.0);
}

TEST(Logistic, SymmetryAndMonotone) {
  double prev = 0.0;
  for (double x = -30.0; x <= 30.0; x += 0.37) {
    EXPECT_NEAR(logistic(-x), 1.0 - logistic(x), 1e-15);
    EXPECT_GE(logistic(x), prev);
    prev = logistic(x);
  }
  EXPECT_EQ(logistic(0.0), 0.5);
}

TEST(FusionMask, EqualGradesGiveHalf) {
  std::mt19937 rng(1);
  const GradeMap g = random_grades(20, 15, rng);
  const FusionMask m = fusion_mask(g, g, {8.0, 2.0, true});
  for (double v : m.weights) ASSERT_EQ(v, 0.5);
}

TEST(FusionMask, TwoRegionsSaturateAfterRescale) {
  // Left half: NIR grade higher; right half: visible grade higher.
  GradeMap g1{Plane(64, 32)}, g2{Plane(64, 32)};
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 64; ++x) {
      g1.grades(x, y) = x < 32 ? 0.4 : 0.1;
      g2.grades(x, y) = x < 32 ? 0.1 : 0.4;
    }
  }
  const Plane raw = raw_mask(g1, g2, 8.0);
  EXPECT_NEAR(raw(0, 0), logistic(8.0), 1e-15);
  EXPECT_NEAR(raw(63, 0), logistic(-8.0), 1e-15);

  const FusionMask m = fusion_mask(g1, g2, {8.0, 1.0, true});
  // Far from the seam the smoothing sees a constant field.
  EXPECT_EQ(m.weights(5, 10), 1.0);
  EXPECT_EQ(m.weights(58, 10), 0.0);
  EXPECT_GT(m.weights(31, 10), 0.5);
  EXPECT_LT(m.weights(32, 10), 0.5);
  EXPECT_GT(m.weights(31, 10), m.weights(32, 10));
}

TEST(FusionMask, RawMonotoneInGradeDifference) {
  GradeMap g1{Plane(11, 1)}, g2{Plane(11, 1, 0.25)};
  for (int x = 0; x < 11; ++x) g1.grades(x, 0) = 0.05 * x;
  const Plane raw = raw_mask(g1, g2, 8.0);
  for (int x = 1; x < 11; ++x) EXPECT_GE(raw(x, 0), raw(x - 1, 0));
}

TEST(FusionMask, RangeAndSwapProperty) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const GradeMap a = random_grades(24, 18, rng), b = random_grades(24, 18, rng);
    const FusionMask m = fusion_mask(a, b, {1.0 + trial, 0.5 + 0.1 * trial, trial % 2 == 0});
    for (double v : m.weights) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
    const Plane ab = raw_mask(a, b, 8.0), ba = raw_mask(b, a, 8.0);
    for (std::size_t i = 0; i < ab.size(); ++i) ASSERT_NEAR(ba[i], 1.0 - ab[i], 1e-12);
  }
}

TEST(FusionMask, Errors) {
  std::mt19937 rng(3);
  const GradeMap a = random_grades(4, 4, rng), b = random_grades(4, 5, rng);
  EXPECT_THROW(fusion_mask(a, b), DimensionMismatch);
  EXPECT_THROW(fusion_mask(a, a, {0.0, 1.0, true}), ConfigError);
  EXPECT_THROW(fusion_mask(a, a, {8.0, 0.0, true}), InvalidSigma);
}

TEST(MaskedFuseFlat, Examples) {
  std::mt19937 rng(4);
  const GrayImage a = fixtures::random_gray(9, 9, rng), b = fixtures::random_gray(9, 9, rng);
  EXPECT_EQ(masked_fuse_flat(a, b, FusionMask{Plane(9, 9, 1.0)}), a);
  EXPECT_EQ(masked_fuse_flat(a, b, FusionMask{Plane(9, 9, 0.0)}), b);
  const GrayImage mid = masked_fuse_flat(GrayImage(3, 3, 0.2), GrayImage(3, 3, 0.6), FusionMask{Plane(3, 3, 0.5)});
  for (double v : mid) EXPECT_NEAR(v, 0.4, 1e-15);
}

TEST(MaskedFuseFlat, BoundsProperty) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage a = fixtures::random_gray(10, 10, rng), b = fixtures::random_gray(10, 10, rng);
    const FusionMask m{fixtures::random_gray(10, 10, rng)};
    const GrayImage f = masked_fuse_flat(a, b, m);
    for (std::size_t i = 0; i < f.size(); ++i) {
      ASSERT_GE(f[i], std::min(a[i], b[i]) - 1e-15);
      ASSERT_LE(f[i], std::max(a[i], b[i]) + 1e-15);
    }
  }
}

TEST(MaskedFusePyramid, Examples) {
  std::mt19937 rng(6);
  const GrayImage a = fixtures::random_gray(50, 37, rng), b = fixtures::random_gray(50, 37, rng);
  const FusionMask random_mask{fixtures::random_gray(50, 37, rng)};

  const GrayImage same = masked_fuse_pyramid(a, a, random_mask, 3);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(same[i], a[i], 1e-6);

  const GrayImage ones = masked_fuse_pyramid(a, b, FusionMask{Plane(50, 37, 1.0)}, 3);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(ones[i], a[i], 1e-6);

  for (double c : {0.0, 0.3, 0.77}) {
    const FusionMask m{Plane(50, 37, c)};
    const GrayImage p = masked_fuse_pyramid(a, b, m, 4);
    const GrayImage f = masked_fuse_flat(a, b, m);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(p[i], f[i], 1e-6);
  }
  EXPECT_THROW(masked_fuse_pyramid(a, b, random_mask, 9), TooManyLevels);
}

TEST(RegionFuse, EqualAchromaticPairIsFixedPoint) {
  std::mt19937 rng(7);
  const GrayImage g = fixtures::smooth_random_gray(96, 64, rng);
  const ImagePair pair = make_pair(g, gray_to_rgb(g));
  const RegionFusion r = region_fuse(pair);
  for (double v : r.mask.weights) ASSERT_EQ(v, 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    ASSERT_NEAR(r.fused[i].r, g[i], 1e-9);
    ASSERT_NEAR(r.fused[i].g, g[i], 1e-9);
    ASSERT_NEAR(r.fused[i].b, g[i], 1e-9);
  }
}

TEST(RegionFuse, TexturedNirRegionGetsNirWeight) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GrayImage nir(128, 96), vis(128, 96);
  for (int y = 0; y < 96; ++y) {
    for (int x = 0; x < 128; ++x) {
      const bool left = x < 64;
      nir(x, y) = left ? 0.2 + 0.6 * u(rng) : 0.5;
      vis(x, y) = left ? 0.45 : 0.2 + 0.6 * u(rng);
    }
  }
  const ImagePair pair = make_pair(nir, gray_to_rgb(vis));
  RegionParams params;
  params.slic.k_target = 48;
  const RegionFusion r = region_fuse(pair, params);
  for (int y = 16; y < 80; ++y) {
    for (int x = 8; x < 40; ++x) ASSERT_GT(r.mask.weights(x, y), 0.5) << x << "," << y;
    for (int x = 88; x < 120; ++x) ASSERT_LT(r.mask.weights(x, y), 0.5) << x << "," << y;
  }
}

TEST(RegionFuse, ConstantInputsGiveMidpoint) {
  const ImagePair pair = make_pair(GrayImage(40, 40, 0.8), RgbImage(40, 40, Rgb{0.2, 0.4, 0.6}));
  const RegionFusion r = region_fuse(pair);
  for (double v : r.mask.weights) ASSERT_EQ(v, 0.5);
  const double g = pair.visible_gray[0];
  const double fused = 0.5 * 0.8 + 0.5 * g;
  for (double v : r.fused_gray) ASSERT_NEAR(v, fused, 1e-12);
  EXPECT_NEAR(r.fused(3, 3).r, 0.2 * fused / g, 1e-12);
  EXPECT_NEAR(r.fused(3, 3).b, std::min(1.0, 0.6 * fused / g), 1e-12);
}

TEST(RegionFuse, SharedSegmentationAndDeterminism) {
  std::mt19937 rng(9);
  const ImagePair pair = make_pair(fixtures::smooth_random_gray(80, 60, rng), fixtures::random_rgb(80, 60, rng));
  RegionParams params;
  params.shared_segmentation = true;
  params.slic.k_target = 30;
  const RegionFusion a = region_fuse(pair, params), b = region_fuse(pair, params);
  EXPECT_EQ(a.fused, b.fused);
  EXPECT_EQ(a.mask.weights, b.mask.weights);
}
