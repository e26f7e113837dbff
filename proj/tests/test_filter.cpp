#include <gtest/gtest.h>

#include <random>

#include "specfuse/filter.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace specfuse;

TEST(GaussianKernel, UnitSumAndRadius) {
  const SymmetricKernel k = gaussian_kernel(1.4);
  EXPECT_EQ(k.radius(), 5);
  double s = k.taps[0];
  for (int i = 1; i <= k.radius(); ++i) s += 2 * k.taps[i];
  EXPECT_NEAR(s, 1.0, 1e-15);
  EXPECT_THROW(gaussian_kernel(0.0), InvalidSigma);
  EXPECT_THROW(gaussian_kernel(-1.0), InvalidSigma);
}

TEST(GaussianBlur, MatchesDirectTwoDimensionalConvolution) {
  std::mt19937 rng(5);
  for (double sigma : {0.5, 1.4, 3.0}) {
    const GrayImage img = fixtures::random_gray(23, 14, rng);
    const Plane fast = gaussian_blur(img, sigma);
    const Plane slow = fixtures::brute_gaussian(img, sigma);
    for (std::size_t i = 0; i < img.size(); ++i) ASSERT_NEAR(fast[i], slow[i], 1e-12) << sigma;
  }
}

TEST(GaussianBlur, ConstantsPassThroughExactly) {
  const GrayImage img(13, 7, 0.1);
  EXPECT_EQ(gaussian_blur(img, 2.5), img);
}

TEST(GaussianBlur, SinglePixelIsIdentity) {
  const GrayImage img(1, 1, 0.37);
  EXPECT_EQ(gaussian_blur(img, 4.0), img);
}

TEST(Sobel, HorizontalRamp) {
  GrayImage img(5, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) img(x, y) = 0.1 * x;
  const Gradient g = sobel(img);
  EXPECT_NEAR(g.gx(2, 2), 0.8, 1e-12);  // (1+2+1) * 0.2
  EXPECT_NEAR(g.gy(2, 2), 0.0, 1e-12);
  EXPECT_NEAR(g.gx(0, 2), 0.4, 1e-12);  // replicated border halves the span
}
