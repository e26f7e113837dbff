#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include <opencv2/core.hpp>
#include <opencv2/ximgproc/slic.hpp>

#include "specfuse/superpixel.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace specfuse;

TEST(Slic, SingleSeedCoversImage) {
  std::mt19937 rng(1);
  for (auto [w, h] : {std::pair{40, 30}, std::pair{200, 3}, std::pair{1, 1}}) {
    const SuperpixelMap seg = slic_segment(fixtures::random_gray(w, h, rng), {1, 10.0, 10});
    EXPECT_EQ(seg.k, 1);
    for (int l : seg.labels) ASSERT_EQ(l, 0);
  }
}

TEST(Slic, InvalidK) {
  EXPECT_THROW(slic_segment(GrayImage(4, 4), {0, 10.0, 10}), InvalidK);
  EXPECT_THROW(slic_segment(GrayImage(4, 4), {17, 10.0, 10}), InvalidK);
  EXPECT_NO_THROW(slic_segment(GrayImage(4, 4, 0.5), {16, 10.0, 10}));
}

TEST(Slic, UniformImageMatchesReferenceImplementation) {
  const GrayImage img(100, 100, 0.5);
  const SuperpixelMap seg = slic_segment(img, {4, 10.0, 10});
  ASSERT_EQ(seg.k, 4);
  for (std::size_t s : fixtures::region_sizes(seg)) {
    EXPECT_GE(s, 2200u);
    EXPECT_LE(s, 2800u);
  }

  cv::Mat m(100, 100, CV_8UC1, cv::Scalar(128));
  auto ref = cv::ximgproc::createSuperpixelSLIC(m, cv::ximgproc::SLIC, 50, 10.0f);
  ref->iterate(10);
  ref->enforceLabelConnectivity(25);
  cv::Mat labels;
  ref->getLabels(labels);
  ASSERT_EQ(ref->getNumberOfSuperpixels(), 4);
  std::vector<int> ref_sizes(4, 0);
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x) ++ref_sizes[labels.at<int>(y, x)];
  std::vector<std::size_t> ours = fixtures::region_sizes(seg);
  std::sort(ours.begin(), ours.end());
  std::sort(ref_sizes.begin(), ref_sizes.end());
  for (int i = 0; i < 4; ++i) {
    EXPECT_GE(ref_sizes[i], 2200);
    EXPECT_LE(ref_sizes[i], 2800);
    EXPECT_NEAR(static_cast<double>(ours[i]), ref_sizes[i], 300.0);
  }
}

TEST(Slic, PartitionAndConnectivityProperty) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 12; ++trial) {
    const int w = 30 + 13 * trial, h = 20 + 7 * trial;
    const GrayImage img = trial % 2 ? fixtures::random_gray(w, h, rng) : fixtures::smooth_random_gray(w, h, rng);
    for (int k : {4, 25, 100}) {
      const SuperpixelMap seg = slic_segment(img, {k, 10.0, 5});
      ASSERT_TRUE(fixtures::is_partition(seg)) << w << "x" << h << " k=" << k;
      ASSERT_TRUE(fixtures::regions_four_connected(seg)) << w << "x" << h << " k=" << k;
    }
  }
}

TEST(Slic, Deterministic) {
  std::mt19937 rng(3);
  const GrayImage img = fixtures::smooth_random_gray(120, 90, rng);
  const SuperpixelMap a = slic_segment(img, {50, 10.0, 10});
  const SuperpixelMap b = slic_segment(img, {50, 10.0, 10});
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.k, b.k);
}

TEST(Slic, FollowsIntensityBoundaries) {
  // Two flat halves; no region should straddle the step.
  const GrayImage img = fixtures::vertical_step(80, 40);
  const SuperpixelMap seg = slic_segment(img, {8, 10.0, 10});
  std::vector<int> side(seg.k, -1);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 80; ++x) {
      const int s = x < 40 ? 0 : 1;
      int& rec = side[seg.labels(x, y)];
      if (rec < 0) rec = s;
      ASSERT_EQ(rec, s);
    }
  }
}

TEST(Grade, Examples) {
  const GrayImage img(4, 1, std::vector<double>{0.2, 0.4, 0.6, 0.8});
  const std::vector<std::size_t> all{0, 1, 2, 3};
  EXPECT_NEAR(superpixel_grade(img, all), 0.22360679774997896, 1e-15);

  const GrayImage flat(3, 3, 0.7);
  const std::vector<std::size_t> some{0, 4, 8};
  EXPECT_EQ(superpixel_grade(flat, some), 0.0);

  const GrayImage bern(4, 1, std::vector<double>{0, 1, 1, 0});
  EXPECT_EQ(superpixel_grade(bern, all), 0.5);

  const std::vector<std::size_t> one{2};
  EXPECT_EQ(superpixel_grade(img, one), 0.0);
  EXPECT_THROW(superpixel_grade(img, std::span<const std::size_t>{}), EmptyRegion);
}

TEST(GradeMap, Examples) {
  const GrayImage flat(20, 20, 0.3);
  const GradeMap g0 = grade_map(flat, slic_segment(flat, {9, 10.0, 5}));
  for (double v : g0.grades) ASSERT_EQ(v, 0.0);

  const GrayImage cb = fixtures::checkerboard(16, 16, 1);
  const GradeMap g1 = grade_map(cb, slic_segment(cb, {1, 10.0, 5}));
  for (double v : g1.grades) ASSERT_EQ(v, 0.5);

  std::mt19937 rng(4);
  const GrayImage r = fixtures::random_gray(17, 13, rng);
  const GradeMap g2 = grade_map(r, slic_segment(r, {1, 10.0, 5}));
  std::vector<std::size_t> all(r.size());
  std::iota(all.begin(), all.end(), 0);
  const double global = superpixel_grade(r, all);
  for (double v : g2.grades) ASSERT_NEAR(v, global, 1e-15);
}

TEST(GradeMap, DimensionMismatch) {
  const SuperpixelMap seg = slic_segment(GrayImage(8, 8, 0.1), {1, 10.0, 1});
  EXPECT_THROW(grade_map(GrayImage(8, 9), seg), DimensionMismatch);
}

TEST(GradeMap, ConstancyAndBoundProperty) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const GrayImage img = fixtures::random_gray(50, 40, rng);
    const SuperpixelMap seg = slic_segment(img, {30, 10.0, 5});
    const GradeMap g = grade_map(img, seg);
    std::vector<double> first(seg.k, -1.0);
    for (std::size_t p = 0; p < img.size(); ++p) {
      ASSERT_GE(g.grades[p], 0.0);
      ASSERT_LE(g.grades[p], 0.5);
      double& f = first[seg.labels[p]];
      if (f < 0) f = g.grades[p];
      ASSERT_EQ(g.grades[p], f);
    }
  }
}
