#include <doctest.h>

#include <cmath>
#include <random>

#include "edgeden/cluster_smooth.hpp"
#include "edgeden/errors.hpp"
#include "oracles.hpp"

using namespace edgeden;

TEST_CASE("variance_ratio") {
  const std::vector<double> two_level{0, 0, 0, 10, 10, 10};
  CHECK(std::isinf(variance_ratio(two_level, 5.0)));
  CHECK(std::isinf(variance_ratio(std::vector<double>{0, 10}, 5.0)));
  CHECK(variance_ratio(std::vector<double>{1, 2, 8, 9}, 5.0) == doctest::Approx(49.0));
  CHECK_THROWS_AS(variance_ratio(two_level, 20.0), InvalidArgument);
  CHECK_THROWS_AS(variance_ratio(two_level, -1.0), InvalidArgument);

  std::mt19937 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(15);
    for (double& x : v) x = g(rng);
    CHECK(variance_ratio(v, 0.0 + 1e-9 * trial) == doctest::Approx(oracle::ratio(v, 1e-9 * trial)).epsilon(1e-12));
  }
}

TEST_CASE("optimal_threshold") {
  SUBCASE("all equal is degenerate") {
    const ClusterSplit s = optimal_threshold(std::vector<double>{5, 5, 5, 5});
    CHECK(s.degenerate());
    CHECK(s.members_low.size() == 4);
    CHECK(s.t_value == 0.0);
    CHECK(s.mean_low == 5.0);
  }
  SUBCASE("two levels") {
    const ClusterSplit s = optimal_threshold(std::vector<double>{0, 10, 0, 10});
    CHECK(s.threshold == 5.0);
    CHECK(std::isinf(s.t_value));
    CHECK(s.members_low == std::vector<std::size_t>{0, 2});
    CHECK(s.members_high == std::vector<std::size_t>{1, 3});
    CHECK(s.mean_low == 0.0);
    CHECK(s.mean_high == 10.0);
  }
  SUBCASE("single value") {
    CHECK(optimal_threshold(std::vector<double>{3.0}).degenerate());
    CHECK_THROWS_AS(optimal_threshold(std::vector<double>{}), InvalidArgument);
  }
  SUBCASE("symmetric ties go to the smaller threshold") {
    const ClusterSplit s = optimal_threshold(std::vector<double>{0, 1, 2, 3});
    // Cuts after 0 and after 2 mirror each other; the middle cut wins outright.
    CHECK(s.threshold == 1.5);
  }
  SUBCASE("matches exhaustive search") {
    std::mt19937 rng(12);
    std::uniform_int_distribution<int> size(2, 40), level(0, 30);
    std::normal_distribution<double> g(100.0, 25.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> v(size(rng));
      // Mix integer-valued data (ties) with continuous data.
      for (double& x : v) x = trial % 2 ? double(level(rng)) : g(rng);
      const ClusterSplit s = optimal_threshold(v);
      const auto want = oracle::best_threshold(v);
      REQUIRE(s.degenerate() == !want.has_value());
      if (!want) continue;
      CHECK(s.threshold == *want);
      // Members follow the threshold rule.
      for (std::size_t i : s.members_low) CHECK(v[i] <= s.threshold);
      for (std::size_t i : s.members_high) CHECK(v[i] > s.threshold);
      CHECK(s.members_low.size() + s.members_high.size() == v.size());
      CHECK_FALSE(s.members_high.empty());
      const double t = variance_ratio(v, s.threshold);
      if (std::isinf(t)) CHECK(std::isinf(s.t_value));
      else CHECK(s.t_value == doctest::Approx(t).epsilon(1e-10));
    }
  }
}

TEST_CASE("patch_weight") {
  ImageGrid img(10, 10);
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 10; ++c) img(r, c) = c < 5 ? 10.0 : 10.0 + 4.0;
  ClusterParams params;
  params.sigma_hat = 4.0;
  CHECK(patch_weight(img, {5, 5}, {5, 5}, params) == 1.0);
  // Patches at columns 1 and 8 differ by 4 on all 9 offsets.
  CHECK(patch_weight(img, {4, 8}, {4, 1}, params) == doctest::Approx(std::exp(-0.5)));
  params.b_n = 2.0;
  CHECK(patch_weight(img, {4, 8}, {4, 1}, params) == doctest::Approx(std::exp(-0.25)));
  params.sigma_hat = 0.0;
  CHECK(patch_weight(img, {4, 8}, {4, 1}, params) == 1.0);
  // Symmetric in its pixel arguments, including clipped corner patches.
  params.sigma_hat = 3.0;
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0, 50);
  for (double& v : img.values()) v = u(rng);
  for (int i = 0; i < 20; ++i) {
    const Pixel a{i % 10, (3 * i) % 10}, b{(7 * i) % 10, (i / 2) % 10};
    const double w = patch_weight(img, a, b, params);
    CHECK(w == doctest::Approx(patch_weight(img, b, a, params)));
    CHECK(w > 0.0);
    CHECK(w <= 1.0);
  }
}

TEST_CASE("disk_neighborhood") {
  const ImageGrid img(20, 20, 0.0);
  CHECK(disk_neighborhood(img, {10, 10}, 1.0).size() == 5);
  CHECK(disk_neighborhood(img, {10, 10}, 3.0).size() == 29);
  CHECK(disk_neighborhood(img, {0, 0}, 3.0).size() == 11);
  const auto hood = disk_neighborhood(img, {10, 10}, 2.0);
  CHECK(std::is_sorted(hood.begin(), hood.end()));
}

TEST_CASE("cluster_smooth_pixel") {
  ClusterParams params;
  params.h_n = 3.0;
  params.sigma_hat = 5.0;
  SUBCASE("constant image") {
    const ImageGrid img(16, 16, 77.0);
    for (int r = 0; r < 16; r += 5)
      for (int c = 0; c < 16; c += 5) CHECK(cluster_smooth_pixel(img, {r, c}, params) == 77.0);
  }
  SUBCASE("noiseless step is preserved exactly") {
    ImageGrid img(16, 16);
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c) img(r, c) = c < 8 ? 100.0 : 180.0;
    CHECK(cluster_smooth_pixel(img, {5, 8}, params) == 180.0);
    CHECK(cluster_smooth_pixel(img, {5, 7}, params) == 100.0);
  }
  SUBCASE("out of range pixel") {
    const ImageGrid img(4, 4, 1.0);
    CHECK_THROWS_AS(cluster_smooth_pixel(img, {4, 0}, params), InvalidArgument);
  }
}

TEST_CASE("cluster estimate lies within the neighborhood range") {
  std::mt19937 rng(31);
  std::normal_distribution<double> g(100.0, 30.0);
  ImageGrid img(24, 24);
  for (double& v : img.values()) v = g(rng);
  ClusterParams params;
  params.sigma_hat = 30.0;
  std::uniform_int_distribution<int> coord(0, 23);
  for (int trial = 0; trial < 1000; ++trial) {
    const Pixel p{coord(rng), coord(rng)};
    params.h_n = 1.0 + (trial % 5);
    double lo = 1e300, hi = -1e300;
    for (Pixel q : disk_neighborhood(img, p, params.h_n)) {
      lo = std::min(lo, img[q]);
      hi = std::max(hi, img[q]);
    }
    const double v = cluster_smooth_pixel(img, p, params);
    CHECK(v >= lo);
    CHECK(v <= hi);
  }
}

TEST_CASE("cluster estimate commutes with intensity shifts") {
  std::mt19937 rng(32);
  std::uniform_real_distribution<double> u(0.0, 200.0);
  ImageGrid img(16, 16);
  for (double& v : img.values()) v = u(rng);
  ImageGrid shifted = img;
  for (double& v : shifted.values()) v += 37.0;
  ClusterParams params;
  params.sigma_hat = 20.0;
  for (int r = 0; r < 16; r += 3)
    for (int c = 0; c < 16; c += 3)
      CHECK(cluster_smooth_pixel(shifted, {r, c}, params) ==
            doctest::Approx(cluster_smooth_pixel(img, {r, c}, params) + 37.0).epsilon(1e-12));
}

TEST_CASE("ClusterParams validation") {
  ClusterParams p;
  CHECK_NOTHROW(p.validate());
  p.h_n = 0.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = {};
  p.patch_radius = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = {};
  p.b_n = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = {};
  p.sigma_hat = -1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}
