#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rotinv/geometry.hpp"
#include "rotinv/median.hpp"

using namespace rotinv;

namespace {

std::vector<Point3> gaussian_blob(const Point3& center, double sigma, std::size_t n,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  std::vector<Point3> points;
  for (std::size_t i = 0; i < n; ++i)
    points.push_back({center.x + gauss(rng), center.y + gauss(rng), center.z + gauss(rng)});
  return points;
}

// 28 points around `center` plus 4 far outliers thrown to one side, so the
// arithmetic mean shifts by about 4/32 * 5 = 0.6; the robustness fixture.
std::vector<Point3> outlier_case(std::uint64_t seed, std::vector<Point3>* clean_out) {
  const Point3 center{0.2, -0.1, 0.3};
  std::vector<Point3> clean = gaussian_blob(center, 0.05, 28, seed);
  if (clean_out) *clean_out = clean;
  std::vector<Point3> all = clean;
  const Vec3 dirs[4] = {{1, 0, 0}, {0.9, 0.3, 0}, {0.9, 0, -0.3}, {0.85, -0.2, 0.2}};
  for (const Vec3& d : dirs) all.push_back(center + (d / norm(d)) * 5.0);
  return all;
}

}  // namespace

TEST_CASE("arithmetic_mean basics") {
  CHECK(distance(arithmetic_mean(std::vector<Point3>{{0, 0, 0}, {1, 0, 0}}), {0.5, 0, 0}) == 0.0);
  CHECK(distance(arithmetic_mean(std::vector<Point3>{{0.3, -0.2, 0.9}}), {0.3, -0.2, 0.9}) == 0.0);
  CHECK_THROWS(arithmetic_mean(std::vector<Point3>{}));

  std::vector<Point3> pts = {{1, 2, 3}, {-1, 0, 1}, {0.5, 0.5, 0.5}};
  const Point3 a = arithmetic_mean(pts);
  std::swap(pts[0], pts[2]);
  const Point3 b = arithmetic_mean(pts);
  CHECK(distance(a, b) < 1e-15);
}

TEST_CASE("median_subset_size rounds 0.9k and clamps") {
  CHECK(median_subset_size(0) == 1);
  CHECK(median_subset_size(1) == 1);
  CHECK(median_subset_size(2) == 2);   // round(1.8)
  CHECK(median_subset_size(3) == 3);   // round(2.7)
  CHECK(median_subset_size(6) == 5);   // round(5.4)
  CHECK(median_subset_size(10) == 9);
  CHECK(median_subset_size(16) == 14); // round(14.4)
  CHECK(median_subset_size(32) == 29);
}

TEST_CASE("weiszfeld_median picks the middle of three collinear points") {
  const std::vector<Point3> pts = {{0, 0, 0}, {1, 0, 0}, {0.2, 0, 0}};
  const Point3 med = weiszfeld_median(pts);
  CHECK(distance(med, {0.2, 0, 0}) < 1e-9);
}

TEST_CASE("weiszfeld_median of identical points is that point") {
  const std::vector<Point3> pts(5, Point3{0.4, 0.4, -0.1});
  CHECK(distance(weiszfeld_median(pts), {0.4, 0.4, -0.1}) < 1e-12);
}

TEST_CASE("weiszfeld_median finds the center of a regular tetrahedron") {
  const Point3 c{0.1, 0.2, 0.3};
  const double s = 0.5;
  const std::vector<Point3> pts = {
      c + Vec3{s, s, s}, c + Vec3{s, -s, -s}, c + Vec3{-s, s, -s}, c + Vec3{-s, -s, s}};
  CHECK(distance(weiszfeld_median(pts), c) < 1e-9);
}

TEST_CASE("weiszfeld_median decreases the distance-sum objective monotonically") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::vector<Point3> pts = gaussian_blob({0, 0, 0}, 0.3, 24, seed);
    std::vector<Point3> trace;
    weiszfeld_median(pts, 1e-12, 200, &trace);
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i)
      CHECK(distance_sum(pts, trace[i]) <= distance_sum(pts, trace[i - 1]) + 1e-12);
  }
}

TEST_CASE("weiszfeld_median handles a collision with a data point") {
  // median of this star is the repeated hub point
  const std::vector<Point3> pts = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0},
                                   {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  CHECK(distance(weiszfeld_median(pts), {0, 0, 0}) < 1e-9);
  CHECK_THROWS(weiszfeld_median(std::vector<Point3>{}));
}

TEST_CASE("approx_geometric_median of identical points is that point") {
  const std::vector<Point3> pts(12, Point3{-0.2, 0.6, 0.1});
  MedianParams params;
  params.num_subsets = 10;
  params.subset_size = median_subset_size(pts.size());
  for (std::uint64_t seed : {0ULL, 3ULL, 19ULL}) {
    params.seed = seed;
    CHECK(distance(approx_geometric_median(pts, params), {-0.2, 0.6, 0.1}) < 1e-12);
  }
}

TEST_CASE("approx_geometric_median tracks Weiszfeld on clean blobs") {
  MedianParams params;
  params.num_subsets = 10;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<Point3> pts = gaussian_blob({0.1, 0.0, -0.2}, 0.05, 32, seed);
    params.subset_size = median_subset_size(pts.size());
    params.seed = mix_seed(seed, 1);
    const Point3 approx = approx_geometric_median(pts, params);
    const Point3 exact = weiszfeld_median(pts);
    CHECK(distance(approx, exact) < 0.02);
  }
}

TEST_CASE("approx_geometric_median shrugs off far outliers where the mean cannot") {
  // Single-point subsets make 28/32 of the draws outlier-free, so the
  // majority of pairwise centroid distances stay inside the clean blob and
  // the distance-median threshold isolates it.
  MedianParams params;
  params.num_subsets = 50;
  params.subset_size = 1;
  params.seed = 7;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<Point3> clean;
    const std::vector<Point3> pts = outlier_case(seed, &clean);
    const Point3 reference = weiszfeld_median(clean);
    const Point3 approx = approx_geometric_median(pts, params);
    const Point3 mean = arithmetic_mean(pts);
    CHECK(distance(approx, reference) < 0.05);
    CHECK(distance(mean, reference) > 0.5);
    CHECK(distance(approx, reference) < distance(mean, reference));
  }
}

TEST_CASE("approx_geometric_median is rotation equivariant") {
  MedianParams params;
  params.num_subsets = 10;
  params.subset_size = median_subset_size(24);
  params.seed = 11;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const std::vector<Point3> pts = gaussian_blob({0.3, 0.1, 0.0}, 0.2, 24, seed);
    const RotationMatrix rot = random_rotation_so3(mix_seed(seed, 2));
    std::vector<Point3> rotated;
    for (const Point3& p : pts) rotated.push_back(rot.apply(p));
    const Point3 direct = rot.apply(approx_geometric_median(pts, params));
    const Point3 roundabout = approx_geometric_median(rotated, params);
    CHECK(distance(direct, roundabout) < 1e-9);
  }
}

TEST_CASE("approx_geometric_median stays inside the bounding box of its input") {
  MedianParams params;
  params.num_subsets = 10;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::vector<Point3> pts = gaussian_blob({0, 0.2, -0.4}, 0.3, 20, mix_seed(seed, 5));
    params.subset_size = median_subset_size(pts.size());
    params.seed = seed;
    const Point3 med = approx_geometric_median(pts, params);
    double lo[3] = {1e9, 1e9, 1e9}, hi[3] = {-1e9, -1e9, -1e9};
    for (const Point3& p : pts) {
      lo[0] = std::min(lo[0], p.x); hi[0] = std::max(hi[0], p.x);
      lo[1] = std::min(lo[1], p.y); hi[1] = std::max(hi[1], p.y);
      lo[2] = std::min(lo[2], p.z); hi[2] = std::max(hi[2], p.z);
    }
    CHECK(med.x >= lo[0]); CHECK(med.x <= hi[0]);
    CHECK(med.y >= lo[1]); CHECK(med.y <= hi[1]);
    CHECK(med.z >= lo[2]); CHECK(med.z <= hi[2]);
  }
}

TEST_CASE("approx_geometric_median validates parameters") {
  const std::vector<Point3> pts = {{0, 0, 0}, {1, 1, 1}};
  MedianParams params;
  params.num_subsets = 0;
  CHECK_THROWS(approx_geometric_median(pts, params));
  params.num_subsets = 4;
  CHECK_THROWS(approx_geometric_median(std::vector<Point3>{}, params));
}

TEST_CASE("approx_geometric_median is deterministic per seed") {
  const std::vector<Point3> pts = gaussian_blob({0, 0, 0}, 0.4, 30, 88);
  MedianParams params;
  params.num_subsets = 10;
  params.subset_size = 27;
  params.seed = 123;
  const Point3 a = approx_geometric_median(pts, params);
  const Point3 b = approx_geometric_median(pts, params);
  CHECK(distance(a, b) == 0.0);
  params.seed = 124;
  const Point3 c = approx_geometric_median(pts, params);
  CHECK(distance(a, c) > 0.0);  // different subsets move the estimate a little
}
