#include "rotinv/median.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace rotinv {

namespace {

// Magnitude-sorted summation: any two equal value multisets sum to the same
// bits, and a sign flip of the whole multiset exactly negates the sum. The
// subset centroids below need this so that duplicated subsets (common when a
// padded neighborhood repeats points) collapse to exactly equal centroids
// instead of almost-equal ones, which would make the cluster threshold test
// flip on last-ulp perturbations of the input.
double stable_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end(), [](double a, double b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    return ma < mb || (ma == mb && a < b);
  });
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum;
}

Point3 stable_mean(std::span<const Point3> points) {
  const auto n = static_cast<double>(points.size());
  std::vector<double> coords(points.size());
  Point3 out;
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < points.size(); ++i)
      coords[i] = c == 0 ? points[i].x : (c == 1 ? points[i].y : points[i].z);
    const double mean = stable_sum(coords) / n;
    (c == 0 ? out.x : (c == 1 ? out.y : out.z)) = mean;
  }
  return out;
}

}  // namespace

double distance_sum(std::span<const Point3> points, const Point3& x) {
  double sum = 0.0;
  for (const Point3& p : points) sum += distance(p, x);
  return sum;
}

Point3 arithmetic_mean(std::span<const Point3> points) {
  if (points.empty()) throw std::invalid_argument("arithmetic_mean: empty input");
  Vec3 acc{};
  for (const Point3& p : points) acc += p;
  return acc / static_cast<double>(points.size());
}

std::size_t median_subset_size(std::size_t k) {
  if (k == 0) return 1;
  const auto rounded = static_cast<std::size_t>(std::llround(0.9 * static_cast<double>(k)));
  return std::clamp<std::size_t>(rounded, 1, k);
}

Point3 weiszfeld_median(std::span<const Point3> points, double tol, int max_iter,
                        std::vector<Point3>* trace) {
  if (points.empty()) throw std::invalid_argument("weiszfeld_median: empty input");
  constexpr double kCollision = 1e-12;

  Point3 x = arithmetic_mean(points);
  if (trace) trace->push_back(x);

  for (int it = 0; it < max_iter; ++it) {
    // Weighted mean over points not collided with x, plus the pull vector r
    // of their unit directions (Vardi-Zhang modified iteration).
    Vec3 weighted{};
    Vec3 pull{};
    double weight_sum = 0.0;
    std::size_t collided = 0;
    for (const Point3& p : points) {
      const double d = distance(p, x);
      if (d < kCollision) {
        ++collided;
        continue;
      }
      weighted += p / d;
      pull += (p - x) / d;
      weight_sum += 1.0 / d;
    }
    if (collided == points.size()) break;  // all points coincide with x

    const Vec3 plain = weighted / weight_sum;
    Point3 next;
    if (collided == 0) {
      next = plain;
    } else {
      const double r = norm(pull);
      if (r <= static_cast<double>(collided)) break;  // x is the minimizer
      const double towards = static_cast<double>(collided) / r;
      next = plain * (1.0 - towards) + x * towards;
    }
    const double step = distance(next, x);
    x = next;
    if (trace) trace->push_back(x);
    if (step < tol) break;
  }
  return x;
}

Point3 approx_geometric_median(std::span<const Point3> points, const MedianParams& params) {
  if (points.empty()) throw std::invalid_argument("approx_geometric_median: empty input");
  if (params.num_subsets < 1)
    throw std::invalid_argument("approx_geometric_median: num_subsets must be >= 1");
  const std::size_t n = points.size();
  const std::size_t subset_size = std::clamp<std::size_t>(params.subset_size, 1, n);

  std::mt19937_64 rng(params.seed);
  std::vector<std::size_t> indices(n);
  std::vector<Point3> centroids;
  centroids.reserve(params.num_subsets);
  for (std::size_t s = 0; s < params.num_subsets; ++s) {
    // partial Fisher-Yates: subset without replacement, subsets independent
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    std::vector<Point3> subset(subset_size);
    for (std::size_t j = 0; j < subset_size; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, n - 1);
      std::swap(indices[j], indices[pick(rng)]);
      subset[j] = points[indices[j]];
    }
    centroids.push_back(stable_mean(subset));
  }

  const std::size_t m = centroids.size();
  if (m == 1) return centroids[0];

  std::vector<double> pairwise;
  pairwise.reserve(m * (m - 1) / 2);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) pairwise.push_back(distance(centroids[a], centroids[b]));
  std::nth_element(pairwise.begin(), pairwise.begin() + (pairwise.size() - 1) / 2, pairwise.end());
  const double tau = pairwise[(pairwise.size() - 1) / 2];  // lower median

  std::size_t best_anchor = 0;
  std::size_t best_count = 0;
  for (std::size_t a = 0; a < m; ++a) {
    std::size_t count = 0;
    for (std::size_t b = 0; b < m; ++b)
      if (distance(centroids[a], centroids[b]) <= tau) ++count;
    if (count > best_count) {
      best_count = count;
      best_anchor = a;
    }
  }

  std::vector<Point3> cluster;
  cluster.reserve(best_count);
  for (std::size_t b = 0; b < m; ++b)
    if (distance(centroids[best_anchor], centroids[b]) <= tau) cluster.push_back(centroids[b]);
  return stable_mean(cluster);
}

}  // namespace rotinv
