#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rotinv/geometry.hpp"

namespace rotinv {

struct MedianParams {
  std::size_t num_subsets = 10;  // P_s
  std::size_t subset_size = 1;   // K_s, clamped to [1, point count] at use
  std::uint64_t seed = 0;
};

// Exact geometric-median oracle: Weiszfeld iteration started at the centroid,
// with the standard modified step when an iterate collides with a data point.
// If `trace` is non-null every iterate (including the start) is appended.
Point3 weiszfeld_median(std::span<const Point3> points, double tol = 1e-12,
                        int max_iter = 1000, std::vector<Point3>* trace = nullptr);

// Sum of Euclidean distances from x to the points (the Weiszfeld objective).
double distance_sum(std::span<const Point3> points, const Point3& x);

// Divide-and-conquer approximation: draw num_subsets index subsets of
// subset_size without replacement (subsets may overlap), take each subset's
// centroid, threshold-cluster the centroids at tau = median pairwise centroid
// distance, and return the mean of the largest cluster (ties: smallest anchor
// index). Subset draws depend on indices and the seed only, never on
// coordinates, so the result is exactly rotation-equivariant per seed.
Point3 approx_geometric_median(std::span<const Point3> points, const MedianParams& params);

Point3 arithmetic_mean(std::span<const Point3> points);

// Canonical subset size for a k-point neighborhood: round(0.9 k), clamped to [1, k].
std::size_t median_subset_size(std::size_t k);

}  // namespace rotinv
