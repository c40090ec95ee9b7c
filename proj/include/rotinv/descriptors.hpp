#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rotinv/geometry.hpp"
#include "rotinv/median.hpp"

namespace rotinv {

// Rotation-invariant description of a reference point p relative to the whole
// object: its distance to the origin, its distances to the neighborhood
// center m and support point s, and the cosines of the triangle angles at m
// and s.
struct GlobalDescriptor {
  double dp = 0.0;         // ||p||, in [0, 1] for normalized clouds
  double dpm = 0.0;        // ||p - m||, in [0, r]
  double dsm = 0.0;        // ||s - m||, in [0, 2r]
  double cos_alpha = 1.0;  // angle at m between (p - m) and (s - m)
  double cos_beta = 1.0;   // angle at s between (p - s) and (m - s)
};

// Rotation-invariant description of a neighbor q relative to the reference
// triangle p-m-s: distances from q to m, p, s; cosines of the angles at q on
// the three tetrahedron faces; and the dihedral angle about the p-s axis
// encoded as sin(theta/2), which disambiguates mirrored neighbors.
struct LocalDescriptor {
  double dpm = 0.0;  // ||q - m||, in [0, 2r]
  double dpp = 0.0;  // ||q - p||, in [0, r]
  double dps = 0.0;  // ||q - s||, in [0, 2r]
  double cos_gamma_p = 1.0;  // at q between (p - q) and (s - q)
  double cos_gamma_m = 1.0;  // at q between (m - q) and (p - q)
  double cos_gamma_s = 1.0;  // at q between (s - q) and (m - q)
  double f_theta = 0.0;      // sin(theta/2), in [-1, 1)
};

inline constexpr std::size_t kGlobalComponents = 5;
inline constexpr std::size_t kLocalComponents = 7;
inline constexpr std::size_t kDescriptorWidth = kGlobalComponents + kLocalComponents;

// N x K x 12 block of rotation-invariant network inputs: each reference point
// contributes K rows of [global (5) | local (7)], the global block repeated
// across the K rows.
struct RIInputTensor {
  std::size_t num_centers = 0;
  std::size_t neighbors_per_center = 0;
  std::vector<double> values;  // row-major, num_centers*neighbors_per_center*12

  double at(std::size_t i, std::size_t j, std::size_t c) const {
    return values[(i * neighbors_per_center + j) * kDescriptorWidth + c];
  }
};

// N x 2N pairwise structure matrix: entry (i, 2j) is ||p_i - p_j||, entry
// (i, 2j+1) is the angle in radians between the origin rays to p_i and p_j.
struct RelationMatrix {
  std::size_t num_points = 0;
  std::vector<double> values;  // row-major, num_points x 2*num_points

  double dist(std::size_t i, std::size_t j) const { return values[i * 2 * num_points + 2 * j]; }
  double angle(std::size_t i, std::size_t j) const {
    return values[i * 2 * num_points + 2 * j + 1];
  }
};

enum class CenterMode {
  kGeometricMedian,
  kArithmeticMean,  // noise-sensitivity baseline
};

// Far intersection of the query ball around p with the ray from the origin
// through p: s = p * (1 + r/||p||). Points within 1e-9 of the origin have no
// ray; the fallback (r, 0, 0) is used and a warning is emitted.
Point3 support_point(const Point3& p, double r);

GlobalDescriptor global_descriptor(const Point3& p, const Point3& m, const Point3& s);

// Signed angle in [-pi, pi) for rotating the plane of triangle m-p-s onto the
// plane of triangle q-s-p about the p-s line, right-handed about the axis
// directed p -> s. Degenerate configurations (q or m on the axis) give 0.
double dihedral_angle(const Point3& p, const Point3& s, const Point3& m, const Point3& q);

LocalDescriptor local_descriptor(const Point3& p, const Point3& m, const Point3& s,
                                 const Point3& q);

// Extracts the N x K x 12 input block for the given neighborhoods. The
// neighborhood center m_i is the approximate geometric median (or the
// arithmetic mean, per `mode`) of the K listed neighbor points; the per-center
// median seed is mix_seed(params.seed, center index), so equal seeds give
// exactly matching draws for a cloud and a rotated copy of it.
RIInputTensor build_ri_tensor(const PointCloud& cloud,
                              std::span<const Neighborhood> neighborhoods,
                              const MedianParams& params,
                              CenterMode mode = CenterMode::kGeometricMedian);

RelationMatrix relation_matrix(std::span<const Point3> points);

}  // namespace rotinv
