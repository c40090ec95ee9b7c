#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rotinv {

// Derives an independent 64-bit seed from (seed, salt) via splitmix64.
// All randomness in the library flows from explicit seeds through this mixer;
// there is no global RNG state.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt_a, std::uint64_t salt_b);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);

// Squared norm / distance with the three per-axis terms accumulated in sorted
// order: signed axis permutations of the operands then give bit-identical
// values, so index-valued ops (FPS, ball query) are exactly invariant to them.
double squared_norm(const Vec3& a);
double norm(const Vec3& a);
double squared_distance(const Vec3& a, const Vec3& b);
double distance(const Vec3& a, const Vec3& b);

bool all_finite(const Vec3& a);

using Point3 = Vec3;

struct PointCloud {
  std::vector<Point3> points;
  int label = -1;  // -1 = unlabeled

  PointCloud() = default;
  explicit PointCloud(std::vector<Point3> pts, int lbl = -1)
      : points(std::move(pts)), label(lbl) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  const Point3& operator[](std::size_t i) const { return points[i]; }
  Point3& operator[](std::size_t i) { return points[i]; }
};

// Proper rotation, row-major 3x3.
struct RotationMatrix {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static RotationMatrix identity() { return {}; }
  Vec3 apply(const Vec3& p) const {
    return {m[0] * p.x + m[1] * p.y + m[2] * p.z,
            m[3] * p.x + m[4] * p.y + m[5] * p.z,
            m[6] * p.x + m[7] * p.y + m[8] * p.z};
  }
  double determinant() const;
  // max |R^T R - I| over all entries
  double orthonormality_error() const;
};

struct Neighborhood {
  std::size_t center_index = 0;
  std::vector<std::size_t> neighbor_indices;  // exactly K entries, center first
  double radius = 0.0;
};

// Centers the cloud on its centroid and scales it into the unit sphere.
// Scale guard: if the max norm after centering is < 1e-12 (all points
// coincident) the scale is taken as 1.
PointCloud normalize_unit_sphere(const PointCloud& cloud);

// Uniform rotation over SO(3) from a normalized 4-Gaussian quaternion.
RotationMatrix random_rotation_so3(std::uint64_t seed);

// Rotation about the z (gravity) axis.
RotationMatrix azimuthal_rotation(double angle);

// One of the 24 signed-axis-permutation rotations (entries in {-1, 0, 1},
// determinant +1), indexed modulo 24. These act on coordinates exactly, with
// no floating-point rounding.
RotationMatrix signed_permutation_rotation(std::uint64_t index);

PointCloud apply_rotation(const PointCloud& cloud, const RotationMatrix& rot);

// Farthest point sampling. The first selected index is always 0; each
// subsequent pick maximizes the min distance to the already-selected set,
// ties broken by smallest index. Returns n distinct indices in visiting order.
std::vector<std::size_t> farthest_point_sampling(const PointCloud& cloud, std::size_t n);

// For each center: candidates are all points within `radius`, the center
// itself listed first and the rest sorted by (distance, index); the first k
// are kept and short lists are padded by cycling the found candidates.
std::vector<Neighborhood> ball_query(const PointCloud& cloud,
                                     std::span<const std::size_t> center_indices,
                                     double radius, std::size_t k);

// Independent zero-mean Gaussian noise of the given variance per coordinate.
PointCloud add_gaussian_noise(const PointCloud& cloud, double variance, std::uint64_t seed);

// Uniform isotropic scale drawn in [scale_min, scale_max], then per-point
// Gaussian jitter. Outputs are renormalized downstream before descriptor
// extraction.
PointCloud augment_scale_jitter(const PointCloud& cloud, double scale_min, double scale_max,
                                double jitter_sigma, std::uint64_t seed);

// Sub-cloud of the given indices, in order. Label is preserved.
PointCloud gather_points(const PointCloud& cloud, std::span<const std::size_t> indices);

}  // namespace rotinv
