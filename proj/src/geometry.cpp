#include "rotinv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace rotinv {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(splitmix64(seed) ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt_a, std::uint64_t salt_b) {
  return mix_seed(mix_seed(seed, salt_a), salt_b);
}

// Summed in sorted order so the result does not depend on which axis holds
// which coordinate; signed-axis permutations of both operands then give
// bit-identical dot products (the three products are preserved exactly).
double dot(const Vec3& a, const Vec3& b) {
  double t0 = a.x * b.x;
  double t1 = a.y * b.y;
  double t2 = a.z * b.z;
  if (t0 > t1) std::swap(t0, t1);
  if (t1 > t2) std::swap(t1, t2);
  if (t0 > t1) std::swap(t0, t1);
  return (t0 + t1) + t2;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double squared_norm(const Vec3& a) {
  double t0 = a.x * a.x;
  double t1 = a.y * a.y;
  double t2 = a.z * a.z;
  if (t0 > t1) std::swap(t0, t1);
  if (t1 > t2) std::swap(t1, t2);
  if (t0 > t1) std::swap(t0, t1);
  return (t0 + t1) + t2;
}

double norm(const Vec3& a) { return std::sqrt(squared_norm(a)); }

double squared_distance(const Vec3& a, const Vec3& b) { return squared_norm(a - b); }

double distance(const Vec3& a, const Vec3& b) { return std::sqrt(squared_distance(a, b)); }

bool all_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

double RotationMatrix::determinant() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double RotationMatrix::orthonormality_error() const {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) v += m[3 * k + i] * m[3 * k + j];
      worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

PointCloud normalize_unit_sphere(const PointCloud& cloud) {
  if (cloud.empty()) throw std::invalid_argument("normalize_unit_sphere: empty input");
  Vec3 centroid{};
  for (const Vec3& p : cloud.points) centroid += p;
  centroid = centroid / static_cast<double>(cloud.size());

  PointCloud out;
  out.label = cloud.label;
  out.points.reserve(cloud.size());
  double max_norm = 0.0;
  for (const Vec3& p : cloud.points) {
    Vec3 c = p - centroid;
    out.points.push_back(c);
    max_norm = std::max(max_norm, norm(c));
  }
  const double scale = max_norm < 1e-12 ? 1.0 : max_norm;
  for (Vec3& p : out.points) p = p / scale;
  return out;
}

RotationMatrix random_rotation_so3(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double qw = 0.0, qx = 0.0, qy = 0.0, qz = 0.0, n = 0.0;
  do {
    qw = gauss(rng);
    qx = gauss(rng);
    qy = gauss(rng);
    qz = gauss(rng);
    n = std::sqrt(qw * qw + qx * qx + qy * qy + qz * qz);
  } while (n < 1e-6);
  qw /= n;
  qx /= n;
  qy /= n;
  qz /= n;

  RotationMatrix r;
  r.m = {1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qz * qw),     2 * (qx * qz + qy * qw),
         2 * (qx * qy + qz * qw),     1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qx * qw),
         2 * (qx * qz - qy * qw),     2 * (qy * qz + qx * qw),     1 - 2 * (qx * qx + qy * qy)};
  return r;
}

RotationMatrix azimuthal_rotation(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  RotationMatrix r;
  r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
  return r;
}

RotationMatrix signed_permutation_rotation(std::uint64_t index) {
  static const std::vector<RotationMatrix> table = [] {
    std::vector<RotationMatrix> out;
    std::array<std::size_t, 3> perm = {0, 1, 2};
    do {
      for (int bits = 0; bits < 8; ++bits) {
        RotationMatrix rot;
        rot.m.fill(0.0);
        for (std::size_t row = 0; row < 3; ++row) {
          const double sign = (bits >> row) & 1 ? -1.0 : 1.0;
          rot.m[row * 3 + perm[row]] = sign;
        }
        if (rot.determinant() > 0.5) out.push_back(rot);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }();
  return table[index % table.size()];
}

PointCloud apply_rotation(const PointCloud& cloud, const RotationMatrix& rot) {
  PointCloud out;
  out.label = cloud.label;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points) out.points.push_back(rot.apply(p));
  return out;
}

std::vector<std::size_t> farthest_point_sampling(const PointCloud& cloud, std::size_t n) {
  const std::size_t count = cloud.size();
  if (n < 1 || n > count)
    throw std::invalid_argument("farthest_point_sampling: n out of range [1, N]");

  std::vector<std::size_t> selected;
  selected.reserve(n);
  selected.push_back(0);

  std::vector<double> min_d2(count, std::numeric_limits<double>::infinity());
  for (std::size_t step = 1; step < n; ++step) {
    const Vec3& latest = cloud[selected.back()];
    std::size_t best = 0;
    double best_d2 = -1.0;
    for (std::size_t i = 0; i < count; ++i) {
      min_d2[i] = std::min(min_d2[i], squared_distance(cloud[i], latest));
      if (min_d2[i] > best_d2) {
        best_d2 = min_d2[i];
        best = i;
      }
    }
    selected.push_back(best);
    min_d2[best] = -std::numeric_limits<double>::infinity();  // never re-pick
  }
  return selected;
}

std::vector<Neighborhood> ball_query(const PointCloud& cloud,
                                     std::span<const std::size_t> center_indices,
                                     double radius, std::size_t k) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball_query: radius must be > 0");
  if (k < 1) throw std::invalid_argument("ball_query: k must be >= 1");
  const double r2 = radius * radius;

  std::vector<Neighborhood> result;
  result.reserve(center_indices.size());
  std::vector<std::pair<double, std::size_t>> inside;
  for (std::size_t c : center_indices) {
    if (c >= cloud.size()) throw std::invalid_argument("ball_query: center index out of range");
    inside.clear();
    const Vec3& center = cloud[c];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (i == c) continue;
      double d2 = squared_distance(cloud[i], center);
      if (d2 <= r2) inside.emplace_back(d2, i);
    }
    std::sort(inside.begin(), inside.end());

    Neighborhood nh;
    nh.center_index = c;
    nh.radius = radius;
    nh.neighbor_indices.reserve(k);
    nh.neighbor_indices.push_back(c);
    for (std::size_t j = 0; nh.neighbor_indices.size() < k && j < inside.size(); ++j)
      nh.neighbor_indices.push_back(inside[j].second);
    // pad by cycling the found candidates (center included) in order
    const std::size_t found = nh.neighbor_indices.size();
    for (std::size_t j = 0; nh.neighbor_indices.size() < k; ++j)
      nh.neighbor_indices.push_back(nh.neighbor_indices[j % found]);
    result.push_back(std::move(nh));
  }
  return result;
}

PointCloud add_gaussian_noise(const PointCloud& cloud, double variance, std::uint64_t seed) {
  if (variance < 0.0) throw std::invalid_argument("add_gaussian_noise: variance must be >= 0");
  if (variance == 0.0) return cloud;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(variance));
  PointCloud out;
  out.label = cloud.label;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points)
    out.points.push_back({p.x + gauss(rng), p.y + gauss(rng), p.z + gauss(rng)});
  return out;
}

PointCloud augment_scale_jitter(const PointCloud& cloud, double scale_min, double scale_max,
                                double jitter_sigma, std::uint64_t seed) {
  if (!(scale_min > 0.0) || scale_max < scale_min)
    throw std::invalid_argument("augment_scale_jitter: need 0 < scale_min <= scale_max");
  if (jitter_sigma < 0.0)
    throw std::invalid_argument("augment_scale_jitter: jitter_sigma must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(scale_min, scale_max);
  const double scale = scale_min == scale_max ? scale_min : uni(rng);
  std::normal_distribution<double> gauss(0.0, jitter_sigma);

  PointCloud out;
  out.label = cloud.label;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points) {
    Vec3 q = p * scale;
    if (jitter_sigma > 0.0) q += {gauss(rng), gauss(rng), gauss(rng)};
    out.points.push_back(q);
  }
  return out;
}

PointCloud gather_points(const PointCloud& cloud, std::span<const std::size_t> indices) {
  PointCloud out;
  out.label = cloud.label;
  out.points.reserve(indices.size());
  for (std::size_t i : indices) out.points.push_back(cloud[i]);
  return out;
}

}  // namespace rotinv
