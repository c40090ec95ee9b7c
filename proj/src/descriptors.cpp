#include "rotinv/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace rotinv {

namespace {

constexpr double kDegenerate = 1e-9;

// Cosine of the angle between u and v; zero-length vectors give 1 (angle 0).
double cosine_between(const Vec3& u, const Vec3& v) {
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu < kDegenerate || nv < kDegenerate) return 1.0;
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

}  // namespace

Point3 support_point(const Point3& p, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("support_point: radius must be > 0");
  const double n = norm(p);
  if (n < kDegenerate) {
    std::cerr << "warning: support_point: reference point at origin, using fallback ("
              << r << ", 0, 0)\n";
    return {r, 0.0, 0.0};
  }
  return p * (1.0 + r / n);
}

GlobalDescriptor global_descriptor(const Point3& p, const Point3& m, const Point3& s) {
  GlobalDescriptor g;
  g.dp = norm(p);
  g.dpm = distance(p, m);
  g.dsm = distance(s, m);
  g.cos_alpha = cosine_between(p - m, s - m);
  g.cos_beta = cosine_between(p - s, m - s);
  return g;
}

double dihedral_angle(const Point3& p, const Point3& s, const Point3& m, const Point3& q) {
  const Vec3 axis_raw = s - p;
  const double axis_len = norm(axis_raw);
  if (axis_len < kDegenerate) return 0.0;
  const Vec3 u = axis_raw / axis_len;

  const Vec3 pm = m - p;
  const Vec3 pq = q - p;
  const Vec3 n1 = pm - u * dot(pm, u);
  const Vec3 n2 = pq - u * dot(pq, u);
  if (norm(n1) < kDegenerate || norm(n2) < kDegenerate) return 0.0;

  double theta = std::atan2(dot(cross(n1, n2), u), dot(n1, n2));
  if (theta == std::numbers::pi) theta = -std::numbers::pi;  // range [-pi, pi)
  return theta;
}

LocalDescriptor local_descriptor(const Point3& p, const Point3& m, const Point3& s,
                                 const Point3& q) {
  LocalDescriptor l;
  l.dpm = distance(q, m);
  l.dpp = distance(q, p);
  l.dps = distance(q, s);
  l.cos_gamma_p = cosine_between(p - q, s - q);
  l.cos_gamma_m = cosine_between(m - q, p - q);
  l.cos_gamma_s = cosine_between(s - q, m - q);
  l.f_theta = std::sin(0.5 * dihedral_angle(p, s, m, q));
  return l;
}

RIInputTensor build_ri_tensor(const PointCloud& cloud,
                              std::span<const Neighborhood> neighborhoods,
                              const MedianParams& params, CenterMode mode) {
  RIInputTensor tensor;
  tensor.num_centers = neighborhoods.size();
  tensor.neighbors_per_center = neighborhoods.empty() ? 0 : neighborhoods[0].neighbor_indices.size();
  tensor.values.reserve(tensor.num_centers * tensor.neighbors_per_center * kDescriptorWidth);

  std::vector<Point3> neighbor_points;
  for (std::size_t i = 0; i < neighborhoods.size(); ++i) {
    const Neighborhood& nh = neighborhoods[i];
    if (nh.neighbor_indices.size() != tensor.neighbors_per_center)
      throw std::invalid_argument("build_ri_tensor: ragged neighborhoods");

    neighbor_points.clear();
    for (std::size_t idx : nh.neighbor_indices) neighbor_points.push_back(cloud[idx]);

    const Point3 p = cloud[nh.center_index];
    MedianParams per_center = params;
    per_center.subset_size = std::clamp<std::size_t>(params.subset_size, 1, neighbor_points.size());
    per_center.seed = mix_seed(params.seed, nh.center_index);
    const Point3 m = mode == CenterMode::kGeometricMedian
                         ? approx_geometric_median(neighbor_points, per_center)
                         : arithmetic_mean(neighbor_points);
    const Point3 s = support_point(p, nh.radius);
    const GlobalDescriptor g = global_descriptor(p, m, s);

    for (const Point3& q : neighbor_points) {
      const LocalDescriptor l = local_descriptor(p, m, s, q);
      tensor.values.insert(tensor.values.end(),
                           {g.dp, g.dpm, g.dsm, g.cos_alpha, g.cos_beta, l.dpm, l.dpp, l.dps,
                            l.cos_gamma_p, l.cos_gamma_m, l.cos_gamma_s, l.f_theta});
    }
  }
  return tensor;
}

RelationMatrix relation_matrix(std::span<const Point3> points) {
  if (points.empty()) throw std::invalid_argument("relation_matrix: empty input");
  RelationMatrix rel;
  rel.num_points = points.size();
  rel.values.assign(rel.num_points * 2 * rel.num_points, 0.0);

  std::vector<double> norms(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) norms[i] = norm(points[i]);

  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      const double d = distance(points[i], points[j]);
      double ang = 0.0;
      if (norms[i] >= kDegenerate && norms[j] >= kDegenerate)
        ang = std::atan2(norm(cross(points[i], points[j])), dot(points[i], points[j]));
      rel.values[i * 2 * rel.num_points + 2 * j] = d;
      rel.values[i * 2 * rel.num_points + 2 * j + 1] = ang;
    }
  }
  return rel;
}

}  // namespace rotinv
