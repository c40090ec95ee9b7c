#include "rotinv/dataset.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace rotinv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double jittered(std::mt19937_64& rng, double base) {
  std::uniform_real_distribution<double> dist(0.85, 1.15);
  return base * dist(rng);
}

Vec3 unit_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    const Vec3 g{gauss(rng), gauss(rng), gauss(rng)};
    const double n = norm(g);
    if (n > 1e-9) return g / n;
  }
}

PointCloud sample_sphere(std::size_t n, std::mt19937_64& rng) {
  const double radius = jittered(rng, 1.0);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) cloud.points.push_back(unit_direction(rng) * radius);
  return cloud;
}

PointCloud sample_box(std::size_t n, std::mt19937_64& rng) {
  const double a = jittered(rng, 1.0);
  const double b = jittered(rng, 0.7);
  const double c = jittered(rng, 0.45);
  // Face pair areas for x, y, z normals.
  const double areas[3] = {b * c, a * c, a * b};
  const double total = areas[0] + areas[1] + areas[2];

  std::uniform_real_distribution<double> pick(0.0, total);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = pick(rng);
    const int axis = t < areas[0] ? 0 : (t < areas[0] + areas[1] ? 1 : 2);
    const double side = coin(rng) < 0.5 ? -1.0 : 1.0;
    std::uniform_real_distribution<double> ua(-a, a), ub(-b, b), uc(-c, c);
    Vec3 p{ua(rng), ub(rng), uc(rng)};
    if (axis == 0) p.x = side * a;
    if (axis == 1) p.y = side * b;
    if (axis == 2) p.z = side * c;
    cloud.points.push_back(p);
  }
  return cloud;
}

PointCloud sample_cylinder(std::size_t n, std::mt19937_64& rng) {
  const double radius = jittered(rng, 0.5);
  const double height = jittered(rng, 1.6);
  const double lateral = kTwoPi * radius * height;
  const double caps = 2.0 * std::numbers::pi * radius * radius;

  std::uniform_real_distribution<double> pick(0.0, lateral + caps);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = angle(rng);
    if (pick(rng) < lateral) {
      const double z = (unit(rng) - 0.5) * height;
      cloud.points.push_back({radius * std::cos(phi), radius * std::sin(phi), z});
    } else {
      const double r = radius * std::sqrt(unit(rng));
      const double z = (unit(rng) < 0.5 ? -0.5 : 0.5) * height;
      cloud.points.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
  }
  return cloud;
}

PointCloud sample_cone(std::size_t n, std::mt19937_64& rng) {
  const double radius = jittered(rng, 0.7);
  const double height = jittered(rng, 1.4);
  const double slant = std::sqrt(radius * radius + height * height);
  const double lateral = std::numbers::pi * radius * slant;
  const double base = std::numbers::pi * radius * radius;

  std::uniform_real_distribution<double> pick(0.0, lateral + base);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  PointCloud cloud;
  cloud.points.reserve(n);
  // Apex at +height/2, base disk at -height/2.
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = angle(rng);
    if (pick(rng) < lateral) {
      const double t = std::sqrt(unit(rng));  // area density grows with distance from apex
      const double r = radius * t;
      const double z = height * (0.5 - t);
      cloud.points.push_back({r * std::cos(phi), r * std::sin(phi), z});
    } else {
      const double r = radius * std::sqrt(unit(rng));
      cloud.points.push_back({r * std::cos(phi), r * std::sin(phi), -0.5 * height});
    }
  }
  return cloud;
}

PointCloud sample_torus(std::size_t n, std::mt19937_64& rng) {
  const double major = jittered(rng, 0.8);
  const double minor = jittered(rng, 0.25);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Rejection on the tube angle: surface density is proportional to
    // major + minor * cos(theta).
    double theta;
    do {
      theta = angle(rng);
    } while (unit(rng) * (major + minor) > major + minor * std::cos(theta));
    const double phi = angle(rng);
    const double ring = major + minor * std::cos(theta);
    cloud.points.push_back({ring * std::cos(phi), ring * std::sin(phi), minor * std::sin(theta)});
  }
  return cloud;
}

}  // namespace

const std::vector<std::string>& shape_class_names() {
  static const std::vector<std::string> names = {"sphere", "box", "cylinder", "cone", "torus"};
  return names;
}

PointCloud sample_shape(const std::string& class_name, std::size_t num_points,
                        std::uint64_t seed) {
  if (num_points < 1) throw std::invalid_argument("sample_shape: need at least one point");
  std::mt19937_64 rng(seed);
  if (class_name == "sphere") return sample_sphere(num_points, rng);
  if (class_name == "box") return sample_box(num_points, rng);
  if (class_name == "cylinder") return sample_cylinder(num_points, rng);
  if (class_name == "cone") return sample_cone(num_points, rng);
  if (class_name == "torus") return sample_torus(num_points, rng);
  throw std::invalid_argument("sample_shape: unknown class " + class_name);
}

LabeledSet gen_synthetic_dataset(std::span<const std::string> classes, std::size_t per_class,
                                 std::size_t points_per_cloud, std::uint64_t seed) {
  if (classes.empty()) throw std::invalid_argument("gen_synthetic_dataset: no classes");
  if (per_class < 1 || points_per_cloud < 1)
    throw std::invalid_argument("gen_synthetic_dataset: counts must be >= 1");

  LabeledSet set;
  set.clouds.reserve(classes.size() * per_class);
  set.labels.reserve(classes.size() * per_class);
  for (std::size_t ci = 0; ci < classes.size(); ++ci)
    for (std::size_t j = 0; j < per_class; ++j) {
      PointCloud cloud =
          sample_shape(classes[ci], points_per_cloud, mix_seed(seed, ci, j));
      cloud = normalize_unit_sphere(cloud);
      cloud.label = static_cast<int>(ci);
      set.clouds.push_back(std::move(cloud));
      set.labels.push_back(static_cast<int>(ci));
    }
  return set;
}

}  // namespace rotinv
