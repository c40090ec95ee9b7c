#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rotinv/geometry.hpp"

namespace rotinv {

// Class names accepted by the synthetic generator, in label order.
const std::vector<std::string>& shape_class_names();

// Raw surface samples of one primitive, area-uniform, with seeded jitter of
// the shape parameters (not of the points). Not normalized.
PointCloud sample_shape(const std::string& class_name, std::size_t num_points,
                        std::uint64_t seed);

struct LabeledSet {
  std::vector<PointCloud> clouds;
  std::vector<int> labels;

  std::size_t size() const { return clouds.size(); }
};

// per_class clouds for every listed class, each normalized to the unit
// sphere, labeled by position in `classes`. Deterministic per seed.
LabeledSet gen_synthetic_dataset(std::span<const std::string> classes, std::size_t per_class,
                                 std::size_t points_per_cloud, std::uint64_t seed);

}  // namespace rotinv
