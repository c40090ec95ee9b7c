#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rotinv/geometry.hpp"

namespace rotinv {

struct TriangleMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<std::size_t, 3>> triangles;
};

// OFF text mesh. Polygon faces are fan-triangulated. Parse errors carry the
// offending line number.
TriangleMesh load_off(const std::string& path);

// Area-weighted triangle choice, then uniform barycentric samples.
PointCloud sample_mesh_surface(const TriangleMesh& mesh, std::size_t num_points,
                               std::uint64_t seed);

// One "x y z" triple per line; extra trailing columns are ignored.
PointCloud load_xyz(const std::string& path);

// ascii PLY with x, y, z vertex properties; other properties are ignored.
PointCloud load_ply_ascii(const std::string& path);

// Loads a cloud by extension: .off meshes are surface-sampled to mesh_samples
// points, .ply and .xyz are read directly.
PointCloud load_cloud(const std::string& path, std::size_t mesh_samples, std::uint64_t seed);

void save_xyz(const std::string& path, const PointCloud& cloud);

}  // namespace rotinv
