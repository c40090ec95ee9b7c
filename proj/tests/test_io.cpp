#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "rotinv/io.hpp"

using namespace rotinv;

namespace {

std::string write_temp(const char* name, const std::string& text) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path);
  out << text;
  return path;
}

struct TempFile {
  std::string path;
  explicit TempFile(const char* name, const std::string& text)
      : path(write_temp(name, text)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("off meshes load with fan triangulation") {
  const TempFile f("io_quad.off",
                   "OFF\n"
                   "4 1 0\n"
                   "0 0 0\n"
                   "1 0 0\n"
                   "1 1 0\n"
                   "0 1 0\n"
                   "4 0 1 2 3\n");
  const TriangleMesh mesh = load_off(f.path);
  REQUIRE(mesh.vertices.size() == 4);
  REQUIRE(mesh.triangles.size() == 2);  // one quad fans into two triangles
  CHECK(mesh.triangles[0] == std::array<std::size_t, 3>{0, 1, 2});
  CHECK(mesh.triangles[1] == std::array<std::size_t, 3>{0, 2, 3});
  CHECK(mesh.vertices[2].x == 1.0);
  CHECK(mesh.vertices[2].y == 1.0);
}

TEST_CASE("off meshes accept comments and blank lines") {
  const TempFile f("io_comments.off",
                   "OFF\n"
                   "# a comment\n"
                   "\n"
                   "3 1 0\n"
                   "0 0 0\n"
                   "1 0 0  # trailing comment\n"
                   "0 1 0\n"
                   "3 0 1 2\n");
  const TriangleMesh mesh = load_off(f.path);
  CHECK(mesh.vertices.size() == 3);
  CHECK(mesh.triangles.size() == 1);
}

TEST_CASE("off loader reports bad vertex indices and malformed headers") {
  const TempFile bad_index("io_badindex.off",
                           "OFF\n"
                           "3 1 0\n"
                           "0 0 0\n"
                           "1 0 0\n"
                           "0 1 0\n"
                           "3 0 1 5\n");
  CHECK_THROWS(load_off(bad_index.path));

  const TempFile bad_header("io_badheader.off", "PLY\n3 1 0\n");
  CHECK_THROWS(load_off(bad_header.path));

  CHECK_THROWS(load_off("/nonexistent/path/mesh.off"));
}

TEST_CASE("surface samples stay on the triangle") {
  TriangleMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  mesh.triangles = {{0, 1, 2}};
  const PointCloud cloud = sample_mesh_surface(mesh, 1000, 4);
  REQUIRE(cloud.size() == 1000);
  for (const Point3& p : cloud.points) {
    CHECK(p.z == 0.0);
    CHECK(p.x >= -1e-12);
    CHECK(p.y >= -1e-12);
    CHECK(p.x + p.y <= 1.0 + 1e-12);
  }
}

TEST_CASE("surface sampling weights triangles by area") {
  // Areas 0.5 and 1.5: the second triangle should collect ~75% of samples.
  TriangleMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 1}, {6, 0, 1}, {5, 3, 1}};
  mesh.triangles = {{0, 1, 2}, {3, 4, 5}};
  const std::size_t n = 100000;
  const PointCloud cloud = sample_mesh_surface(mesh, n, 9);
  std::size_t second = 0;
  for (const Point3& p : cloud.points)
    if (p.z == 1.0) ++second;
  const double frac = static_cast<double>(second) / static_cast<double>(n);
  CHECK(frac == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("surface sampling is deterministic and validates its input") {
  TriangleMesh mesh;
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  mesh.triangles = {{0, 1, 2}};
  const PointCloud a = sample_mesh_surface(mesh, 64, 7);
  const PointCloud b = sample_mesh_surface(mesh, 64, 7);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }

  TriangleMesh degenerate;
  degenerate.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  degenerate.triangles = {{0, 1, 2}};
  CHECK_THROWS(sample_mesh_surface(degenerate, 10, 0));

  TriangleMesh empty;
  CHECK_THROWS(sample_mesh_surface(empty, 10, 0));
}

TEST_CASE("xyz files preserve order and ignore extra columns") {
  const TempFile f("io_three.xyz",
                   "0.5 -1.25 3 extra tokens here\n"
                   "1 2 3\n"
                   "-0.125 0 7.5\n");
  const PointCloud cloud = load_xyz(f.path);
  REQUIRE(cloud.size() == 3);
  CHECK(cloud[0].x == 0.5);
  CHECK(cloud[0].y == -1.25);
  CHECK(cloud[1].z == 3.0);
  CHECK(cloud[2].x == -0.125);
  CHECK(cloud[2].z == 7.5);
}

TEST_CASE("xyz loader reports empty and malformed input") {
  const TempFile empty("io_empty.xyz", "");
  CHECK_THROWS(load_xyz(empty.path));

  const TempFile bad("io_bad.xyz", "1 2 3\n4 five 6\n");
  CHECK_THROWS_WITH_AS(load_xyz(bad.path), doctest::Contains(":2:"), std::runtime_error);
}

TEST_CASE("xyz files round trip exactly") {
  PointCloud cloud;
  cloud.points = {{0.1234567890123456, -2.5, 1e-9}, {3, 4, 5}};
  const std::string path =
      (std::filesystem::temp_directory_path() / "io_roundtrip.xyz").string();
  save_xyz(path, cloud);
  const PointCloud back = load_xyz(path);
  std::remove(path.c_str());
  REQUIRE(back.size() == 2);
  CHECK(back[0].x == cloud[0].x);
  CHECK(back[0].y == cloud[0].y);
  CHECK(back[0].z == cloud[0].z);
  CHECK(back[1].x == 3.0);
}

TEST_CASE("ascii ply files load x y z and skip other properties") {
  const TempFile f("io_cloud.ply",
                   "ply\n"
                   "format ascii 1.0\n"
                   "comment made by hand\n"
                   "element vertex 2\n"
                   "property float x\n"
                   "property float y\n"
                   "property float z\n"
                   "property uchar red\n"
                   "element face 0\n"
                   "property list uchar int vertex_indices\n"
                   "end_header\n"
                   "0.5 1.5 -2 255\n"
                   "1 0 0 0\n");
  const PointCloud cloud = load_ply_ascii(f.path);
  REQUIRE(cloud.size() == 2);
  CHECK(cloud[0].x == 0.5);
  CHECK(cloud[0].y == 1.5);
  CHECK(cloud[0].z == -2.0);
  CHECK(cloud[1].x == 1.0);
}

TEST_CASE("ply loader handles reordered properties") {
  const TempFile f("io_reorder.ply",
                   "ply\n"
                   "format ascii 1.0\n"
                   "element vertex 1\n"
                   "property float z\n"
                   "property float x\n"
                   "property float y\n"
                   "end_header\n"
                   "3 1 2\n");
  const PointCloud cloud = load_ply_ascii(f.path);
  REQUIRE(cloud.size() == 1);
  CHECK(cloud[0].x == 1.0);
  CHECK(cloud[0].y == 2.0);
  CHECK(cloud[0].z == 3.0);
}

TEST_CASE("ply loader rejects binary and incomplete files") {
  const TempFile binary("io_binary.ply",
                        "ply\nformat binary_little_endian 1.0\nend_header\n");
  CHECK_THROWS(load_ply_ascii(binary.path));

  const TempFile missing("io_missing.ply",
                         "ply\n"
                         "format ascii 1.0\n"
                         "element vertex 2\n"
                         "property float x\n"
                         "property float y\n"
                         "property float z\n"
                         "end_header\n"
                         "0 0 0\n");
  CHECK_THROWS(load_ply_ascii(missing.path));

  const TempFile not_ply("io_notply.ply", "solid whatever\n");
  CHECK_THROWS(load_ply_ascii(not_ply.path));
}

TEST_CASE("cloud loading dispatches on the file extension") {
  const TempFile xyz("io_dispatch.xyz", "1 2 3\n4 5 6\n");
  const PointCloud direct = load_cloud(xyz.path, 128, 0);
  CHECK(direct.size() == 2);  // mesh_samples does not apply to point files

  const TempFile off("io_dispatch.off",
                     "OFF\n"
                     "3 1 0\n"
                     "0 0 0\n"
                     "1 0 0\n"
                     "0 1 0\n"
                     "3 0 1 2\n");
  const PointCloud sampled = load_cloud(off.path, 128, 0);
  CHECK(sampled.size() == 128);

  const TempFile unknown("io_dispatch.stl", "whatever\n");
  CHECK_THROWS(load_cloud(unknown.path, 10, 0));
}
