#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <stdexcept>
#include <vector>

#include "rotinv/experiment.hpp"
#include "rotinv/io.hpp"

namespace py = pybind11;
using namespace rotinv;

namespace {

using PyPoints = std::vector<std::array<double, 3>>;
using PyMatrix = std::array<std::array<double, 3>, 3>;

PointCloud to_cloud(const PyPoints& points) {
  PointCloud cloud;
  cloud.points.reserve(points.size());
  for (const auto& p : points) cloud.points.push_back({p[0], p[1], p[2]});
  return cloud;
}

PyPoints from_cloud(const PointCloud& cloud) {
  PyPoints out;
  out.reserve(cloud.size());
  for (const Point3& p : cloud.points) out.push_back({p.x, p.y, p.z});
  return out;
}

RotationMatrix to_rotation(const PyMatrix& rows) {
  RotationMatrix rot;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) rot.m[r * 3 + c] = rows[r][c];
  return rot;
}

NetworkConfig config_from_kwargs(std::size_t n1, std::size_t n2, std::size_t k1, std::size_t k2,
                                 std::size_t k3, double r1, double r2, std::size_t channels,
                                 std::size_t num_classes, bool use_global_descriptor,
                                 bool use_relation_weights, std::uint64_t seed) {
  NetworkConfig cfg;
  cfg.n1 = n1;
  cfg.n2 = n2;
  cfg.k1 = k1;
  cfg.k2 = k2;
  cfg.k3 = k3;
  cfg.r1 = r1;
  cfg.r2 = r2;
  cfg.channels = channels;
  cfg.num_classes = num_classes;
  cfg.use_global_descriptor = use_global_descriptor;
  cfg.use_relation_weights = use_relation_weights;
  cfg.median_params.seed = mix_seed(seed, 7);
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rotation-invariant point cloud analysis core";

  m.def(
      "normalize",
      [](const PyPoints& points) { return from_cloud(normalize_unit_sphere(to_cloud(points))); },
      py::arg("points"),
      "Center a cloud on its centroid and scale it into the unit sphere.");

  m.def(
      "farthest_point_sampling",
      [](const PyPoints& points, std::size_t n) {
        return farthest_point_sampling(to_cloud(points), n);
      },
      py::arg("points"), py::arg("n"),
      "Indices of n samples maximizing pairwise minimum distance, starting at index 0.");

  m.def(
      "ball_query",
      [](const PyPoints& points, const std::vector<std::size_t>& centers, double radius,
         std::size_t k) {
        std::vector<std::vector<std::size_t>> out;
        for (const Neighborhood& nbh : ball_query(to_cloud(points), centers, radius, k))
          out.push_back(nbh.neighbor_indices);
        return out;
      },
      py::arg("points"), py::arg("centers"), py::arg("radius"), py::arg("k"),
      "Per center: up to k neighbor indices within the radius, center first, cycle-padded.");

  m.def(
      "weiszfeld_median",
      [](const PyPoints& points) {
        const Point3 median = weiszfeld_median(to_cloud(points).points);
        return std::array<double, 3>{median.x, median.y, median.z};
      },
      py::arg("points"), "Exact geometric median via Weiszfeld iteration.");

  m.def(
      "approx_geometric_median",
      [](const PyPoints& points, std::size_t num_subsets, std::size_t subset_size,
         std::uint64_t seed) {
        MedianParams params;
        params.num_subsets = num_subsets;
        params.subset_size = subset_size;
        params.seed = seed;
        const Point3 median = approx_geometric_median(to_cloud(points).points, params);
        return std::array<double, 3>{median.x, median.y, median.z};
      },
      py::arg("points"), py::arg("num_subsets") = 10, py::arg("subset_size") = 1,
      py::arg("seed") = 0, "Subset-centroid clustering approximation of the geometric median.");

  m.def(
      "random_rotation",
      [](std::uint64_t seed) {
        const RotationMatrix rot = random_rotation_so3(seed);
        PyMatrix rows;
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) rows[r][c] = rot.m[r * 3 + c];
        return rows;
      },
      py::arg("seed"), "A uniformly random proper rotation, 3x3 row-major.");

  m.def(
      "apply_rotation",
      [](const PyPoints& points, const PyMatrix& rotation) {
        return from_cloud(apply_rotation(to_cloud(points), to_rotation(rotation)));
      },
      py::arg("points"), py::arg("rotation"));

  m.def(
      "descriptor_tensor",
      [](const PyPoints& points, std::size_t num_centers, double radius, std::size_t k,
         std::uint64_t seed, bool use_mean) {
        const PointCloud cloud = to_cloud(points);
        const std::vector<std::size_t> centers = farthest_point_sampling(cloud, num_centers);
        const std::vector<Neighborhood> nbh = ball_query(cloud, centers, radius, k);
        MedianParams params;
        params.num_subsets = 10;
        params.subset_size = median_subset_size(k);
        params.seed = seed;
        const RIInputTensor tensor = build_ri_tensor(
            cloud, nbh, params,
            use_mean ? CenterMode::kArithmeticMean : CenterMode::kGeometricMedian);

        std::vector<std::vector<std::vector<double>>> out(
            tensor.num_centers,
            std::vector<std::vector<double>>(tensor.neighbors_per_center,
                                             std::vector<double>(kDescriptorWidth)));
        for (std::size_t i = 0; i < tensor.num_centers; ++i)
          for (std::size_t j = 0; j < tensor.neighbors_per_center; ++j)
            for (std::size_t c = 0; c < kDescriptorWidth; ++c) out[i][j][c] = tensor.at(i, j, c);
        return out;
      },
      py::arg("points"), py::arg("num_centers"), py::arg("radius"), py::arg("k"),
      py::arg("seed") = 0, py::arg("use_mean") = false,
      "Rotation-invariant N x K x 12 descriptor block over farthest-point centers.");

  m.def(
      "codeword",
      [](const PyPoints& points, std::size_t n1, std::size_t n2, std::size_t k1, std::size_t k2,
         std::size_t k3, double r1, double r2, std::size_t channels, std::size_t num_classes,
         bool use_global_descriptor, bool use_relation_weights, std::uint64_t seed) {
        const NetworkConfig cfg =
            config_from_kwargs(n1, n2, k1, k2, k3, r1, r2, channels, num_classes,
                               use_global_descriptor, use_relation_weights, seed);
        const NetworkParams params = make_network_params(cfg, seed);
        const Tensor code = hierarchical_forward(normalize_unit_sphere(to_cloud(points)), cfg,
                                                 params);
        return code.values;
      },
      py::arg("points"), py::arg("n1") = 32, py::arg("n2") = 8, py::arg("k1") = 4,
      py::arg("k2") = 6, py::arg("k3") = 8, py::arg("r1") = 0.2, py::arg("r2") = 0.4,
      py::arg("channels") = 16, py::arg("num_classes") = 5,
      py::arg("use_global_descriptor") = true, py::arg("use_relation_weights") = true,
      py::arg("seed") = 0,
      "Rotation-invariant whole-cloud embedding from seed-initialized parameters.");

  m.def(
      "load_cloud",
      [](const std::string& path, std::size_t mesh_samples, std::uint64_t seed) {
        return from_cloud(load_cloud(path, mesh_samples, seed));
      },
      py::arg("path"), py::arg("mesh_samples") = 1024, py::arg("seed") = 0,
      "Read .xyz or ascii .ply points, or surface-sample an .off mesh.");

  m.def(
      "save_xyz",
      [](const std::string& path, const PyPoints& points) { save_xyz(path, to_cloud(points)); },
      py::arg("path"), py::arg("points"));

  m.def(
      "sample_shape",
      [](const std::string& class_name, std::size_t num_points, std::uint64_t seed) {
        return from_cloud(sample_shape(class_name, num_points, seed));
      },
      py::arg("class_name"), py::arg("num_points"), py::arg("seed") = 0,
      "Raw surface samples of a synthetic primitive; see shape_class_names().");

  m.def("shape_class_names", [] { return shape_class_names(); });
}
