#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <vector>

#include "rotinv/experiment.hpp"

namespace rotinv {

namespace {

// Small network used by the selftest and gradient checks; clouds of 32
// points keep full finite differencing affordable.
NetworkConfig miniature_config(std::uint64_t seed) {
  NetworkConfig cfg;
  cfg.n1 = 16;
  cfg.n2 = 8;
  cfg.k1 = 3;
  cfg.k2 = 4;
  cfg.k3 = 6;
  cfg.r1 = 0.3;
  cfg.r2 = 0.6;
  cfg.channels = 8;
  cfg.num_classes = 2;
  cfg.median_params.seed = mix_seed(seed, 7);
  return cfg;
}

std::vector<PointCloud> miniature_clouds(std::uint64_t seed) {
  const std::vector<std::string> classes = {"sphere", "box"};
  const LabeledSet set = gen_synthetic_dataset(classes, 1, 32, seed);
  return set.clouds;
}

RIInputTensor reference_tensor(const PointCloud& cloud, std::uint64_t median_seed) {
  const std::vector<std::size_t> centers = farthest_point_sampling(cloud, 24);
  const std::vector<Neighborhood> nbh = ball_query(cloud, centers, 0.3, 6);
  MedianParams mp;
  mp.num_subsets = 10;
  mp.subset_size = median_subset_size(6);
  mp.seed = median_seed;
  return build_ri_tensor(cloud, nbh, mp);
}

double tensor_delta(const PointCloud& cloud, const RotationMatrix& rot,
                    std::uint64_t median_seed) {
  const RIInputTensor a = reference_tensor(cloud, median_seed);
  const RIInputTensor b = reference_tensor(apply_rotation(cloud, rot), median_seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  return worst;
}

double check_tensor_so3(std::uint64_t seed) {
  double worst = 0.0;
  const std::vector<std::string> classes = {"torus", "box", "cone"};
  for (std::size_t t = 0; t < 6; ++t) {
    const PointCloud cloud = normalize_unit_sphere(
        sample_shape(classes[t % classes.size()], 64, mix_seed(seed, 10, t)));
    const RotationMatrix rot = random_rotation_so3(mix_seed(seed, 11, t));
    worst = std::max(worst, tensor_delta(cloud, rot, mix_seed(seed, 12, t)));
  }
  return worst;
}

double check_tensor_signed_perm(std::uint64_t seed) {
  double worst = 0.0;
  const std::vector<std::string> classes = {"torus", "box", "cone"};
  for (std::size_t t = 0; t < 6; ++t) {
    const PointCloud cloud = normalize_unit_sphere(
        sample_shape(classes[t % classes.size()], 64, mix_seed(seed, 20, t)));
    const RotationMatrix rot = signed_permutation_rotation(mix_seed(seed, 21, t));
    worst = std::max(worst, tensor_delta(cloud, rot, mix_seed(seed, 22, t)));
  }
  return worst;
}

double check_codeword_invariance(std::uint64_t seed) {
  const NetworkConfig cfg = miniature_config(seed);
  const NetworkParams params = make_network_params(cfg, mix_seed(seed, 30));

  double worst = 0.0;
  for (std::size_t t = 0; t < 3; ++t) {
    const PointCloud cloud =
        normalize_unit_sphere(sample_shape("torus", 32, mix_seed(seed, 31, t)));
    const Tensor a = hierarchical_forward(cloud, cfg, params);
    const Tensor b = hierarchical_forward(
        apply_rotation(cloud, random_rotation_so3(mix_seed(seed, 32, t))), cfg, params);
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      ab += a.values[i] * b.values[i];
      aa += a.values[i] * a.values[i];
      bb += b.values[i] * b.values[i];
    }
    const double cosine = ab / std::max(std::sqrt(aa) * std::sqrt(bb), 1e-300);
    worst = std::max(worst, 1.0 - cosine);
  }
  return worst;
}

double check_mirror(std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 40));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  std::size_t failures = 0;
  for (std::size_t t = 0; t < 200; ++t) {
    // Reference triangle in the z = 0 plane; the mirror image of a neighbor
    // across that plane is exactly a z sign flip.
    const double angle = unit(rng) * 2.0 * 3.141592653589793;
    const double pr = 0.3 + 0.6 * unit(rng);
    const Point3 p{pr * std::cos(angle), pr * std::sin(angle), 0.0};
    const double r = 0.2;
    const Point3 s = support_point(p, r);

    Point3 m;
    do {
      m = {p.x + 0.15 * sym(rng), p.y + 0.15 * sym(rng), 0.0};
    } while (norm(cross(m - p, s - p)) < 1e-4);

    const double qz = 0.1 + 0.2 * unit(rng);
    const Point3 q{p.x + 0.15 * sym(rng), p.y + 0.15 * sym(rng), qz};
    const Point3 q_mirror{q.x, q.y, -qz};

    const LocalDescriptor a = local_descriptor(p, m, s, q);
    const LocalDescriptor b = local_descriptor(p, m, s, q_mirror);
    const bool first_six = a.dpm == b.dpm && a.dpp == b.dpp && a.dps == b.dps &&
                           a.cos_gamma_p == b.cos_gamma_p && a.cos_gamma_m == b.cos_gamma_m &&
                           a.cos_gamma_s == b.cos_gamma_s;
    const bool flipped = b.f_theta == -a.f_theta && a.f_theta != 0.0;
    if (!first_six || !flipped) ++failures;
  }
  return static_cast<double>(failures);
}

double check_sampling_oracles(std::uint64_t seed) {
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < 20; ++t) {
    std::mt19937_64 rng(mix_seed(seed, 50, t));
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    PointCloud cloud;
    for (std::size_t i = 0; i < 32; ++i)
      cloud.points.push_back({sym(rng), sym(rng), sym(rng)});

    // Exhaustive FPS oracle with plain arithmetic.
    const std::size_t n = 8;
    std::vector<std::size_t> expected = {0};
    std::vector<double> best(cloud.size(), std::numeric_limits<double>::infinity());
    while (expected.size() < n) {
      const Point3 last = cloud[expected.back()];
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double dx = cloud[i].x - last.x;
        const double dy = cloud[i].y - last.y;
        const double dz = cloud[i].z - last.z;
        best[i] = std::min(best[i], dx * dx + dy * dy + dz * dz);
      }
      std::size_t pick = 0;
      double far = -1.0;
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (std::find(expected.begin(), expected.end(), i) != expected.end()) continue;
        if (best[i] > far) {
          far = best[i];
          pick = i;
        }
      }
      expected.push_back(pick);
    }
    if (farthest_point_sampling(cloud, n) != expected) ++mismatches;

    // Brute-force ball query oracle.
    const double radius = 0.8;
    const std::size_t k = 5;
    const std::vector<Neighborhood> got = ball_query(cloud, expected, radius, k);
    for (std::size_t c = 0; c < expected.size(); ++c) {
      const std::size_t center = expected[c];
      std::vector<std::pair<double, std::size_t>> inside;
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (i == center) continue;
        const double d = distance(cloud[i], cloud[center]);
        if (d <= radius) inside.emplace_back(d, i);
      }
      std::sort(inside.begin(), inside.end());
      std::vector<std::size_t> want = {center};
      for (const auto& [d, i] : inside) {
        if (want.size() == k) break;
        want.push_back(i);
      }
      const std::size_t found = want.size();
      while (want.size() < k) want.push_back(want[want.size() % found]);
      if (got[c].neighbor_indices != want) ++mismatches;
    }
  }
  return static_cast<double>(mismatches);
}

double check_median_blobs(std::uint64_t seed) {
  double worst = 0.0;
  for (std::size_t t = 0; t < 20; ++t) {
    std::mt19937_64 rng(mix_seed(seed, 60, t));
    std::normal_distribution<double> gauss(0.0, 0.05);
    std::uniform_real_distribution<double> sym(-0.5, 0.5);
    const Point3 center{sym(rng), sym(rng), sym(rng)};
    std::vector<Point3> points;
    for (std::size_t i = 0; i < 32; ++i)
      points.push_back({center.x + gauss(rng), center.y + gauss(rng), center.z + gauss(rng)});

    MedianParams mp;
    mp.num_subsets = 10;
    mp.subset_size = median_subset_size(points.size());
    mp.seed = mix_seed(seed, 61, t);
    const Point3 approx = approx_geometric_median(points, mp);
    const Point3 exact = weiszfeld_median(points);
    worst = std::max(worst, distance(approx, exact));
  }
  return worst;
}

double check_model_roundtrip(std::uint64_t seed) {
  const NetworkConfig cfg = miniature_config(seed);
  const NetworkParams params = make_network_params(cfg, mix_seed(seed, 70));
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() /
      ("rotinv_selftest_" + std::to_string(mix_seed(seed, 71)) + ".model");

  save_model(path.string(), cfg, params);
  const LoadedModel loaded = load_model(path.string());
  std::filesystem::remove(path);

  double worst = 0.0;
  const auto original = named_tensors(params);
  const auto reread = named_tensors(loaded.params);
  if (original.size() != reread.size()) return 1.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    if (original[i].first != reread[i].first || original[i].second->shape != reread[i].second->shape)
      return 1.0;
    for (std::size_t j = 0; j < original[i].second->values.size(); ++j)
      worst = std::max(worst,
                       std::abs(original[i].second->values[j] - reread[i].second->values[j]));
  }
  return worst;
}

}  // namespace

std::vector<GradCheckResult> gradient_check_blocks(std::uint64_t seed) {
  const NetworkConfig cfg = miniature_config(seed);
  const std::vector<PointCloud> clouds = miniature_clouds(mix_seed(seed, 80));
  const std::vector<int> labels = {0, 1};

  std::vector<HierarchyInputs> inputs;
  for (const PointCloud& cloud : clouds) inputs.push_back(extract_inputs(cloud, cfg));

  NetworkParams params = make_network_params(cfg, mix_seed(seed, 81));
  NetworkParams analytic = zeros_like(params);
  batch_loss_and_grads(inputs, labels, cfg, params, &analytic);

  const auto param_list = named_tensors(params);
  const auto grad_list = named_tensors(static_cast<const NetworkParams&>(analytic));

  const double eps = 1e-5;
  std::vector<GradCheckResult> results;
  for (std::size_t b = 0; b < param_list.size(); ++b) {
    Tensor& p = *param_list[b].second;
    const Tensor& g = *grad_list[b].second;

    double diff2 = 0.0, ga2 = 0.0, gf2 = 0.0;
    for (std::size_t j = 0; j < p.values.size(); ++j) {
      const double saved = p.values[j];
      p.values[j] = saved + eps;
      const double up = batch_loss_and_grads(inputs, labels, cfg, params, nullptr);
      p.values[j] = saved - eps;
      const double down = batch_loss_and_grads(inputs, labels, cfg, params, nullptr);
      p.values[j] = saved;
      const double fd = (up - down) / (2.0 * eps);
      diff2 += (g.values[j] - fd) * (g.values[j] - fd);
      ga2 += g.values[j] * g.values[j];
      gf2 += fd * fd;
    }
    GradCheckResult result;
    result.block = param_list[b].first;
    result.rel_error = std::sqrt(diff2) / std::max(std::sqrt(ga2) + std::sqrt(gf2), 1e-12);
    results.push_back(result);
  }
  return results;
}

std::vector<SelftestCheck> run_selftest(std::uint64_t seed) {
  std::vector<SelftestCheck> checks;
  const auto add = [&checks](const char* name, double value, double threshold) {
    checks.push_back({name, value, threshold, value <= threshold});
  };

  add("tensor_invariance_so3", check_tensor_so3(seed), 1e-5);
  add("tensor_invariance_signed_perm", check_tensor_signed_perm(seed), 1e-12);
  add("codeword_invariance_so3", check_codeword_invariance(seed), 1e-6);
  add("mirror_sign_flip_failures", check_mirror(seed), 0.0);
  add("sampling_oracle_mismatches", check_sampling_oracles(seed), 0.0);
  add("approx_median_blob_error", check_median_blobs(seed), 0.02);
  add("model_roundtrip_error", check_model_roundtrip(seed), 0.0);

  double worst_grad = 0.0;
  for (const GradCheckResult& r : gradient_check_blocks(seed))
    worst_grad = std::max(worst_grad, r.rel_error);
  add("gradient_rel_error", worst_grad, 1e-4);
  return checks;
}

std::string selftest_csv(std::span<const SelftestCheck> checks) {
  std::ostringstream out;
  out << "check,value,threshold,pass\n";
  char buf[64];
  for (const SelftestCheck& check : checks) {
    std::snprintf(buf, sizeof buf, "%.17g", check.value);
    out << check.name << "," << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", check.threshold);
    out << buf << "," << (check.pass ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace rotinv
