#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rotinv/config.hpp"
#include "rotinv/dataset.hpp"
#include "rotinv/metrics.hpp"
#include "rotinv/network.hpp"

namespace rotinv {

enum class RotationMode { kNone, kAzimuthal, kSo3 };

struct Scenario {
  RotationMode train_rotation = RotationMode::kNone;
  RotationMode test_rotation = RotationMode::kNone;
};

// Accepts "z", "SO3", "so3", or "none" on each side of the slash, e.g. "z/SO3".
Scenario scenario_from_name(const std::string& name);
std::string scenario_name(const Scenario& scenario);

struct ExperimentConfig {
  std::vector<std::string> classes = shape_class_names();
  std::size_t train_per_class = 40;
  std::size_t test_per_class = 20;
  std::size_t points_per_cloud = 256;
  NetworkConfig network;
  std::size_t epochs = 60;
  std::size_t batch_size = 6;
  double lr = 0.001;
  std::uint64_t seed = 0;
  double scale_min = 0.8;
  double scale_max = 1.25;
  double jitter_sigma = 0.01;
  std::vector<double> noise_variances = {0.0, 0.0005, 0.001, 0.002, 0.004};
  std::string scenario = "z/z";
  bool timing = false;  // report measured wall_seconds instead of 0.000

  void validate() const;
};

// Builds a config from parsed key = value text; unknown keys are errors.
ExperimentConfig experiment_config_from(const ConfigMap& map);

// Network config with num_classes and the median seed filled in from the
// experiment settings.
NetworkConfig effective_network_config(const ExperimentConfig& cfg);

// Incremented by the harness: augmentation during training batches, rotation
// of test clouds during evaluation. Tests assert which phases touch which.
struct HookCounters {
  std::size_t train_augmentations = 0;
  std::size_t test_rotations = 0;
};
HookCounters& hook_counters();

LabeledSet train_split(const ExperimentConfig& cfg);
LabeledSet test_split(const ExperimentConfig& cfg);

// Training-time transform for one cloud: scenario rotation, then random
// scale and jitter, then renormalization.
PointCloud augment_for_training(const PointCloud& cloud, RotationMode mode,
                                const ExperimentConfig& cfg, std::uint64_t seed);

struct TrainResult {
  NetworkParams params;
  std::vector<double> epoch_losses;
};

TrainResult train_network(const ExperimentConfig& cfg, const Scenario& scenario,
                          const LabeledSet& train_set);

struct EvalResult {
  MetricReport report;
  std::vector<int> predictions;
  std::vector<Tensor> codewords;
};

// Applies optional test noise, the scenario test rotation, renormalizes,
// then classifies and runs leave-one-out retrieval over the test codewords.
EvalResult evaluate_network(const ExperimentConfig& cfg, const Scenario& scenario,
                            const NetworkConfig& net_cfg, const NetworkParams& params,
                            const LabeledSet& test_set, double noise_variance = 0.0);

MetricReport run_scenario(const ExperimentConfig& cfg, const Scenario& scenario);

struct NoiseBenchRow {
  CenterMode mode = CenterMode::kGeometricMedian;
  double variance = 0.0;
  double accuracy = 0.0;
  double mean_average_precision = 0.0;
};

// Trains once per center mode on clean data, then evaluates each mode at
// every noise variance.
std::vector<NoiseBenchRow> noise_bench(const ExperimentConfig& cfg,
                                       std::span<const double> variances,
                                       std::span<const CenterMode> modes);

// Fixed-format rows so equal numbers always serialize to equal bytes.
std::string experiment_csv_header();
std::string experiment_csv_row(const std::string& scenario, double variance, double accuracy,
                               double mean_average_precision, std::uint64_t seed,
                               double wall_seconds);

struct SelftestCheck {
  std::string name;
  double value = 0.0;      // measured quantity, smaller is better
  double threshold = 0.0;  // pass when value <= threshold
  bool pass = false;
};

std::vector<SelftestCheck> run_selftest(std::uint64_t seed);
std::string selftest_csv(std::span<const SelftestCheck> checks);

struct GradCheckResult {
  std::string block;
  double rel_error = 0.0;
};

// Central finite differences against the analytic gradients on a miniature
// network (32-point clouds, 8 channels), one result per parameter tensor.
std::vector<GradCheckResult> gradient_check_blocks(std::uint64_t seed);

}  // namespace rotinv
