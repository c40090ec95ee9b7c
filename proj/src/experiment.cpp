#include "rotinv/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rotinv {

namespace {

// Seed salts for the independent random streams of one experiment.
enum : std::uint64_t {
  kSaltParams = 1,
  kSaltShuffle = 2,
  kSaltAugment = 3,
  kSaltTestNoise = 5,
  kSaltTestRotation = 6,
  kSaltMedian = 7,
  kSaltTrainSplit = 101,
  kSaltTestSplit = 202,
};

RotationMode rotation_mode_from(const std::string& word, const std::string& full) {
  if (word == "z" || word == "Z") return RotationMode::kAzimuthal;
  if (word == "so3" || word == "SO3" || word == "SO(3)") return RotationMode::kSo3;
  if (word == "none") return RotationMode::kNone;
  throw std::invalid_argument("scenario_from_name: bad rotation '" + word + "' in " + full);
}

const char* rotation_mode_name(RotationMode mode) {
  switch (mode) {
    case RotationMode::kNone: return "none";
    case RotationMode::kAzimuthal: return "z";
    case RotationMode::kSo3: return "SO3";
  }
  return "none";
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::size_t to_size(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad count for " + key + ": " + value);
  }
  if (pos != value.size()) throw std::runtime_error("config: bad count for " + key + ": " + value);
  return static_cast<std::size_t>(v);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad number for " + key + ": " + value);
  }
  if (pos != value.size()) throw std::runtime_error("config: bad number for " + key + ": " + value);
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw std::runtime_error("config: bad flag for " + key + ": " + value);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    const auto begin = item.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const auto end = item.find_last_not_of(" \t");
    out.push_back(item.substr(begin, end - begin + 1));
  }
  return out;
}

}  // namespace

Scenario scenario_from_name(const std::string& name) {
  const auto slash = name.find('/');
  if (slash == std::string::npos)
    throw std::invalid_argument("scenario_from_name: expected train/test, got " + name);
  Scenario s;
  s.train_rotation = rotation_mode_from(name.substr(0, slash), name);
  s.test_rotation = rotation_mode_from(name.substr(slash + 1), name);
  return s;
}

std::string scenario_name(const Scenario& scenario) {
  return std::string(rotation_mode_name(scenario.train_rotation)) + "/" +
         rotation_mode_name(scenario.test_rotation);
}

void ExperimentConfig::validate() const {
  if (classes.empty()) throw std::invalid_argument("ExperimentConfig: no classes");
  if (train_per_class < 1 || test_per_class < 1 || points_per_cloud < 1)
    throw std::invalid_argument("ExperimentConfig: counts must be >= 1");
  // epochs = 0 is allowed: evaluate an untrained network.
  if (batch_size < 1) throw std::invalid_argument("ExperimentConfig: batch_size must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("ExperimentConfig: lr must be > 0");
  if (!(scale_min > 0.0 && scale_min <= scale_max))
    throw std::invalid_argument("ExperimentConfig: requires 0 < scale_min <= scale_max");
  if (jitter_sigma < 0.0) throw std::invalid_argument("ExperimentConfig: jitter_sigma must be >= 0");
  for (double v : noise_variances)
    if (v < 0.0) throw std::invalid_argument("ExperimentConfig: variance must be >= 0");
  scenario_from_name(scenario);
  effective_network_config(*this).validate();
}

ExperimentConfig experiment_config_from(const ConfigMap& map) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : map) {
    if (key == "classes") {
      cfg.classes = split_list(value);
    } else if (key == "train_per_class") cfg.train_per_class = to_size(key, value);
    else if (key == "test_per_class") cfg.test_per_class = to_size(key, value);
    else if (key == "points_per_cloud") cfg.points_per_cloud = to_size(key, value);
    else if (key == "n1") cfg.network.n1 = to_size(key, value);
    else if (key == "n2") cfg.network.n2 = to_size(key, value);
    else if (key == "k1") cfg.network.k1 = to_size(key, value);
    else if (key == "k2") cfg.network.k2 = to_size(key, value);
    else if (key == "k3") cfg.network.k3 = to_size(key, value);
    else if (key == "r1") cfg.network.r1 = to_double(key, value);
    else if (key == "r2") cfg.network.r2 = to_double(key, value);
    else if (key == "channels") cfg.network.channels = to_size(key, value);
    else if (key == "use_global_descriptor") cfg.network.use_global_descriptor = to_bool(key, value);
    else if (key == "use_relation_weights") cfg.network.use_relation_weights = to_bool(key, value);
    else if (key == "center_mode") {
      if (value == "geometric") cfg.network.center_mode = CenterMode::kGeometricMedian;
      else if (value == "mean") cfg.network.center_mode = CenterMode::kArithmeticMean;
      else throw std::runtime_error("config: center_mode must be geometric or mean, got " + value);
    } else if (key == "median_subsets") cfg.network.median_params.num_subsets = to_size(key, value);
    else if (key == "epochs") cfg.epochs = to_size(key, value);
    else if (key == "batch_size") cfg.batch_size = to_size(key, value);
    else if (key == "lr") cfg.lr = to_double(key, value);
    else if (key == "seed") cfg.seed = to_size(key, value);
    else if (key == "scale_min") cfg.scale_min = to_double(key, value);
    else if (key == "scale_max") cfg.scale_max = to_double(key, value);
    else if (key == "jitter_sigma") cfg.jitter_sigma = to_double(key, value);
    else if (key == "noise_variances") {
      cfg.noise_variances.clear();
      for (const std::string& item : split_list(value))
        cfg.noise_variances.push_back(to_double(key, item));
    } else if (key == "scenario") cfg.scenario = value;
    else if (key == "timing") cfg.timing = to_bool(key, value);
    else throw std::runtime_error("config: unknown key " + key);
  }
  cfg.validate();
  return cfg;
}

NetworkConfig effective_network_config(const ExperimentConfig& cfg) {
  NetworkConfig net = cfg.network;
  net.num_classes = cfg.classes.size();
  net.median_params.seed = mix_seed(cfg.seed, kSaltMedian);
  return net;
}

HookCounters& hook_counters() {
  static HookCounters counters;
  return counters;
}

LabeledSet train_split(const ExperimentConfig& cfg) {
  return gen_synthetic_dataset(cfg.classes, cfg.train_per_class, cfg.points_per_cloud,
                               mix_seed(cfg.seed, kSaltTrainSplit));
}

LabeledSet test_split(const ExperimentConfig& cfg) {
  return gen_synthetic_dataset(cfg.classes, cfg.test_per_class, cfg.points_per_cloud,
                               mix_seed(cfg.seed, kSaltTestSplit));
}

PointCloud augment_for_training(const PointCloud& cloud, RotationMode mode,
                                const ExperimentConfig& cfg, std::uint64_t seed) {
  PointCloud out = cloud;
  if (mode == RotationMode::kAzimuthal) {
    std::mt19937_64 rng(mix_seed(seed, 1));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    out = apply_rotation(out, azimuthal_rotation(angle(rng)));
  } else if (mode == RotationMode::kSo3) {
    out = apply_rotation(out, random_rotation_so3(mix_seed(seed, 1)));
  }
  out = augment_scale_jitter(out, cfg.scale_min, cfg.scale_max, cfg.jitter_sigma,
                             mix_seed(seed, 2));
  out = normalize_unit_sphere(out);
  ++hook_counters().train_augmentations;
  return out;
}

TrainResult train_network(const ExperimentConfig& cfg, const Scenario& scenario,
                          const LabeledSet& train_set) {
  cfg.validate();
  if (train_set.size() == 0) throw std::invalid_argument("train_network: empty training set");
  const NetworkConfig net_cfg = effective_network_config(cfg);

  TrainResult result;
  result.params = make_network_params(net_cfg, mix_seed(cfg.seed, kSaltParams));
  AdamState state;

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, kSaltShuffle, epoch));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      std::vector<PointCloud> clouds;
      std::vector<int> labels;
      clouds.reserve(stop - start);
      for (std::size_t b = start; b < stop; ++b) {
        const std::size_t idx = order[b];
        const std::uint64_t aug_seed =
            mix_seed(cfg.seed, kSaltAugment, epoch * train_set.size() + idx);
        clouds.push_back(
            augment_for_training(train_set.clouds[idx], scenario.train_rotation, cfg, aug_seed));
        labels.push_back(train_set.labels[idx]);
      }
      loss_sum += train_step(clouds, labels, net_cfg, result.params, state, cfg.lr);
      ++batches;
    }
    result.epoch_losses.push_back(loss_sum / static_cast<double>(batches));
  }
  return result;
}

EvalResult evaluate_network(const ExperimentConfig& cfg, const Scenario& scenario,
                            const NetworkConfig& net_cfg, const NetworkParams& params,
                            const LabeledSet& test_set, double noise_variance) {
  if (test_set.size() == 0) throw std::invalid_argument("evaluate_network: empty test set");

  const std::size_t count = test_set.size();
  EvalResult result;
  result.codewords.reserve(count);

  Tensor codes({count, net_cfg.channels});
  for (std::size_t i = 0; i < count; ++i) {
    PointCloud cloud = test_set.clouds[i];
    if (noise_variance > 0.0)
      cloud = add_gaussian_noise(cloud, noise_variance, mix_seed(cfg.seed, kSaltTestNoise, i));
    if (scenario.test_rotation == RotationMode::kAzimuthal) {
      std::mt19937_64 rng(mix_seed(cfg.seed, kSaltTestRotation, i));
      std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
      cloud = apply_rotation(cloud, azimuthal_rotation(angle(rng)));
      ++hook_counters().test_rotations;
    } else if (scenario.test_rotation == RotationMode::kSo3) {
      cloud = apply_rotation(cloud, random_rotation_so3(mix_seed(cfg.seed, kSaltTestRotation, i)));
      ++hook_counters().test_rotations;
    }
    cloud = normalize_unit_sphere(cloud);

    const Tensor cw = codeword_from_inputs(extract_inputs(cloud, net_cfg), net_cfg, params);
    std::copy_n(cw.values.data(), net_cfg.channels, codes.values.data() + i * net_cfg.channels);
    result.codewords.push_back(cw);
  }

  const Tensor logits = classify(codes, params.head);
  result.predictions.resize(count);
  const std::size_t m = logits.shape[1];
  for (std::size_t i = 0; i < count; ++i) {
    const double* row = logits.values.data() + i * m;
    result.predictions[i] =
        static_cast<int>(std::max_element(row, row + m) - row);
  }

  result.report.accuracy = accuracy(result.predictions, test_set.labels);
  result.report.per_class_accuracy =
      per_class_accuracy(result.predictions, test_set.labels, net_cfg.num_classes);

  std::vector<std::vector<std::size_t>> rankings(count);
  std::vector<std::vector<char>> relevance(count);
  for (std::size_t q = 0; q < count; ++q) {
    std::vector<std::size_t> ranked = retrieve(result.codewords[q], result.codewords);
    std::erase(ranked, q);
    rankings[q] = std::move(ranked);
    relevance[q].assign(count, 0);
    for (std::size_t g = 0; g < count; ++g)
      if (g != q && test_set.labels[g] == test_set.labels[q]) relevance[q][g] = 1;
  }
  const RetrievalMetrics retrieval = retrieval_metrics(rankings, relevance);
  result.report.mean_average_precision = retrieval.mean_average_precision;
  result.report.precision_at_n = retrieval.precision_at_n;
  return result;
}

MetricReport run_scenario(const ExperimentConfig& cfg, const Scenario& scenario) {
  const LabeledSet train_set = train_split(cfg);
  const LabeledSet test_set = test_split(cfg);
  const NetworkConfig net_cfg = effective_network_config(cfg);
  const TrainResult trained = train_network(cfg, scenario, train_set);
  return evaluate_network(cfg, scenario, net_cfg, trained.params, test_set).report;
}

std::vector<NoiseBenchRow> noise_bench(const ExperimentConfig& cfg,
                                       std::span<const double> variances,
                                       std::span<const CenterMode> modes) {
  if (variances.empty()) throw std::invalid_argument("noise_bench: no variances");
  if (modes.empty()) throw std::invalid_argument("noise_bench: no modes");
  const Scenario scenario = scenario_from_name(cfg.scenario);
  const LabeledSet train_set = train_split(cfg);
  const LabeledSet test_set = test_split(cfg);

  std::vector<NoiseBenchRow> rows;
  for (const CenterMode mode : modes) {
    ExperimentConfig mode_cfg = cfg;
    mode_cfg.network.center_mode = mode;
    const NetworkConfig net_cfg = effective_network_config(mode_cfg);
    const TrainResult trained = train_network(mode_cfg, scenario, train_set);
    for (const double variance : variances) {
      const EvalResult eval =
          evaluate_network(mode_cfg, scenario, net_cfg, trained.params, test_set, variance);
      NoiseBenchRow row;
      row.mode = mode;
      row.variance = variance;
      row.accuracy = eval.report.accuracy;
      row.mean_average_precision = eval.report.mean_average_precision;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string experiment_csv_header() { return "scenario,variance,accuracy,mAP,seed,wall_seconds\n"; }

std::string experiment_csv_row(const std::string& scenario, double variance, double accuracy,
                               double mean_average_precision, std::uint64_t seed,
                               double wall_seconds) {
  std::ostringstream row;
  row << scenario << "," << format("%.6g", variance) << "," << format("%.6f", accuracy) << ","
      << format("%.6f", mean_average_precision) << "," << seed << ","
      << format("%.3f", wall_seconds) << "\n";
  return row.str();
}

}  // namespace rotinv
