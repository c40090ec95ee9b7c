#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rotinv/experiment.hpp"
#include "rotinv/io.hpp"

namespace {

using rotinv::ExperimentConfig;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Options shared by every subcommand; the config file is layered first,
// then --set overrides, then explicit flags.
struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool timing = false;

  ExperimentConfig build() const {
    rotinv::ConfigMap map;
    if (!config_path.empty()) map = rotinv::parse_config_file(config_path);
    rotinv::apply_overrides(map, overrides);
    ExperimentConfig cfg = rotinv::experiment_config_from(map);
    if (seed_given) cfg.seed = seed;
    if (timing) cfg.timing = true;
    cfg.validate();
    return cfg;
  }
};

void add_common(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("--config", args.config_path, "key = value settings file");
  cmd.add_option("--out", args.out_dir, "output directory");
  cmd.add_option("--set", args.overrides, "override a setting, e.g. --set epochs=5")
      ->type_name("KEY=VALUE");
  cmd.add_option("--seed", args.seed, "random seed (overrides the config file)")
      ->trigger_on_parse()
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd.add_flag("--timing", args.timing, "report measured wall_seconds instead of 0.000");
}

int cmd_gen(const CommonArgs& args) {
  const ExperimentConfig cfg = args.build();
  const rotinv::LabeledSet set = rotinv::gen_synthetic_dataset(
      cfg.classes, cfg.train_per_class, cfg.points_per_cloud, cfg.seed);

  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);
  std::ostringstream labels;
  labels << "file,label,class\n";
  std::vector<std::size_t> counter(cfg.classes.size(), 0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const int label = set.labels[i];
    const std::string name =
        cfg.classes[label] + "_" + std::to_string(counter[label]++) + ".xyz";
    rotinv::save_xyz((dir / name).string(), set.clouds[i]);
    labels << name << "," << label << "," << cfg.classes[label] << "\n";
  }
  write_text(dir / "labels.csv", labels.str());
  std::cout << "wrote " << set.size() << " clouds to " << dir.string() << "\n";
  return 0;
}

int cmd_extract(const CommonArgs& args, const std::string& input, const std::string& model_path) {
  const ExperimentConfig cfg = args.build();
  rotinv::NetworkConfig net;
  rotinv::NetworkParams params;
  if (!model_path.empty()) {
    rotinv::LoadedModel model = rotinv::load_model(model_path);
    net = model.config;
    params = std::move(model.params);
  } else {
    net = rotinv::effective_network_config(cfg);
    params = rotinv::make_network_params(net, cfg.seed);
  }

  const rotinv::PointCloud cloud = rotinv::normalize_unit_sphere(
      rotinv::load_cloud(input, cfg.points_per_cloud, cfg.seed));
  const rotinv::HierarchyInputs inputs = rotinv::extract_inputs(cloud, net);
  const rotinv::Tensor codeword = rotinv::codeword_from_inputs(inputs, net, params, nullptr);

  // First-level descriptor rows, one line per (center, neighbor) pair.
  std::ostringstream tensor_csv;
  tensor_csv << "center,neighbor";
  if (net.use_global_descriptor)
    tensor_csv << ",dp,dpm,dsm,cos_alpha,cos_beta";
  tensor_csv << ",l_dpm,l_dpp,l_dps,cos_gamma_p,cos_gamma_m,cos_gamma_s,f_theta\n";
  const std::size_t width = net.descriptor_width();
  for (std::size_t i = 0; i < net.n1; ++i) {
    for (std::size_t j = 0; j < net.k1; ++j) {
      tensor_csv << i << "," << j;
      for (std::size_t c = 0; c < width; ++c)
        tensor_csv << "," << format_value(inputs.x1.values[(i * net.k1 + j) * width + c]);
      tensor_csv << "\n";
    }
  }

  std::ostringstream code_csv;
  for (std::size_t c = 0; c < codeword.values.size(); ++c)
    code_csv << (c == 0 ? "c" : ",c") << c;
  code_csv << "\n";
  for (std::size_t c = 0; c < codeword.values.size(); ++c)
    code_csv << (c == 0 ? "" : ",") << format_value(codeword.values[c]);
  code_csv << "\n";

  const std::filesystem::path dir(args.out_dir);
  write_text(dir / "tensor.csv", tensor_csv.str());
  write_text(dir / "codeword.csv", code_csv.str());
  std::cout << "wrote " << dir.string() << "/tensor.csv and codeword.csv\n";
  return 0;
}

int cmd_train(const CommonArgs& args) {
  const ExperimentConfig cfg = args.build();
  const rotinv::Scenario scenario = rotinv::scenario_from_name(cfg.scenario);
  const rotinv::LabeledSet train_set = rotinv::train_split(cfg);
  const rotinv::TrainResult result = rotinv::train_network(cfg, scenario, train_set);

  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);
  rotinv::save_model((dir / "model.txt").string(), rotinv::effective_network_config(cfg),
                     result.params);

  std::ostringstream log;
  log << "epoch,loss\n";
  for (std::size_t e = 0; e < result.epoch_losses.size(); ++e)
    log << e + 1 << "," << format_value(result.epoch_losses[e]) << "\n";
  write_text(dir / "train_log.csv", log.str());
  std::cout << "wrote " << (dir / "model.txt").string() << "\n";
  return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& model_path) {
  const ExperimentConfig cfg = args.build();
  const rotinv::Scenario scenario = rotinv::scenario_from_name(cfg.scenario);
  const rotinv::LoadedModel model = rotinv::load_model(model_path);
  const rotinv::LabeledSet test_set = rotinv::test_split(cfg);

  std::string csv = rotinv::experiment_csv_header();
  for (const double variance : cfg.noise_variances) {
    const auto start = std::chrono::steady_clock::now();
    const rotinv::EvalResult result = rotinv::evaluate_network(
        cfg, scenario, model.config, model.params, test_set, variance);
    const double wall = cfg.timing ? seconds_since(start) : 0.0;
    csv += rotinv::experiment_csv_row(cfg.scenario, variance, result.report.accuracy,
                                      result.report.mean_average_precision, cfg.seed, wall);
  }
  write_text(std::filesystem::path(args.out_dir) / "results.csv", csv);
  std::cout << csv;
  return 0;
}

int cmd_retrieve(const CommonArgs& args, const std::string& model_path) {
  const ExperimentConfig cfg = args.build();
  const rotinv::Scenario scenario = rotinv::scenario_from_name(cfg.scenario);
  const rotinv::LoadedModel model = rotinv::load_model(model_path);
  const rotinv::LabeledSet test_set = rotinv::test_split(cfg);

  const rotinv::EvalResult result =
      rotinv::evaluate_network(cfg, scenario, model.config, model.params, test_set);
  char row[160];
  std::snprintf(row, sizeof row, "%s,%.6f,%.6f,%llu\n", cfg.scenario.c_str(),
                result.report.mean_average_precision, result.report.precision_at_n,
                static_cast<unsigned long long>(cfg.seed));
  const std::string csv = std::string("scenario,mAP,P_at_N,seed\n") + row;
  write_text(std::filesystem::path(args.out_dir) / "retrieval.csv", csv);
  std::cout << csv;
  return 0;
}

int cmd_noise_bench(const CommonArgs& args) {
  const ExperimentConfig cfg = args.build();
  const std::vector<rotinv::CenterMode> modes = {rotinv::CenterMode::kGeometricMedian,
                                                 rotinv::CenterMode::kArithmeticMean};
  const auto start = std::chrono::steady_clock::now();
  const std::vector<rotinv::NoiseBenchRow> rows =
      rotinv::noise_bench(cfg, cfg.noise_variances, modes);
  const double wall = cfg.timing ? seconds_since(start) : 0.0;

  std::string csv = rotinv::experiment_csv_header();
  for (const rotinv::NoiseBenchRow& row : rows) {
    const std::string name = row.mode == rotinv::CenterMode::kGeometricMedian
                                 ? "noise/geometric"
                                 : "noise/mean";
    csv += rotinv::experiment_csv_row(name, row.variance, row.accuracy,
                                      row.mean_average_precision, cfg.seed, wall);
  }
  write_text(std::filesystem::path(args.out_dir) / "noise.csv", csv);
  std::cout << csv;
  return 0;
}

int cmd_selftest(const CommonArgs& args) {
  const ExperimentConfig cfg = args.build();
  const std::vector<rotinv::SelftestCheck> checks = rotinv::run_selftest(cfg.seed);
  write_text(std::filesystem::path(args.out_dir) / "selftest.csv", rotinv::selftest_csv(checks));

  bool all_pass = true;
  for (const rotinv::SelftestCheck& check : checks) {
    std::printf("[%s] %-32s value=%.3g threshold=%.3g\n", check.pass ? "PASS" : "FAIL",
                check.name.c_str(), check.value, check.threshold);
    all_pass = all_pass && check.pass;
  }
  if (!all_pass) {
    std::cerr << "rotinv: selftest failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation-invariant point cloud analysis toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string input_path;
  std::string model_path;

  CLI::App* gen = app.add_subcommand("gen", "generate a labeled synthetic dataset");
  add_common(*gen, args);

  CLI::App* extract = app.add_subcommand(
      "extract", "rotation-invariant descriptor tensor and codeword for one cloud");
  add_common(*extract, args);
  extract->add_option("--input", input_path, "point cloud file (.off, .ply, .xyz, .txt)")
      ->required();
  extract->add_option("--model", model_path, "trained model for the codeword");

  CLI::App* train = app.add_subcommand("train", "train a classifier on the synthetic dataset");
  add_common(*train, args);

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a trained model");
  add_common(*eval_cmd, args);
  eval_cmd->add_option("--model", model_path, "model file from train")->required();

  CLI::App* retrieve = app.add_subcommand("retrieve", "leave-one-out retrieval metrics");
  add_common(*retrieve, args);
  retrieve->add_option("--model", model_path, "model file from train")->required();

  CLI::App* noise = app.add_subcommand(
      "noise-bench", "accuracy under test noise for both neighborhood center modes");
  add_common(*noise, args);

  CLI::App* selftest = app.add_subcommand("selftest", "run the invariance and oracle suite");
  add_common(*selftest, args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(args);
    if (extract->parsed()) return cmd_extract(args, input_path, model_path);
    if (train->parsed()) return cmd_train(args);
    if (eval_cmd->parsed()) return cmd_eval(args, model_path);
    if (retrieve->parsed()) return cmd_retrieve(args, model_path);
    if (noise->parsed()) return cmd_noise_bench(args);
    if (selftest->parsed()) return cmd_selftest(args);
  } catch (const std::exception& e) {
    std::cerr << "rotinv: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
