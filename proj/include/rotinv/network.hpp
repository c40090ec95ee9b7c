#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rotinv/descriptors.hpp"
#include "rotinv/geometry.hpp"
#include "rotinv/median.hpp"
#include "rotinv/nn.hpp"

namespace rotinv {

struct NetworkConfig {
  std::size_t n1 = 512;  // layer-1 sample count
  std::size_t n2 = 128;  // layer-2 sample count
  std::size_t k1 = 16;
  std::size_t k2 = 32;
  std::size_t k3 = 64;
  double r1 = 0.2;  // unit-sphere units
  double r2 = 0.4;
  std::size_t channels = 128;  // feature width C
  std::size_t num_classes = 5;
  bool use_global_descriptor = true;  // false: inputs keep only the 7 local components
  bool use_relation_weights = true;   // false: plain shared-MLP + max-pool features
  CenterMode center_mode = CenterMode::kGeometricMedian;
  // num_subsets and seed are used as given; subset_size is recomputed per layer
  // as round(0.9 K_layer) because neighborhood sizes differ across layers.
  MedianParams median_params;

  std::size_t descriptor_width() const { return use_global_descriptor ? 12 : 7; }
  // Enforces n1 > n2 >= 1, k1 < k2 < k3, 0 < r1 < r2 and positive widths.
  void validate() const;
};

// Geometry stage of the forward pass. Everything here is a constant with
// respect to the parameters, so gradients never flow past these values.
struct HierarchyInputs {
  std::vector<std::size_t> idx1;   // N1 sampled indices into the input cloud
  Tensor x1;                       // N1 x K1 x D descriptor block
  Tensor rel1;                     // N1 x 2*N1 relation rows
  std::vector<Neighborhood> nbh2;  // layer-2 groups, indices into the N1 centers
  Tensor x2;                       // N2 x K2 x D
  Tensor rel2;                     // N2 x 2*N2
  std::vector<Neighborhood> nbh3;  // single layer-3 group, indices into the N2 centers
  Tensor x3;                       // 1 x K3 x D
};

struct NetworkParams {
  Mlp shared1;  // D -> 32 -> 64 -> C
  Mlp rel1;     // 2*N1 -> 64 -> C, sigmoid output
  Mlp branch2;  // D -> 64 -> C lift for the layer-2 descriptor block
  Mlp fusion2;  // 2C -> 2C -> C over concatenated grouped features
  Mlp rel2;     // 2*N2 -> 64 -> C, sigmoid output
  Mlp branch3;  // D -> 64 -> C
  Mlp fusion3;  // 2C -> 2C -> C, max-pooled over K3 into the codeword
  Mlp head;     // C -> 64 -> num_classes, raw logits
};

NetworkParams make_network_params(const NetworkConfig& cfg, std::uint64_t seed);

// Same layout with every tensor zeroed; the gradient accumulator shape.
NetworkParams zeros_like(const NetworkParams& params);

// Fixed enumeration order shared by the optimizer and the model file.
std::vector<std::pair<std::string, Tensor*>> named_tensors(NetworkParams& params);
std::vector<std::pair<std::string, const Tensor*>> named_tensors(const NetworkParams& params);

struct RrcCache {
  MlpCache shared;
  PoolResult pool;
  MlpCache relation;
  Tensor f;  // pooled features before gating
  Tensor w;  // gate values, empty when gating is disabled
};

// Per-row MLP over the relation rows with a sigmoid output, W in (0,1)^{N x C}.
Tensor relation_weight(const Tensor& rel_rows, const Mlp& relation, MlpCache* cache = nullptr);

// F = maxpool_K(shared(x)); returns F + W o F, or F alone when gating is off.
Tensor region_relation_conv(const Tensor& x, const Tensor& rel_rows, const Mlp& shared,
                            const Mlp& relation, bool use_relation_weights,
                            RrcCache* cache = nullptr);

// Accumulates into shared_grads/rel_grads and returns the gradient w.r.t. x.
Tensor region_relation_conv_backward(const Tensor& dout, const Mlp& shared, const Mlp& relation,
                                     const RrcCache& cache, bool use_relation_weights,
                                     Mlp& shared_grads, Mlp& rel_grads);

// Samples, groups, and extracts descriptor blocks for all three layers.
// Throws "insufficient points" when the cloud has fewer than n1 points.
HierarchyInputs extract_inputs(const PointCloud& cloud, const NetworkConfig& cfg);

struct ForwardCache {
  RrcCache rrc1;
  MlpCache branch2;
  RrcCache rrc2;
  MlpCache branch3;
  MlpCache fusion3;
  PoolResult pool3;
};

// Differentiable stage: hierarchy inputs to the 1 x C codeword.
Tensor codeword_from_inputs(const HierarchyInputs& in, const NetworkConfig& cfg,
                            const NetworkParams& params, ForwardCache* cache = nullptr);

void codeword_backward(const Tensor& dcodeword, const HierarchyInputs& in,
                       const NetworkConfig& cfg, const NetworkParams& params,
                       const ForwardCache& cache, NetworkParams& grads);

// extract_inputs + codeword_from_inputs on a normalized cloud.
Tensor hierarchical_forward(const PointCloud& cloud, const NetworkConfig& cfg,
                            const NetworkParams& params);

// Dense head over one codeword per row: B x C -> B x num_classes logits.
Tensor classify(const Tensor& codewords, const Mlp& head);

// Gallery indices by descending cosine similarity, ties by ascending index.
// A zero vector on either side scores similarity 0.
std::vector<std::size_t> retrieve(const Tensor& query, std::span<const Tensor> gallery);

// Mean loss over the batch; accumulates parameter gradients when grads != null.
double batch_loss_and_grads(std::span<const HierarchyInputs> inputs, std::span<const int> labels,
                            const NetworkConfig& cfg, const NetworkParams& params,
                            NetworkParams* grads);

// Extract + forward + loss + backward + one Adam update. Returns the loss.
double train_step(std::span<const PointCloud> clouds, std::span<const int> labels,
                  const NetworkConfig& cfg, NetworkParams& params, AdamState& state,
                  double lr = 0.001);

// Versioned text model format, value-exact round trip.
void save_model(const std::string& path, const NetworkConfig& cfg, const NetworkParams& params);

struct LoadedModel {
  NetworkConfig config;
  NetworkParams params;
};

LoadedModel load_model(const std::string& path);

}  // namespace rotinv
