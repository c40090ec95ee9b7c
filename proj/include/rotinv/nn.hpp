#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rotinv {

// Dense row-major array. The last dimension is the feature axis; every op
// below treats the leading dimensions as a flat list of rows.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims);

  std::size_t size() const { return values.size(); }
  std::size_t last_dim() const { return shape.empty() ? 0 : shape.back(); }
  std::size_t rows() const;  // product of all leading dimensions

  double& at2(std::size_t r, std::size_t c) { return values[r * shape[1] + c]; }
  double at2(std::size_t r, std::size_t c) const { return values[r * shape[1] + c]; }
};

bool all_finite(const Tensor& t);

enum class Activation { kIdentity, kRelu, kSigmoid };

struct DenseParams {
  Tensor weight;  // in x out
  Tensor bias;    // out
};

// Dense stack applied along the last axis of its input; one weight set is
// shared across every leading position (per-point MLP).
struct Mlp {
  std::vector<DenseParams> layers;
  Activation hidden = Activation::kRelu;
  Activation output = Activation::kIdentity;

  std::size_t input_width() const;
  std::size_t output_width() const;
};

// Layer widths front to back, e.g. {12, 32, 64, 128}.
Mlp make_mlp(std::span<const std::size_t> widths, Activation hidden, Activation output);

// Glorot uniform: weights in +-sqrt(6 / (fan_in + fan_out)), biases zero.
void glorot_init(DenseParams& layer, std::mt19937_64& rng);
void glorot_init(Mlp& mlp, std::mt19937_64& rng);

// Forward/backward caches: inputs[l] is the input to layer l, pre[l] its
// pre-activation output. inputs has one extra slot holding the final output.
struct MlpCache {
  std::vector<Tensor> inputs;
  std::vector<Tensor> pre;
};

// Applies the stack along the last axis. The cache is required for backward.
Tensor shared_mlp_forward(const Tensor& x, const Mlp& mlp, MlpCache* cache = nullptr);

// Accumulates parameter gradients into `grads` (same layout as `mlp`, zero or
// previously accumulated) and returns the gradient with respect to the input.
Tensor shared_mlp_backward(const Tensor& dout, const Mlp& mlp, const MlpCache& cache,
                           Mlp& grads);

Mlp zeros_like(const Mlp& mlp);

struct PoolResult {
  Tensor pooled;                   // N x C
  std::vector<std::size_t> argmax;  // per (n, c): neighbor index, ties to smallest
};

// x: N x K x C, maximum over the K axis.
PoolResult max_pool_neighbors(const Tensor& x);

// Routes the pooled gradient back to the argmax positions; other slots get 0.
Tensor max_pool_backward(const Tensor& dpooled, const PoolResult& pool, std::size_t k);

struct LossResult {
  double loss = 0.0;
  Tensor grad;  // B x M, (softmax - onehot) / B
};

// Mean cross-entropy over the batch, max-subtraction stabilized.
LossResult softmax_cross_entropy(const Tensor& logits, std::span<const int> labels);

// First/second moment slots indexed by parameter-enumeration order; allocated
// lazily on the first step, so one state must always see the same tensor list.
struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::int64_t step = 0;
};

void adam_step(std::span<Tensor* const> params, std::span<const Tensor* const> grads,
               AdamState& state, double lr = 0.001, double beta1 = 0.9, double beta2 = 0.999,
               double eps = 1e-8);

}  // namespace rotinv
