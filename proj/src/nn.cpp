#include "rotinv/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rotinv {

namespace {

double activate(double x, Activation a) {
  switch (a) {
    case Activation::kIdentity: return x;
    case Activation::kRelu: return x > 0.0 ? x : 0.0;
    case Activation::kSigmoid: return 1.0 / (1.0 + std::exp(-x));
  }
  return x;
}

// Derivative with respect to the pre-activation value.
double activate_grad(double pre, Activation a) {
  switch (a) {
    case Activation::kIdentity: return 1.0;
    case Activation::kRelu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::kSigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-pre));
      return s * (1.0 - s);
    }
  }
  return 1.0;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> dims) : shape(std::move(dims)) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  values.assign(n, 0.0);
}

std::size_t Tensor::rows() const {
  if (shape.empty()) return 0;
  std::size_t n = 1;
  for (std::size_t i = 0; i + 1 < shape.size(); ++i) n *= shape[i];
  return n;
}

bool all_finite(const Tensor& t) {
  return std::all_of(t.values.begin(), t.values.end(),
                     [](double v) { return std::isfinite(v); });
}

std::size_t Mlp::input_width() const {
  if (layers.empty()) throw std::logic_error("Mlp: no layers");
  return layers.front().weight.shape[0];
}

std::size_t Mlp::output_width() const {
  if (layers.empty()) throw std::logic_error("Mlp: no layers");
  return layers.back().weight.shape[1];
}

Mlp make_mlp(std::span<const std::size_t> widths, Activation hidden, Activation output) {
  if (widths.size() < 2) throw std::invalid_argument("make_mlp: need at least two widths");
  Mlp mlp;
  mlp.hidden = hidden;
  mlp.output = output;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    DenseParams layer;
    layer.weight = Tensor({widths[i], widths[i + 1]});
    layer.bias = Tensor({widths[i + 1]});
    mlp.layers.push_back(std::move(layer));
  }
  return mlp;
}

void glorot_init(DenseParams& layer, std::mt19937_64& rng) {
  const double fan_in = static_cast<double>(layer.weight.shape[0]);
  const double fan_out = static_cast<double>(layer.weight.shape[1]);
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& w : layer.weight.values) w = dist(rng);
  std::fill(layer.bias.values.begin(), layer.bias.values.end(), 0.0);
}

void glorot_init(Mlp& mlp, std::mt19937_64& rng) {
  for (DenseParams& layer : mlp.layers) glorot_init(layer, rng);
}

Tensor shared_mlp_forward(const Tensor& x, const Mlp& mlp, MlpCache* cache) {
  if (mlp.layers.empty()) throw std::invalid_argument("shared_mlp_forward: no layers");
  if (x.last_dim() != mlp.input_width())
    throw std::invalid_argument("shared_mlp_forward: input width mismatch");

  if (cache) {
    cache->inputs.clear();
    cache->pre.clear();
  }

  Tensor cur = x;
  for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
    const DenseParams& layer = mlp.layers[l];
    const std::size_t in = layer.weight.shape[0];
    const std::size_t out = layer.weight.shape[1];
    const std::size_t n = cur.rows();

    std::vector<std::size_t> out_shape = cur.shape;
    out_shape.back() = out;
    Tensor pre(std::move(out_shape));
    for (std::size_t r = 0; r < n; ++r) {
      const double* xr = cur.values.data() + r * in;
      double* yr = pre.values.data() + r * out;
      for (std::size_t c = 0; c < out; ++c) yr[c] = layer.bias.values[c];
      for (std::size_t i = 0; i < in; ++i) {
        const double xv = xr[i];
        if (xv == 0.0) continue;
        const double* wrow = layer.weight.values.data() + i * out;
        for (std::size_t c = 0; c < out; ++c) yr[c] += xv * wrow[c];
      }
    }

    const Activation act = (l + 1 == mlp.layers.size()) ? mlp.output : mlp.hidden;
    Tensor post = pre;
    for (double& v : post.values) v = activate(v, act);

    if (cache) {
      cache->inputs.push_back(std::move(cur));
      cache->pre.push_back(std::move(pre));
    }
    cur = std::move(post);
  }
  if (cache) cache->inputs.push_back(cur);
  return cur;
}

Mlp zeros_like(const Mlp& mlp) {
  Mlp z;
  z.hidden = mlp.hidden;
  z.output = mlp.output;
  for (const DenseParams& layer : mlp.layers) {
    DenseParams zl;
    zl.weight = Tensor(layer.weight.shape);
    zl.bias = Tensor(layer.bias.shape);
    z.layers.push_back(std::move(zl));
  }
  return z;
}

Tensor shared_mlp_backward(const Tensor& dout, const Mlp& mlp, const MlpCache& cache,
                           Mlp& grads) {
  if (cache.pre.size() != mlp.layers.size() || cache.inputs.size() != mlp.layers.size() + 1)
    throw std::invalid_argument("shared_mlp_backward: cache does not match the stack");
  if (grads.layers.size() != mlp.layers.size())
    throw std::invalid_argument("shared_mlp_backward: gradient layout mismatch");

  Tensor delta = dout;
  for (std::size_t li = mlp.layers.size(); li-- > 0;) {
    const DenseParams& layer = mlp.layers[li];
    const Tensor& pre = cache.pre[li];
    const Tensor& input = cache.inputs[li];
    const std::size_t in = layer.weight.shape[0];
    const std::size_t out = layer.weight.shape[1];
    const std::size_t n = pre.rows();
    if (delta.values.size() != pre.values.size())
      throw std::invalid_argument("shared_mlp_backward: upstream gradient shape mismatch");

    const Activation act = (li + 1 == mlp.layers.size()) ? mlp.output : mlp.hidden;
    for (std::size_t idx = 0; idx < delta.values.size(); ++idx)
      delta.values[idx] *= activate_grad(pre.values[idx], act);

    DenseParams& g = grads.layers[li];
    for (std::size_t r = 0; r < n; ++r) {
      const double* xr = input.values.data() + r * in;
      const double* dr = delta.values.data() + r * out;
      for (std::size_t c = 0; c < out; ++c) g.bias.values[c] += dr[c];
      for (std::size_t i = 0; i < in; ++i) {
        const double xv = xr[i];
        if (xv == 0.0) continue;
        double* grow = g.weight.values.data() + i * out;
        for (std::size_t c = 0; c < out; ++c) grow[c] += xv * dr[c];
      }
    }

    Tensor dinput(input.shape);
    for (std::size_t r = 0; r < n; ++r) {
      const double* dr = delta.values.data() + r * out;
      double* dx = dinput.values.data() + r * in;
      for (std::size_t i = 0; i < in; ++i) {
        const double* wrow = layer.weight.values.data() + i * out;
        double acc = 0.0;
        for (std::size_t c = 0; c < out; ++c) acc += wrow[c] * dr[c];
        dx[i] = acc;
      }
    }
    delta = std::move(dinput);
  }
  return delta;
}

PoolResult max_pool_neighbors(const Tensor& x) {
  if (x.shape.size() != 3) throw std::invalid_argument("max_pool_neighbors: expected N x K x C");
  const std::size_t n = x.shape[0];
  const std::size_t k = x.shape[1];
  const std::size_t c = x.shape[2];
  if (k < 1) throw std::invalid_argument("max_pool_neighbors: K must be >= 1");

  PoolResult result;
  result.pooled = Tensor({n, c});
  result.argmax.assign(n * c, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      double best = x.values[(i * k) * c + ch];
      std::size_t best_k = 0;
      for (std::size_t j = 1; j < k; ++j) {
        const double v = x.values[(i * k + j) * c + ch];
        if (v > best) {
          best = v;
          best_k = j;
        }
      }
      result.pooled.values[i * c + ch] = best;
      result.argmax[i * c + ch] = best_k;
    }
  }
  return result;
}

Tensor max_pool_backward(const Tensor& dpooled, const PoolResult& pool, std::size_t k) {
  if (dpooled.shape.size() != 2) throw std::invalid_argument("max_pool_backward: expected N x C");
  const std::size_t n = dpooled.shape[0];
  const std::size_t c = dpooled.shape[1];
  if (pool.argmax.size() != n * c)
    throw std::invalid_argument("max_pool_backward: pool result mismatch");

  Tensor dx({n, k, c});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t ch = 0; ch < c; ++ch) {
      const std::size_t j = pool.argmax[i * c + ch];
      dx.values[(i * k + j) * c + ch] = dpooled.values[i * c + ch];
    }
  return dx;
}

LossResult softmax_cross_entropy(const Tensor& logits, std::span<const int> labels) {
  if (logits.shape.size() != 2) throw std::invalid_argument("softmax_cross_entropy: expected B x M");
  const std::size_t b = logits.shape[0];
  const std::size_t m = logits.shape[1];
  if (m < 2) throw std::invalid_argument("softmax_cross_entropy: need at least two classes");
  if (labels.size() != b) throw std::invalid_argument("softmax_cross_entropy: label count mismatch");

  LossResult result;
  result.grad = Tensor({b, m});
  double total = 0.0;
  for (std::size_t r = 0; r < b; ++r) {
    const int label = labels[r];
    if (label < 0 || static_cast<std::size_t>(label) >= m)
      throw std::out_of_range("softmax_cross_entropy: label out of range");

    const double* z = logits.values.data() + r * m;
    const double zmax = *std::max_element(z, z + m);
    double sum = 0.0;
    for (std::size_t c = 0; c < m; ++c) sum += std::exp(z[c] - zmax);
    const double log_sum = std::log(sum);
    total += log_sum - (z[label] - zmax);

    double* g = result.grad.values.data() + r * m;
    for (std::size_t c = 0; c < m; ++c) {
      const double p = std::exp(z[c] - zmax) / sum;
      g[c] = (p - (static_cast<std::size_t>(label) == c ? 1.0 : 0.0)) / static_cast<double>(b);
    }
  }
  result.loss = total / static_cast<double>(b);
  return result;
}

void adam_step(std::span<Tensor* const> params, std::span<const Tensor* const> grads,
               AdamState& state, double lr, double beta1, double beta2, double eps) {
  if (params.size() != grads.size()) throw std::invalid_argument("adam_step: list length mismatch");
  if (state.m.empty()) {
    state.m.resize(params.size());
    state.v.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      state.m[i].assign(params[i]->values.size(), 0.0);
      state.v[i].assign(params[i]->values.size(), 0.0);
    }
  }
  if (state.m.size() != params.size()) throw std::invalid_argument("adam_step: state size mismatch");

  state.step += 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));

  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const Tensor& g = *grads[i];
    if (p.values.size() != g.values.size() || p.values.size() != state.m[i].size())
      throw std::invalid_argument("adam_step: shape mismatch");
    std::vector<double>& m = state.m[i];
    std::vector<double>& v = state.v[i];
    for (std::size_t j = 0; j < p.values.size(); ++j) {
      m[j] = beta1 * m[j] + (1.0 - beta1) * g.values[j];
      v[j] = beta2 * v[j] + (1.0 - beta2) * g.values[j] * g.values[j];
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      p.values[j] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

}  // namespace rotinv
