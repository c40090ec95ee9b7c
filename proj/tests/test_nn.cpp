#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rotinv/nn.hpp"

using namespace rotinv;

namespace {

Tensor random_tensor(std::initializer_list<std::size_t> shape, std::uint64_t seed,
                     double lo = -1.0, double hi = 1.0) {
  Tensor t{std::vector<std::size_t>(shape)};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (double& v : t.values) v = dist(rng);
  return t;
}

Mlp random_mlp(std::vector<std::size_t> widths, Activation hidden, Activation output,
               std::uint64_t seed) {
  Mlp mlp = make_mlp(widths, hidden, output);
  std::mt19937_64 rng(seed);
  glorot_init(mlp, rng);
  return mlp;
}

}  // namespace

TEST_CASE("tensor shape bookkeeping") {
  Tensor t({2, 3, 4});
  CHECK(t.size() == 24);
  CHECK(t.last_dim() == 4);
  CHECK(t.rows() == 6);
  for (double v : t.values) CHECK(v == 0.0);

  Tensor m({3, 4});
  m.at2(2, 3) = 7.0;
  CHECK(m.values[11] == 7.0);
  CHECK(m.at2(2, 3) == 7.0);
}

TEST_CASE("shared mlp with identity weights reproduces its input") {
  Mlp mlp = make_mlp(std::vector<std::size_t>{3, 3}, Activation::kRelu, Activation::kIdentity);
  for (std::size_t i = 0; i < 3; ++i) mlp.layers[0].weight.at2(i, i) = 1.0;
  const Tensor x = random_tensor({4, 5, 3}, 1);
  const Tensor y = shared_mlp_forward(x, mlp);
  REQUIRE(y.shape == x.shape);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(y.values[i] == x.values[i]);
}

TEST_CASE("shared mlp with zero weights emits the activated bias") {
  Mlp mlp = make_mlp(std::vector<std::size_t>{4, 2}, Activation::kRelu, Activation::kSigmoid);
  mlp.layers[0].bias.values = {0.3, -1.2};
  const Tensor x = random_tensor({6, 4}, 2);
  const Tensor y = shared_mlp_forward(x, mlp);
  for (std::size_t r = 0; r < 6; ++r) {
    CHECK(y.at2(r, 0) == doctest::Approx(1.0 / (1.0 + std::exp(-0.3))));
    CHECK(y.at2(r, 1) == doctest::Approx(1.0 / (1.0 + std::exp(1.2))));
  }
}

TEST_CASE("shared mlp matches a naive per-row oracle") {
  const Mlp mlp = random_mlp({2, 3}, Activation::kRelu, Activation::kIdentity, 5);
  const Tensor x = random_tensor({4, 5, 2}, 6);
  const Tensor y = shared_mlp_forward(x, mlp);

  for (std::size_t row = 0; row < 20; ++row) {
    for (std::size_t o = 0; o < 3; ++o) {
      double acc = mlp.layers[0].bias.values[o];
      for (std::size_t i = 0; i < 2; ++i)
        acc += x.values[row * 2 + i] * mlp.layers[0].weight.at2(i, o);
      CHECK(y.values[row * 3 + o] == doctest::Approx(acc).epsilon(1e-12));
    }
  }
}

TEST_CASE("shared mlp validates input width") {
  const Mlp mlp = random_mlp({3, 4}, Activation::kRelu, Activation::kIdentity, 7);
  const Tensor bad = random_tensor({2, 5}, 8);
  CHECK_THROWS(shared_mlp_forward(bad, mlp));
}

TEST_CASE("max pool squeezes K = 1 and ignores K permutations") {
  const Tensor x = random_tensor({3, 1, 4}, 9);
  const PoolResult squeezed = max_pool_neighbors(x);
  for (std::size_t i = 0; i < 12; ++i) CHECK(squeezed.pooled.values[i] == x.values[i]);

  Tensor y = random_tensor({2, 5, 3}, 10);
  const PoolResult base = max_pool_neighbors(y);
  // reverse the K axis
  Tensor rev = y;
  for (std::size_t n = 0; n < 2; ++n)
    for (std::size_t k = 0; k < 5; ++k)
      for (std::size_t c = 0; c < 3; ++c)
        rev.values[(n * 5 + k) * 3 + c] = y.values[(n * 5 + (4 - k)) * 3 + c];
  const PoolResult moved = max_pool_neighbors(rev);
  CHECK(moved.pooled.values == base.pooled.values);
}

TEST_CASE("max pool matches a hand oracle and routes gradients to argmax only") {
  Tensor x({2, 3, 2});
  x.values = {1, 9,  5, 2,  5, 3,
              -1, -5, -2, -4, -3, -6};
  const PoolResult pr = max_pool_neighbors(x);
  CHECK(pr.pooled.values == std::vector<double>{5, 9, -1, -4});
  // channel 0 row 0 has 5 at both k=1 and k=2; ties take the smallest index
  CHECK(pr.argmax[0 * 2 + 0] == 1);
  CHECK(pr.argmax[0 * 2 + 1] == 0);  // 9 at k=0
  CHECK(pr.argmax[1 * 2 + 0] == 0);
  CHECK(pr.argmax[1 * 2 + 1] == 1);

  Tensor dpooled({2, 2});
  dpooled.values = {1.0, 2.0, 3.0, 4.0};
  const Tensor dx = max_pool_backward(dpooled, pr, 3);
  double total = 0.0;
  std::size_t nonzero = 0;
  for (double v : dx.values) {
    total += v;
    if (v != 0.0) ++nonzero;
  }
  CHECK(total == doctest::Approx(10.0));
  CHECK(nonzero == 4);  // one winner per (n, c)
  CHECK(dx.values[(0 * 3 + 1) * 2 + 0] == 1.0);
  CHECK(dx.values[(0 * 3 + 0) * 2 + 1] == 2.0);
}

TEST_CASE("softmax cross entropy on uniform logits is ln M") {
  Tensor logits({2, 4});
  std::fill(logits.values.begin(), logits.values.end(), 0.7);
  const std::vector<int> labels = {1, 3};
  const LossResult res = softmax_cross_entropy(logits, labels);
  CHECK(res.loss == doctest::Approx(std::log(4.0)));
  for (std::size_t b = 0; b < 2; ++b) {
    double row_sum = 0.0;
    for (std::size_t m = 0; m < 4; ++m) row_sum += res.grad.at2(b, m);
    CHECK(std::abs(row_sum) < 1e-12);
  }
}

TEST_CASE("softmax cross entropy gradient matches finite differences") {
  Tensor logits = random_tensor({3, 5}, 11, -2.0, 2.0);
  const std::vector<int> labels = {4, 0, 2};
  const LossResult res = softmax_cross_entropy(logits, labels);
  const double eps = 1e-6;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double saved = logits.values[i];
    logits.values[i] = saved + eps;
    const double up = softmax_cross_entropy(logits, labels).loss;
    logits.values[i] = saved - eps;
    const double down = softmax_cross_entropy(logits, labels).loss;
    logits.values[i] = saved;
    const double fd = (up - down) / (2.0 * eps);
    CHECK(std::abs(res.grad.values[i] - fd) / std::max(1e-9, std::abs(fd)) < 1e-6);
  }
}

TEST_CASE("softmax cross entropy survives extreme logits and rejects bad labels") {
  Tensor logits({1, 3});
  logits.values = {1000.0, -1000.0, 999.0};
  const LossResult res = softmax_cross_entropy(logits, std::vector<int>{0});
  CHECK(std::isfinite(res.loss));
  CHECK(all_finite(res.grad));
  CHECK_THROWS(softmax_cross_entropy(logits, std::vector<int>{3}));
  CHECK_THROWS(softmax_cross_entropy(logits, std::vector<int>{-1}));
  CHECK_THROWS(softmax_cross_entropy(logits, std::vector<int>{0, 1}));
}

TEST_CASE("mlp backward matches finite differences") {
  Mlp mlp = random_mlp({3, 4, 2}, Activation::kRelu, Activation::kSigmoid, 20);
  const Tensor x = random_tensor({6, 3}, 21);
  const std::vector<int> labels = {0, 1, 1, 0, 1, 0};

  // loss(mlp) via a scalar readout so the check covers both layers
  const auto loss_of = [&](const Mlp& m) {
    MlpCache cache;
    const Tensor y = shared_mlp_forward(x, m, &cache);
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) loss += y.values[i] * y.values[i];
    return 0.5 * loss;
  };

  MlpCache cache;
  const Tensor y = shared_mlp_forward(x, mlp, &cache);
  Mlp grads = zeros_like(mlp);
  shared_mlp_backward(y, mlp, cache, grads);  // dL/dy = y for the quadratic readout

  const double eps = 1e-6;
  for (std::size_t layer = 0; layer < mlp.layers.size(); ++layer) {
    for (Tensor DenseParams::* field : {&DenseParams::weight, &DenseParams::bias}) {
      Tensor& param = mlp.layers[layer].*field;
      const Tensor& grad = grads.layers[layer].*field;
      for (std::size_t i = 0; i < param.size(); ++i) {
        const double saved = param.values[i];
        param.values[i] = saved + eps;
        const double up = loss_of(mlp);
        param.values[i] = saved - eps;
        const double down = loss_of(mlp);
        param.values[i] = saved;
        const double fd = (up - down) / (2.0 * eps);
        CHECK(std::abs(grad.values[i] - fd) <
              1e-6 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("zero upstream gradient produces zero parameter gradients") {
  Mlp mlp = random_mlp({3, 4, 2}, Activation::kRelu, Activation::kIdentity, 30);
  const Tensor x = random_tensor({5, 3}, 31);
  MlpCache cache;
  shared_mlp_forward(x, mlp, &cache);
  Mlp grads = zeros_like(mlp);
  Tensor dout({5, 2});
  const Tensor dx = shared_mlp_backward(dout, mlp, cache, grads);
  for (const DenseParams& layer : grads.layers) {
    for (double v : layer.weight.values) CHECK(v == 0.0);
    for (double v : layer.bias.values) CHECK(v == 0.0);
  }
  for (double v : dx.values) CHECK(v == 0.0);
}

TEST_CASE("adam leaves parameters alone on zero gradient") {
  Tensor w({2, 2});
  w.values = {1.0, -2.0, 3.0, 0.5};
  const std::vector<double> before = w.values;
  Tensor g({2, 2});
  AdamState state;
  std::vector<Tensor*> params = {&w};
  std::vector<const Tensor*> grads = {&g};
  adam_step(params, grads, state);
  CHECK(w.values == before);
}

TEST_CASE("adam first step moves by about the learning rate") {
  Tensor w({3});
  w.values = {0.0, 5.0, -1.0};
  Tensor g({3});
  g.values = {0.2, -0.4, 1.7};
  AdamState state;
  std::vector<Tensor*> params = {&w};
  std::vector<const Tensor*> grads = {&g};
  adam_step(params, grads, state, 0.001);
  CHECK(w.values[0] == doctest::Approx(-0.001).epsilon(1e-4));
  CHECK(w.values[1] == doctest::Approx(5.001).epsilon(1e-6));
  CHECK(w.values[2] == doctest::Approx(-1.001).epsilon(1e-6));
  CHECK(state.step == 1);
}

TEST_CASE("adam descends a quadratic bowl") {
  Tensor w({2});
  w.values = {1.0, 1.0};
  AdamState state;
  double prev = std::hypot(w.values[0], w.values[1]);
  for (int it = 0; it < 100; ++it) {
    Tensor g({2});
    g.values = {w.values[0], w.values[1]};  // gradient of 0.5 ||w||^2
    std::vector<Tensor*> params = {&w};
    std::vector<const Tensor*> grads = {&g};
    adam_step(params, grads, state, 0.01);
    const double now = std::hypot(w.values[0], w.values[1]);
    CHECK(now < prev);
    prev = now;
  }
  CHECK(prev < 0.5);
}

TEST_CASE("adam rejects mismatched shapes") {
  Tensor w({2});
  Tensor g({3});
  AdamState state;
  std::vector<Tensor*> params = {&w};
  std::vector<const Tensor*> grads = {&g};
  CHECK_THROWS(adam_step(params, grads, state));
}

TEST_CASE("glorot initialization respects its bound") {
  Mlp mlp = make_mlp(std::vector<std::size_t>{10, 20}, Activation::kRelu, Activation::kIdentity);
  std::mt19937_64 rng(3);
  glorot_init(mlp, rng);
  const double bound = std::sqrt(6.0 / (10 + 20));
  bool any_nonzero = false;
  for (double v : mlp.layers[0].weight.values) {
    CHECK(std::abs(v) <= bound);
    any_nonzero = any_nonzero || v != 0.0;
  }
  CHECK(any_nonzero);
  for (double v : mlp.layers[0].bias.values) CHECK(v == 0.0);
}

TEST_CASE("forward pass is bitwise deterministic") {
  const Mlp mlp = random_mlp({4, 8, 3}, Activation::kRelu, Activation::kSigmoid, 55);
  const Tensor x = random_tensor({7, 4}, 56);
  const Tensor a = shared_mlp_forward(x, mlp);
  const Tensor b = shared_mlp_forward(x, mlp);
  CHECK(a.values == b.values);
}
