#include "rotinv/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rotinv {

namespace {

// Layer-3 grouping is global: the unit-sphere diameter bounds every pairwise
// distance, so a ball of this radius always contains the whole layer.
constexpr double kGlobalRadius = 2.0;

Tensor ri_block_to_tensor(const RIInputTensor& block, bool use_global) {
  const std::size_t n = block.num_centers;
  const std::size_t k = block.neighbors_per_center;
  const std::size_t width = use_global ? kDescriptorWidth : kLocalComponents;
  const std::size_t skip = use_global ? 0 : kGlobalComponents;
  Tensor out({n, k, width});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t c = 0; c < width; ++c)
        out.values[(i * k + j) * width + c] = block.at(i, j, skip + c);
  return out;
}

Tensor relation_rows(std::span<const Point3> points) {
  const RelationMatrix rel = relation_matrix(points);
  Tensor out({rel.num_points, 2 * rel.num_points});
  out.values = rel.values;
  return out;
}

Tensor concat_last(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("concat_last: leading shape mismatch");
  const std::size_t wa = a.last_dim();
  const std::size_t wb = b.last_dim();
  std::vector<std::size_t> shape = a.shape;
  shape.back() = wa + wb;
  Tensor out(std::move(shape));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::copy_n(a.values.data() + r * wa, wa, out.values.data() + r * (wa + wb));
    std::copy_n(b.values.data() + r * wb, wb, out.values.data() + r * (wa + wb) + wa);
  }
  return out;
}

// Rows of `features` (N x C) gathered into one group per neighborhood.
Tensor gather_feature_groups(const Tensor& features, std::span<const Neighborhood> groups) {
  const std::size_t c = features.last_dim();
  const std::size_t k = groups.empty() ? 0 : groups[0].neighbor_indices.size();
  Tensor out({groups.size(), k, c});
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t row = groups[g].neighbor_indices[j];
      std::copy_n(features.values.data() + row * c, c,
                  out.values.data() + (g * k + j) * c);
    }
  return out;
}

// Adjoint of gather_feature_groups: adds group gradients back onto the rows.
void scatter_feature_groups(const Tensor& dgroups, std::span<const Neighborhood> groups,
                            Tensor& dfeatures) {
  const std::size_t c = dfeatures.last_dim();
  const std::size_t k = groups.empty() ? 0 : groups[0].neighbor_indices.size();
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t row = groups[g].neighbor_indices[j];
      const double* src = dgroups.values.data() + (g * k + j) * c;
      double* dst = dfeatures.values.data() + row * c;
      for (std::size_t ch = 0; ch < c; ++ch) dst[ch] += src[ch];
    }
}

void split_last(const Tensor& x, std::size_t wa, Tensor& a, Tensor& b) {
  const std::size_t w = x.last_dim();
  const std::size_t wb = w - wa;
  std::vector<std::size_t> sa = x.shape;
  sa.back() = wa;
  std::vector<std::size_t> sb = x.shape;
  sb.back() = wb;
  a = Tensor(std::move(sa));
  b = Tensor(std::move(sb));
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::copy_n(x.values.data() + r * w, wa, a.values.data() + r * wa);
    std::copy_n(x.values.data() + r * w + wa, wb, b.values.data() + r * wb);
  }
}

MedianParams layer_median_params(const NetworkConfig& cfg, std::size_t k,
                                 std::uint64_t layer_salt) {
  MedianParams mp;
  mp.num_subsets = cfg.median_params.num_subsets;
  mp.subset_size = median_subset_size(k);
  mp.seed = mix_seed(cfg.median_params.seed, layer_salt);
  return mp;
}

template <typename Params, typename TensorPtr>
std::vector<std::pair<std::string, TensorPtr>> enumerate_tensors(Params& params) {
  std::vector<std::pair<std::string, TensorPtr>> out;
  auto add = [&out](const char* name, auto& mlp) {
    for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
      out.emplace_back(std::string(name) + ".w" + std::to_string(l), &mlp.layers[l].weight);
      out.emplace_back(std::string(name) + ".b" + std::to_string(l), &mlp.layers[l].bias);
    }
  };
  add("shared1", params.shared1);
  add("rel1", params.rel1);
  add("branch2", params.branch2);
  add("fusion2", params.fusion2);
  add("rel2", params.rel2);
  add("branch3", params.branch3);
  add("fusion3", params.fusion3);
  add("head", params.head);
  return out;
}

}  // namespace

void NetworkConfig::validate() const {
  if (n2 < 1 || n1 <= n2) throw std::invalid_argument("NetworkConfig: requires n1 > n2 >= 1");
  if (!(k1 < k2 && k2 < k3) || k1 < 1)
    throw std::invalid_argument("NetworkConfig: requires 1 <= k1 < k2 < k3");
  if (!(r1 > 0.0 && r1 < r2)) throw std::invalid_argument("NetworkConfig: requires 0 < r1 < r2");
  if (channels < 1) throw std::invalid_argument("NetworkConfig: channels must be >= 1");
  if (num_classes < 2) throw std::invalid_argument("NetworkConfig: need at least two classes");
  if (median_params.num_subsets < 1)
    throw std::invalid_argument("NetworkConfig: median subsets must be >= 1");
}

NetworkParams make_network_params(const NetworkConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t d = cfg.descriptor_width();
  const std::size_t c = cfg.channels;

  NetworkParams p;
  {
    const std::size_t widths[] = {d, 32, 64, c};
    p.shared1 = make_mlp(widths, Activation::kRelu, Activation::kRelu);
  }
  {
    const std::size_t widths[] = {2 * cfg.n1, 64, c};
    p.rel1 = make_mlp(widths, Activation::kRelu, Activation::kSigmoid);
  }
  {
    const std::size_t widths[] = {d, 64, c};
    p.branch2 = make_mlp(widths, Activation::kRelu, Activation::kRelu);
  }
  {
    const std::size_t widths[] = {2 * c, 2 * c, c};
    p.fusion2 = make_mlp(widths, Activation::kRelu, Activation::kRelu);
  }
  {
    const std::size_t widths[] = {2 * cfg.n2, 64, c};
    p.rel2 = make_mlp(widths, Activation::kRelu, Activation::kSigmoid);
  }
  {
    const std::size_t widths[] = {d, 64, c};
    p.branch3 = make_mlp(widths, Activation::kRelu, Activation::kRelu);
  }
  {
    const std::size_t widths[] = {2 * c, 2 * c, c};
    p.fusion3 = make_mlp(widths, Activation::kRelu, Activation::kRelu);
  }
  {
    const std::size_t widths[] = {c, 64, cfg.num_classes};
    p.head = make_mlp(widths, Activation::kRelu, Activation::kIdentity);
  }

  std::mt19937_64 rng(mix_seed(seed, 0x706172616d73ULL));
  glorot_init(p.shared1, rng);
  glorot_init(p.rel1, rng);
  glorot_init(p.branch2, rng);
  glorot_init(p.fusion2, rng);
  glorot_init(p.rel2, rng);
  glorot_init(p.branch3, rng);
  glorot_init(p.fusion3, rng);
  glorot_init(p.head, rng);
  return p;
}

NetworkParams zeros_like(const NetworkParams& params) {
  NetworkParams z;
  z.shared1 = zeros_like(params.shared1);
  z.rel1 = zeros_like(params.rel1);
  z.branch2 = zeros_like(params.branch2);
  z.fusion2 = zeros_like(params.fusion2);
  z.rel2 = zeros_like(params.rel2);
  z.branch3 = zeros_like(params.branch3);
  z.fusion3 = zeros_like(params.fusion3);
  z.head = zeros_like(params.head);
  return z;
}

std::vector<std::pair<std::string, Tensor*>> named_tensors(NetworkParams& params) {
  return enumerate_tensors<NetworkParams, Tensor*>(params);
}

std::vector<std::pair<std::string, const Tensor*>> named_tensors(const NetworkParams& params) {
  return enumerate_tensors<const NetworkParams, const Tensor*>(params);
}

Tensor relation_weight(const Tensor& rel_rows, const Mlp& relation, MlpCache* cache) {
  if (rel_rows.shape.size() != 2) throw std::invalid_argument("relation_weight: expected N x 2N");
  if (rel_rows.last_dim() != relation.input_width())
    throw std::invalid_argument("relation_weight: relation width mismatch");
  return shared_mlp_forward(rel_rows, relation, cache);
}

Tensor region_relation_conv(const Tensor& x, const Tensor& rel_rows, const Mlp& shared,
                            const Mlp& relation, bool use_relation_weights, RrcCache* cache) {
  if (x.shape.size() != 3) throw std::invalid_argument("region_relation_conv: expected N x K x D");
  RrcCache local;
  RrcCache& c = cache ? *cache : local;

  const Tensor h = shared_mlp_forward(x, shared, &c.shared);
  c.pool = max_pool_neighbors(h);
  c.f = c.pool.pooled;
  if (!use_relation_weights) {
    c.w = Tensor();
    return c.f;
  }

  if (rel_rows.shape.empty() || rel_rows.shape[0] != x.shape[0])
    throw std::invalid_argument("region_relation_conv: relation row count mismatch");
  c.w = relation_weight(rel_rows, relation, &c.relation);
  if (c.w.last_dim() != c.f.last_dim())
    throw std::invalid_argument("region_relation_conv: branch width mismatch");

  Tensor out = c.f;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += c.w.values[i] * c.f.values[i];
  return out;
}

Tensor region_relation_conv_backward(const Tensor& dout, const Mlp& shared, const Mlp& relation,
                                     const RrcCache& cache, bool use_relation_weights,
                                     Mlp& shared_grads, Mlp& rel_grads) {
  Tensor df = dout;
  if (use_relation_weights) {
    Tensor dw = dout;
    for (std::size_t i = 0; i < df.values.size(); ++i) {
      df.values[i] = dout.values[i] * (1.0 + cache.w.values[i]);
      dw.values[i] = dout.values[i] * cache.f.values[i];
    }
    shared_mlp_backward(dw, relation, cache.relation, rel_grads);
  }
  const std::size_t k = cache.shared.inputs.back().shape[1];
  const Tensor dh = max_pool_backward(df, cache.pool, k);
  return shared_mlp_backward(dh, shared, cache.shared, shared_grads);
}

HierarchyInputs extract_inputs(const PointCloud& cloud, const NetworkConfig& cfg) {
  cfg.validate();
  if (cloud.size() < cfg.n1) throw std::invalid_argument("extract_inputs: insufficient points");

  HierarchyInputs in;
  in.idx1 = farthest_point_sampling(cloud, cfg.n1);
  const std::vector<Neighborhood> nbh1 = ball_query(cloud, in.idx1, cfg.r1, cfg.k1);
  in.x1 = ri_block_to_tensor(
      build_ri_tensor(cloud, nbh1, layer_median_params(cfg, cfg.k1, 1), cfg.center_mode),
      cfg.use_global_descriptor);

  const PointCloud centers1 = gather_points(cloud, in.idx1);
  in.rel1 = relation_rows(centers1.points);

  const std::vector<std::size_t> idx2 = farthest_point_sampling(centers1, cfg.n2);
  in.nbh2 = ball_query(centers1, idx2, cfg.r2, cfg.k2);
  in.x2 = ri_block_to_tensor(
      build_ri_tensor(centers1, in.nbh2, layer_median_params(cfg, cfg.k2, 2), cfg.center_mode),
      cfg.use_global_descriptor);

  const PointCloud centers2 = gather_points(centers1, idx2);
  in.rel2 = relation_rows(centers2.points);

  const std::vector<std::size_t> idx3 = farthest_point_sampling(centers2, 1);
  in.nbh3 = ball_query(centers2, idx3, kGlobalRadius, cfg.k3);
  in.x3 = ri_block_to_tensor(
      build_ri_tensor(centers2, in.nbh3, layer_median_params(cfg, cfg.k3, 3), cfg.center_mode),
      cfg.use_global_descriptor);
  return in;
}

Tensor codeword_from_inputs(const HierarchyInputs& in, const NetworkConfig& cfg,
                            const NetworkParams& params, ForwardCache* cache) {
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;

  const Tensor f1 = region_relation_conv(in.x1, in.rel1, params.shared1, params.rel1,
                                         cfg.use_relation_weights, &c.rrc1);

  const Tensor g2 = gather_feature_groups(f1, in.nbh2);
  const Tensor f2i = shared_mlp_forward(in.x2, params.branch2, &c.branch2);
  const Tensor x2cat = concat_last(g2, f2i);
  const Tensor f2 = region_relation_conv(x2cat, in.rel2, params.fusion2, params.rel2,
                                         cfg.use_relation_weights, &c.rrc2);

  const Tensor g3 = gather_feature_groups(f2, in.nbh3);
  const Tensor f3i = shared_mlp_forward(in.x3, params.branch3, &c.branch3);
  const Tensor x3cat = concat_last(g3, f3i);
  const Tensor h3 = shared_mlp_forward(x3cat, params.fusion3, &c.fusion3);
  c.pool3 = max_pool_neighbors(h3);
  return c.pool3.pooled;  // 1 x C
}

void codeword_backward(const Tensor& dcodeword, const HierarchyInputs& in,
                       const NetworkConfig& cfg, const NetworkParams& params,
                       const ForwardCache& cache, NetworkParams& grads) {
  const std::size_t c = cfg.channels;

  const std::size_t k3 = in.nbh3[0].neighbor_indices.size();
  const Tensor dh3 = max_pool_backward(dcodeword, cache.pool3, k3);
  const Tensor dx3cat = shared_mlp_backward(dh3, params.fusion3, cache.fusion3, grads.fusion3);
  Tensor dg3, df3i;
  split_last(dx3cat, c, dg3, df3i);
  shared_mlp_backward(df3i, params.branch3, cache.branch3, grads.branch3);

  Tensor df2({in.nbh2.size(), c});
  scatter_feature_groups(dg3, in.nbh3, df2);
  const Tensor dx2cat = region_relation_conv_backward(df2, params.fusion2, params.rel2, cache.rrc2,
                                                      cfg.use_relation_weights, grads.fusion2,
                                                      grads.rel2);
  Tensor dg2, df2i;
  split_last(dx2cat, c, dg2, df2i);
  shared_mlp_backward(df2i, params.branch2, cache.branch2, grads.branch2);

  Tensor df1({in.idx1.size(), c});
  scatter_feature_groups(dg2, in.nbh2, df1);
  region_relation_conv_backward(df1, params.shared1, params.rel1, cache.rrc1,
                                cfg.use_relation_weights, grads.shared1, grads.rel1);
}

Tensor hierarchical_forward(const PointCloud& cloud, const NetworkConfig& cfg,
                            const NetworkParams& params) {
  return codeword_from_inputs(extract_inputs(cloud, cfg), cfg, params);
}

Tensor classify(const Tensor& codewords, const Mlp& head) {
  return shared_mlp_forward(codewords, head);
}

std::vector<std::size_t> retrieve(const Tensor& query, std::span<const Tensor> gallery) {
  const auto cosine = [](const Tensor& a, const Tensor& b) {
    if (a.values.size() != b.values.size())
      throw std::invalid_argument("retrieve: codeword width mismatch");
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      ab += a.values[i] * b.values[i];
      aa += a.values[i] * a.values[i];
      bb += b.values[i] * b.values[i];
    }
    if (aa <= 0.0 || bb <= 0.0) return 0.0;
    return ab / (std::sqrt(aa) * std::sqrt(bb));
  };

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(gallery.size());
  for (std::size_t i = 0; i < gallery.size(); ++i) scored.emplace_back(cosine(query, gallery[i]), i);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<std::size_t> ranked;
  ranked.reserve(scored.size());
  for (const auto& [sim, idx] : scored) ranked.push_back(idx);
  return ranked;
}

double batch_loss_and_grads(std::span<const HierarchyInputs> inputs, std::span<const int> labels,
                            const NetworkConfig& cfg, const NetworkParams& params,
                            NetworkParams* grads) {
  if (inputs.empty()) throw std::invalid_argument("batch_loss_and_grads: empty batch");
  if (labels.size() != inputs.size())
    throw std::invalid_argument("batch_loss_and_grads: label count mismatch");

  const std::size_t b = inputs.size();
  const std::size_t c = cfg.channels;
  std::vector<ForwardCache> caches(grads ? b : 0);

  Tensor codes({b, c});
  for (std::size_t i = 0; i < b; ++i) {
    const Tensor cw = codeword_from_inputs(inputs[i], cfg, params, grads ? &caches[i] : nullptr);
    std::copy_n(cw.values.data(), c, codes.values.data() + i * c);
  }

  MlpCache head_cache;
  const Tensor logits = shared_mlp_forward(codes, params.head, grads ? &head_cache : nullptr);
  const LossResult loss = softmax_cross_entropy(logits, labels);

  if (grads) {
    const Tensor dcodes = shared_mlp_backward(loss.grad, params.head, head_cache, grads->head);
    for (std::size_t i = 0; i < b; ++i) {
      Tensor dcw({std::size_t{1}, c});
      std::copy_n(dcodes.values.data() + i * c, c, dcw.values.data());
      codeword_backward(dcw, inputs[i], cfg, params, caches[i], *grads);
    }
  }
  return loss.loss;
}

double train_step(std::span<const PointCloud> clouds, std::span<const int> labels,
                  const NetworkConfig& cfg, NetworkParams& params, AdamState& state, double lr) {
  if (clouds.empty()) throw std::invalid_argument("train_step: empty batch");

  std::vector<HierarchyInputs> inputs;
  inputs.reserve(clouds.size());
  for (const PointCloud& cloud : clouds) inputs.push_back(extract_inputs(cloud, cfg));

  NetworkParams grads = zeros_like(params);
  const double loss = batch_loss_and_grads(inputs, labels, cfg, params, &grads);

  auto param_list = named_tensors(params);
  auto grad_list = named_tensors(static_cast<const NetworkParams&>(grads));
  std::vector<Tensor*> ps;
  std::vector<const Tensor*> gs;
  for (auto& [name, t] : param_list) ps.push_back(t);
  for (auto& [name, t] : grad_list) gs.push_back(t);
  adam_step(ps, gs, state, lr);
  return loss;
}

void save_model(const std::string& path, const NetworkConfig& cfg, const NetworkParams& params) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_model: cannot open " + path);
  out << "rotinv-model v1\n";
  out << std::setprecision(17);
  out << "config n1 " << cfg.n1 << "\n";
  out << "config n2 " << cfg.n2 << "\n";
  out << "config k1 " << cfg.k1 << "\n";
  out << "config k2 " << cfg.k2 << "\n";
  out << "config k3 " << cfg.k3 << "\n";
  out << "config r1 " << cfg.r1 << "\n";
  out << "config r2 " << cfg.r2 << "\n";
  out << "config channels " << cfg.channels << "\n";
  out << "config num_classes " << cfg.num_classes << "\n";
  out << "config use_global_descriptor " << (cfg.use_global_descriptor ? 1 : 0) << "\n";
  out << "config use_relation_weights " << (cfg.use_relation_weights ? 1 : 0) << "\n";
  out << "config center_mode "
      << (cfg.center_mode == CenterMode::kGeometricMedian ? "geometric" : "mean") << "\n";
  out << "config median_subsets " << cfg.median_params.num_subsets << "\n";
  out << "config median_seed " << cfg.median_params.seed << "\n";

  for (const auto& [name, tensor] : named_tensors(params)) {
    out << "tensor " << name << " " << tensor->shape.size();
    for (std::size_t d : tensor->shape) out << " " << d;
    out << "\n";
    for (std::size_t i = 0; i < tensor->values.size(); ++i) {
      if (i) out << " ";
      out << tensor->values[i];
    }
    out << "\n";
  }
  out << "end\n";
  if (!out) throw std::runtime_error("save_model: write failed for " + path);
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_model: cannot open " + path);

  std::string header;
  if (!std::getline(in, header) || header != "rotinv-model v1")
    throw std::runtime_error("load_model: unsupported header in " + path);

  NetworkConfig cfg;
  std::string word;
  // Config records come first; the parser stops at the first tensor record.
  while (true) {
    if (!(in >> word)) throw std::runtime_error("load_model: missing end marker in " + path);
    if (word != "config") break;
    std::string key;
    if (!(in >> key)) throw std::runtime_error("load_model: truncated config record");
    auto read_size = [&in, &key](std::size_t& dst) {
      if (!(in >> dst)) throw std::runtime_error("load_model: bad value for " + key);
    };
    auto read_bool = [&in, &key]() {
      int v = 0;
      if (!(in >> v)) throw std::runtime_error("load_model: bad value for " + key);
      return v != 0;
    };
    if (key == "n1") read_size(cfg.n1);
    else if (key == "n2") read_size(cfg.n2);
    else if (key == "k1") read_size(cfg.k1);
    else if (key == "k2") read_size(cfg.k2);
    else if (key == "k3") read_size(cfg.k3);
    else if (key == "r1") { if (!(in >> cfg.r1)) throw std::runtime_error("load_model: bad r1"); }
    else if (key == "r2") { if (!(in >> cfg.r2)) throw std::runtime_error("load_model: bad r2"); }
    else if (key == "channels") read_size(cfg.channels);
    else if (key == "num_classes") read_size(cfg.num_classes);
    else if (key == "use_global_descriptor") cfg.use_global_descriptor = read_bool();
    else if (key == "use_relation_weights") cfg.use_relation_weights = read_bool();
    else if (key == "center_mode") {
      std::string mode;
      if (!(in >> mode)) throw std::runtime_error("load_model: bad center_mode");
      if (mode == "geometric") cfg.center_mode = CenterMode::kGeometricMedian;
      else if (mode == "mean") cfg.center_mode = CenterMode::kArithmeticMean;
      else throw std::runtime_error("load_model: unknown center_mode " + mode);
    } else if (key == "median_subsets") read_size(cfg.median_params.num_subsets);
    else if (key == "median_seed") { if (!(in >> cfg.median_params.seed)) throw std::runtime_error("load_model: bad median_seed"); }
    else throw std::runtime_error("load_model: unknown config key " + key);
  }

  LoadedModel model;
  model.config = cfg;
  model.params = make_network_params(cfg, 0);

  auto tensors = named_tensors(model.params);
  std::vector<bool> filled(tensors.size(), false);

  while (true) {
    if (word == "end") break;
    if (word != "tensor") throw std::runtime_error("load_model: unexpected token " + word);

    std::string name;
    std::size_t rank = 0;
    if (!(in >> name >> rank)) throw std::runtime_error("load_model: truncated tensor record");
    std::vector<std::size_t> shape(rank);
    for (std::size_t& d : shape)
      if (!(in >> d)) throw std::runtime_error("load_model: truncated shape for " + name);

    const auto it = std::find_if(tensors.begin(), tensors.end(),
                                 [&name](const auto& p) { return p.first == name; });
    if (it == tensors.end()) throw std::runtime_error("load_model: unknown tensor " + name);
    Tensor& dst = *it->second;
    if (dst.shape != shape)
      throw std::runtime_error("load_model: shape mismatch for " + name);
    for (double& v : dst.values)
      if (!(in >> v)) throw std::runtime_error("load_model: truncated values for " + name);
    filled[static_cast<std::size_t>(it - tensors.begin())] = true;

    if (!(in >> word)) throw std::runtime_error("load_model: missing end marker");
  }

  for (std::size_t i = 0; i < tensors.size(); ++i)
    if (!filled[i]) throw std::runtime_error("load_model: missing tensor " + tensors[i].first);
  return model;
}

}  // namespace rotinv
