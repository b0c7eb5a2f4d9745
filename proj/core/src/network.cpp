#include "sudonet/network.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace sudonet {

namespace {

constexpr char kMagic[4] = {'S', 'U', 'D', 'N'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t act_tag(const Activation& a) {
  switch (a.kind) {
    case Act::Linear: return 0;
    case Act::Tanh: return 1;
    case Act::Relu: return 2;
    case Act::Sudo: return 3;
    case Act::RSudo: return 4;
    case Act::Softmax: return 5;
  }
  throw ConfigError("unhandled activation kind");
}

Activation act_from_tag(std::uint32_t tag, std::uint32_t levels) {
  switch (tag) {
    case 0: return Activation::linear();
    case 1: return Activation::tanh();
    case 2: return Activation::relu();
    case 3: return Activation::sudo(static_cast<int>(levels));
    case 4: return Activation::rsudo(static_cast<int>(levels));
    case 5: return Activation::softmax();
  }
  throw ParseError("unknown activation tag " + std::to_string(tag) + " in model file");
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, sizeof v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw ParseError("model file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw ParseError("model file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double d;
  std::memcpy(&d, &v, sizeof d);
  return d;
}

}  // namespace

void NetworkSpec::validate() const {
  if (layers.empty()) throw ConfigError("network needs at least one layer");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerSpec& layer = layers[l];
    if (layer.input_dim < 1 || layer.output_dim < 1) {
      throw ConfigError("layer " + std::to_string(l) + " has a zero dimension");
    }
    if (layer.activation.discretized() && layer.activation.levels < 2) {
      throw ConfigError("layer " + std::to_string(l) + " discretized with levels < 2");
    }
    if (layer.activation.kind == Act::Softmax && l + 1 != layers.size()) {
      throw ConfigError("softmax is only valid on the final layer");
    }
    if (l > 0 && layers[l - 1].output_dim != layer.input_dim) {
      throw ConfigError("layer " + std::to_string(l - 1) + " outputs " +
                        std::to_string(layers[l - 1].output_dim) + " but layer " +
                        std::to_string(l) + " expects " + std::to_string(layer.input_dim));
    }
  }
  const Act last = layers.back().activation.kind;
  if (loss == Loss::SoftmaxCrossEntropy && last != Act::Linear && last != Act::Softmax) {
    throw ConfigError("cross-entropy loss requires a linear or softmax final layer");
  }
  if (loss == Loss::SumSquaredError && last == Act::Softmax) {
    throw ConfigError("softmax final layer requires the cross-entropy loss");
  }
}

Network Network::init(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  Network net;
  net.spec_ = spec;
  std::mt19937_64 rng(seed);
  // 53-bit uniform in [0,1); avoids distribution objects so the draw stream
  // is pinned by the engine alone.
  auto uniform01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (const LayerSpec& layer : spec.layers) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.input_dim + layer.output_dim));
    Matrix w(layer.input_dim, layer.output_dim);
    for (std::size_t i = 0; i < w.size(); ++i) {
      w.data()[i] = limit * (2.0 * uniform01() - 1.0);
    }
    net.weights_.push_back(std::move(w));
    net.biases_.push_back(Matrix(1, layer.output_dim, 0.0));
  }
  return net;
}

Matrix Network::forward(const Matrix& batch) const {
  if (batch.cols() != spec_.input_dim()) {
    throw ShapeError("forward: batch " + batch.shape_str() + " does not match input dim " +
                     std::to_string(spec_.input_dim()));
  }
  Matrix a = batch;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    Matrix z = add_row_broadcast(matmul(a, weights_[l]), biases_[l]);
    a = apply_forward(spec_.layers[l].activation, z);
  }
  return a;
}

Matrix Network::forward(const Matrix& batch, ForwardTrace& trace) const {
  if (batch.cols() != spec_.input_dim()) {
    throw ShapeError("forward: batch " + batch.shape_str() + " does not match input dim " +
                     std::to_string(spec_.input_dim()));
  }
  trace.input = batch;
  trace.pre.clear();
  trace.post.clear();
  trace.pre.reserve(layer_count());
  trace.post.reserve(layer_count());
  const Matrix* a = &trace.input;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    trace.pre.push_back(add_row_broadcast(matmul(*a, weights_[l]), biases_[l]));
    trace.post.push_back(apply_forward(spec_.layers[l].activation, trace.pre.back()));
    a = &trace.post.back();
  }
  return trace.post.back();
}

Gradients Network::backward(const ForwardTrace& trace, const Matrix& targets) const {
  const std::size_t n = layer_count();
  if (trace.pre.size() != n || trace.post.size() != n) {
    throw ShapeError("backward: trace does not match the network");
  }
  const Matrix& out = trace.post.back();
  if (!out.same_shape(targets)) {
    throw ShapeError("backward: output " + out.shape_str() + " vs targets " +
                     targets.shape_str());
  }

  Matrix delta;
  if (spec_.loss == Loss::SoftmaxCrossEntropy) {
    const Activation& last = spec_.layers.back().activation;
    Matrix probs = last.kind == Act::Softmax ? out : softmax_rows(trace.pre.back());
    const double inv_rows = 1.0 / static_cast<double>(out.rows());
    delta = zip(probs, targets, [inv_rows](double p, double y) { return (p - y) * inv_rows; });
  } else {
    Matrix dpred = zip(out, targets, [](double p, double t) { return 2.0 * (p - t); });
    const Activation& last = spec_.layers.back().activation;
    delta = last.kind == Act::Linear
                ? std::move(dpred)
                : hadamard(dpred, apply_backward(last, trace.pre.back()));
  }

  Gradients grads;
  grads.weights.resize(n);
  grads.biases.resize(n);
  for (std::size_t l = n; l-- > 0;) {
    const Matrix& a_prev = l == 0 ? trace.input : trace.post[l - 1];
    grads.weights[l] = matmul(transpose(a_prev), delta);
    grads.biases[l] = sum_rows(delta);
    if (l > 0) {
      delta = hadamard(matmul(delta, transpose(weights_[l])),
                       apply_backward(spec_.layers[l - 1].activation, trace.pre[l - 1]));
    }
  }
  return grads;
}

void Network::save(std::ostream& out) const {
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(layer_count()));
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const LayerSpec& layer = spec_.layers[l];
    put_u32(out, static_cast<std::uint32_t>(layer.input_dim));
    put_u32(out, static_cast<std::uint32_t>(layer.output_dim));
    put_u32(out, act_tag(layer.activation));
    put_u32(out, static_cast<std::uint32_t>(layer.activation.levels));
    for (std::size_t i = 0; i < weights_[l].size(); ++i) put_f64(out, weights_[l].data()[i]);
    for (std::size_t i = 0; i < biases_[l].size(); ++i) put_f64(out, biases_[l].data()[i]);
  }
  if (!out) throw ParseError("failed writing model stream");
}

void Network::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open model file for writing: " + path.string());
  save(out);
}

Network Network::load(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4)) throw ParseError("model file truncated");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError("bad model magic, expected \"SUDN\"");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) {
    throw ParseError("unsupported model version " + std::to_string(version));
  }
  const std::uint32_t layer_count = get_u32(in);

  Network net;
  for (std::uint32_t l = 0; l < layer_count; ++l) {
    const std::uint32_t in_dim = get_u32(in);
    const std::uint32_t out_dim = get_u32(in);
    const std::uint32_t tag = get_u32(in);
    const std::uint32_t levels = get_u32(in);
    LayerSpec layer{in_dim, out_dim, act_from_tag(tag, levels)};
    Matrix w(in_dim, out_dim);
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = get_f64(in);
    Matrix b(1, out_dim);
    for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] = get_f64(in);
    net.spec_.layers.push_back(layer);
    net.weights_.push_back(std::move(w));
    net.biases_.push_back(std::move(b));
  }
  if (net.spec_.layers.empty()) throw ParseError("model file has no layers");
  // The container carries no loss field; infer the only loss each final
  // activation admits.
  net.spec_.loss = net.spec_.layers.back().activation.kind == Act::Softmax
                       ? Loss::SoftmaxCrossEntropy
                       : Loss::SumSquaredError;
  net.spec_.validate();
  return net;
}

Network Network::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open model file: " + path.string());
  return load(in);
}

double loss_sse(const Matrix& pred, const Matrix& target) {
  detail::require_same_shape(pred, target, "loss_sse");
  const double* p = pred.data();
  const double* t = target.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = p[i] - t[i];
    sum += d * d;
  }
  return sum;
}

double loss_softmax_ce(const Matrix& logits, const Matrix& onehot) {
  detail::require_same_shape(logits, onehot, "loss_softmax_ce");
  double total = 0.0;
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const double* z = logits.data() + r * logits.cols();
    const double* y = onehot.data() + r * logits.cols();
    double row_sum = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) row_sum += y[c];
    if (std::abs(row_sum - 1.0) > 1e-9) {
      throw InputError("loss_softmax_ce: target row " + std::to_string(r) +
                       " does not sum to 1");
    }
    double mx = z[0];
    for (std::size_t c = 1; c < logits.cols(); ++c) mx = std::max(mx, z[c]);
    double denom = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) denom += std::exp(z[c] - mx);
    const double log_denom = std::log(denom);
    double row = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      if (y[c] != 0.0) row -= y[c] * (z[c] - mx - log_denom);
    }
    total += row;
  }
  return total / static_cast<double>(logits.rows());
}

double loss_value(Loss loss, const Matrix& output, const Matrix& targets) {
  return loss == Loss::SumSquaredError ? loss_sse(output, targets)
                                       : loss_softmax_ce(output, targets);
}

}  // namespace sudonet
