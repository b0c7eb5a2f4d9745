#ifndef SUDONET_NETWORK_HPP
#define SUDONET_NETWORK_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sudonet/activation.hpp"
#include "sudonet/matrix.hpp"

namespace sudonet {

/// Model file problems (bad magic, truncation...).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Loss { SumSquaredError, SoftmaxCrossEntropy };

struct LayerSpec {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  Activation activation;

  bool operator==(const LayerSpec&) const = default;
};

/// Fully connected layer stack; every layer feeds the next, no skips.
struct NetworkSpec {
  std::vector<LayerSpec> layers;
  Loss loss = Loss::SumSquaredError;

  std::size_t input_dim() const { return layers.front().input_dim; }
  std::size_t output_dim() const { return layers.back().output_dim; }

  /// Dims chain, dims >= 1, softmax only on the final layer, cross-entropy
  /// only behind a linear or softmax final layer. Throws ConfigError.
  void validate() const;

  bool operator==(const NetworkSpec&) const = default;
};

/// Per-layer pre-activations and outputs for one batch. Backward needs the
/// pre-activations because discretized units differentiate the underlying
/// tanh at the pre-activation, never the quantized output.
struct ForwardTrace {
  Matrix input;
  std::vector<Matrix> pre;
  std::vector<Matrix> post;
};

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Matrix> biases;
};

class Network {
 public:
  Network() = default;

  /// Weights uniform in +-sqrt(6/(fan_in+fan_out)), biases zero.
  /// Deterministic given the seed.
  static Network init(const NetworkSpec& spec, std::uint64_t seed);

  const NetworkSpec& spec() const { return spec_; }
  std::size_t layer_count() const { return spec_.layers.size(); }

  Matrix& weights(std::size_t layer) { return weights_[layer]; }
  const Matrix& weights(std::size_t layer) const { return weights_[layer]; }
  Matrix& biases(std::size_t layer) { return biases_[layer]; }
  const Matrix& biases(std::size_t layer) const { return biases_[layer]; }

  /// Forward pass without keeping intermediates.
  Matrix forward(const Matrix& batch) const;

  /// Forward pass that records the trace needed by backward().
  Matrix forward(const Matrix& batch, ForwardTrace& trace) const;

  /// Loss gradients for every weight and bias. For SumSquaredError the
  /// output delta is 2*(prediction - target); for SoftmaxCrossEntropy it is
  /// (softmax(logits) - onehot)/batch_rows.
  Gradients backward(const ForwardTrace& trace, const Matrix& targets) const;

  void save(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static Network load(std::istream& in);
  static Network load(const std::filesystem::path& path);

  bool operator==(const Network&) const = default;

 private:
  NetworkSpec spec_;
  std::vector<Matrix> weights_;  // input_dim x output_dim per layer
  std::vector<Matrix> biases_;   // 1 x output_dim per layer
};

/// Sum of squared differences over all entries; no averaging.
double loss_sse(const Matrix& pred, const Matrix& target);

/// Mean over rows of -sum(onehot * log softmax(logits)), stabilized by
/// row-max subtraction. Rows of onehot must sum to 1.
double loss_softmax_ce(const Matrix& logits, const Matrix& onehot);

/// Dispatch on the configured loss; `output` is the network output (logits
/// when the final layer is linear under cross-entropy).
double loss_value(Loss loss, const Matrix& output, const Matrix& targets);

}  // namespace sudonet

#endif  // SUDONET_NETWORK_HPP
