#ifndef SUDONET_ACTIVATION_HPP
#define SUDONET_ACTIVATION_HPP

#include <stdexcept>
#include <string>

#include "sudonet/matrix.hpp"

namespace sudonet {

/// Bad configuration (level counts, network wiring, sweep setup...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad runtime input (non-finite values, malformed targets...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Act { Linear, Tanh, Relu, Sudo, RSudo, Softmax };

/// An activation choice for one layer. `levels` is the number of distinct
/// output values a discretized unit can emit; it is meaningful (and must be
/// >= 2) only for Sudo/RSudo.
struct Activation {
  Act kind = Act::Tanh;
  int levels = 0;

  static Activation linear() { return {Act::Linear, 0}; }
  static Activation tanh() { return {Act::Tanh, 0}; }
  static Activation relu() { return {Act::Relu, 0}; }
  static Activation softmax() { return {Act::Softmax, 0}; }
  static Activation sudo(int levels);
  static Activation rsudo(int levels);

  bool discretized() const { return kind == Act::Sudo || kind == Act::RSudo; }

  /// "tanh", "relu", "sudo-64", "r-sudo-8", "linear", "softmax".
  std::string name() const;

  /// Parses the names produced by name(); also accepts bare "sudo"/"r-sudo"
  /// combined with an explicit level count.
  static Activation parse(const std::string& text);

  bool operator==(const Activation&) const = default;
};

// Scalar forward/backward pairs. The discretized units quantize tanh into
// `levels` output values on the forward pass and report the plain tanh
// derivative on the backward pass; the quantizer itself contributes no
// gradient.
double tanh_forward(double x);
double tanh_backward(double x);
double relu_forward(double x);
double relu_backward(double x);  // subgradient at 0 is 0
double sudo_forward(double x, int levels);
double sudo_backward(double x, int levels);
double rsudo_forward(double x, int levels);
double rsudo_backward(double x, int levels);

/// The j-th output level of a `levels`-level unit, j in [0, levels):
/// -1 + j * 2/(levels-1), computed as an exact integer ratio.
double sudo_level(int j, int levels);

/// Elementwise forward over a batch of pre-activations. Softmax is applied
/// row-wise with max-subtraction.
Matrix apply_forward(const Activation& a, const Matrix& pre);

/// Elementwise derivative evaluated at the pre-activations. Not defined for
/// Softmax (its gradient only exists fused with the cross-entropy loss).
Matrix apply_backward(const Activation& a, const Matrix& pre);

/// Row-wise stabilized softmax (exported for loss computation).
Matrix softmax_rows(const Matrix& logits);

}  // namespace sudonet

#endif  // SUDONET_ACTIVATION_HPP
