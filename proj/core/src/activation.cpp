#include "sudonet/activation.hpp"

#include <cmath>

namespace sudonet {

namespace {

void check_levels(int levels) {
  if (levels < 2) {
    throw ConfigError("discretized activation requires levels >= 2, got " +
                      std::to_string(levels));
  }
}

void check_finite(double x) {
  if (!std::isfinite(x)) throw InputError("activation input is not finite");
}

// Bin index in [1, levels] for an underlying value u in [-1, 1]. ceil places
// a value sitting exactly on a bin boundary into the lower level; the clamp
// keeps tanh's extremes from minting a level outside the grid.
int sudo_bin(double u, int levels) {
  const double plateau_range = 2.0 / levels;
  long k = static_cast<long>(std::ceil((u + 1.0) / plateau_range));
  if (k < 1) k = 1;
  if (k > levels) k = levels;
  return static_cast<int>(k);
}

}  // namespace

Activation Activation::sudo(int levels) {
  check_levels(levels);
  return {Act::Sudo, levels};
}

Activation Activation::rsudo(int levels) {
  check_levels(levels);
  return {Act::RSudo, levels};
}

std::string Activation::name() const {
  switch (kind) {
    case Act::Linear: return "linear";
    case Act::Tanh: return "tanh";
    case Act::Relu: return "relu";
    case Act::Sudo: return "sudo-" + std::to_string(levels);
    case Act::RSudo: return "r-sudo-" + std::to_string(levels);
    case Act::Softmax: return "softmax";
  }
  return "?";
}

Activation Activation::parse(const std::string& text) {
  if (text == "linear") return linear();
  if (text == "tanh") return tanh();
  if (text == "relu") return relu();
  if (text == "softmax") return softmax();
  for (const char* prefix : {"sudo-", "r-sudo-"}) {
    const std::string p(prefix);
    if (text.rfind(p, 0) == 0) {
      int lv = 0;
      try {
        lv = std::stoi(text.substr(p.size()));
      } catch (const std::exception&) {
        throw ConfigError("bad activation level count in '" + text + "'");
      }
      return p == "sudo-" ? sudo(lv) : rsudo(lv);
    }
  }
  throw ConfigError("unknown activation '" + text + "'");
}

double tanh_forward(double x) {
  check_finite(x);
  return std::tanh(x);
}

double tanh_backward(double x) {
  check_finite(x);
  const double t = std::tanh(x);
  return 1.0 - t * t;
}

double relu_forward(double x) {
  check_finite(x);
  return x > 0.0 ? x : 0.0;
}

double relu_backward(double x) {
  check_finite(x);
  return x > 0.0 ? 1.0 : 0.0;
}

double sudo_level(int j, int levels) {
  // Algebraically -1 + j*2/(levels-1); the integer form keeps the level grid
  // exactly symmetric about zero and the endpoints exactly +-1.
  return static_cast<double>(2 * j - (levels - 1)) / static_cast<double>(levels - 1);
}

double sudo_forward(double x, int levels) {
  check_levels(levels);
  check_finite(x);
  const double u = std::tanh(x);
  return sudo_level(sudo_bin(u, levels) - 1, levels);
}

double sudo_backward(double x, int levels) {
  check_levels(levels);
  return tanh_backward(x);
}

double rsudo_forward(double x, int levels) {
  check_levels(levels);
  check_finite(x);
  const double u = std::tanh(x);
  if (u <= 0.0) return 0.0;
  return sudo_level(sudo_bin(u, levels) - 1, levels);
}

double rsudo_backward(double x, int levels) {
  check_levels(levels);
  check_finite(x);
  const double t = std::tanh(x);
  if (t <= 0.0) return 0.0;
  return 1.0 - t * t;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    const double* src = logits.data() + r * logits.cols();
    double* dst = out.data() + r * logits.cols();
    double mx = src[0];
    for (std::size_t c = 1; c < logits.cols(); ++c) mx = std::max(mx, src[c]);
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      dst[c] = std::exp(src[c] - mx);
      sum += dst[c];
    }
    for (std::size_t c = 0; c < logits.cols(); ++c) dst[c] /= sum;
  }
  return out;
}

Matrix apply_forward(const Activation& a, const Matrix& pre) {
  switch (a.kind) {
    case Act::Linear:
      return pre;
    case Act::Tanh:
      return elementwise(pre, [](double x) { return tanh_forward(x); });
    case Act::Relu:
      return elementwise(pre, [](double x) { return relu_forward(x); });
    case Act::Sudo: {
      const int L = a.levels;
      check_levels(L);
      return elementwise(pre, [L](double x) { return sudo_forward(x, L); });
    }
    case Act::RSudo: {
      const int L = a.levels;
      check_levels(L);
      return elementwise(pre, [L](double x) { return rsudo_forward(x, L); });
    }
    case Act::Softmax:
      return softmax_rows(pre);
  }
  throw ConfigError("unhandled activation kind");
}

Matrix apply_backward(const Activation& a, const Matrix& pre) {
  switch (a.kind) {
    case Act::Linear:
      return Matrix(pre.rows(), pre.cols(), 1.0);
    case Act::Tanh:
      return elementwise(pre, [](double x) { return tanh_backward(x); });
    case Act::Relu:
      return elementwise(pre, [](double x) { return relu_backward(x); });
    case Act::Sudo: {
      const int L = a.levels;
      check_levels(L);
      return elementwise(pre, [L](double x) { return sudo_backward(x, L); });
    }
    case Act::RSudo: {
      const int L = a.levels;
      check_levels(L);
      return elementwise(pre, [L](double x) { return rsudo_backward(x, L); });
    }
    case Act::Softmax:
      throw ConfigError("softmax has no standalone derivative; pair it with the cross-entropy loss");
  }
  throw ConfigError("unhandled activation kind");
}

}  // namespace sudonet
