#ifndef SUDONET_OPTIMIZER_HPP
#define SUDONET_OPTIMIZER_HPP

#include <cstdint>
#include <vector>

#include "sudonet/matrix.hpp"
#include "sudonet/network.hpp"

namespace sudonet {

enum class OptimizerKind { SgdMomentum, Adam };

/// v <- momentum*v - lr*grad; param <- param + v.
void sgd_momentum_step(Matrix& param, const Matrix& grad, Matrix& velocity,
                       double lr, double momentum);

/// Standard Adam with bias correction; `step` is the 1-based update count.
void adam_step(Matrix& param, const Matrix& grad, Matrix& m1, Matrix& m2,
               long step, double lr, double beta1, double beta2, double eps);

/// Owns the per-parameter state for one training loop. State tensors are
/// created on the first step and always mirror the parameter shapes.
class Optimizer {
 public:
  static Optimizer sgd_momentum(double lr, double momentum = 0.9);
  static Optimizer adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
                        double eps = 1e-8);

  OptimizerKind kind() const { return kind_; }
  double learning_rate() const { return lr_; }
  long steps_taken() const { return step_; }

  void step(Network& net, const Gradients& grads);

 private:
  Optimizer() = default;

  OptimizerKind kind_ = OptimizerKind::SgdMomentum;
  double lr_ = 1e-3;
  double momentum_ = 0.9;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long step_ = 0;
  std::vector<Matrix> slot_a_;  // velocity (SGD) or first moment (Adam)
  std::vector<Matrix> slot_b_;  // second moment (Adam)
};

}  // namespace sudonet

#endif  // SUDONET_OPTIMIZER_HPP
