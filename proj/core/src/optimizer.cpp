#include "sudonet/optimizer.hpp"

#include <cmath>

namespace sudonet {

void sgd_momentum_step(Matrix& param, const Matrix& grad, Matrix& velocity,
                       double lr, double momentum) {
  detail::require_same_shape(param, grad, "sgd_momentum_step");
  detail::require_same_shape(param, velocity, "sgd_momentum_step");
  double* p = param.data();
  const double* g = grad.data();
  double* v = velocity.data();
  for (std::size_t i = 0; i < param.size(); ++i) {
    v[i] = momentum * v[i] - lr * g[i];
    p[i] += v[i];
  }
}

void adam_step(Matrix& param, const Matrix& grad, Matrix& m1, Matrix& m2,
               long step, double lr, double beta1, double beta2, double eps) {
  detail::require_same_shape(param, grad, "adam_step");
  detail::require_same_shape(param, m1, "adam_step");
  detail::require_same_shape(param, m2, "adam_step");
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
  double* p = param.data();
  const double* g = grad.data();
  double* m = m1.data();
  double* v = m2.data();
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = m[i] / c1;
    const double vhat = v[i] / c2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

Optimizer Optimizer::sgd_momentum(double lr, double momentum) {
  Optimizer o;
  o.kind_ = OptimizerKind::SgdMomentum;
  o.lr_ = lr;
  o.momentum_ = momentum;
  return o;
}

Optimizer Optimizer::adam(double lr, double beta1, double beta2, double eps) {
  Optimizer o;
  o.kind_ = OptimizerKind::Adam;
  o.lr_ = lr;
  o.beta1_ = beta1;
  o.beta2_ = beta2;
  o.eps_ = eps;
  return o;
}

void Optimizer::step(Network& net, const Gradients& grads) {
  const std::size_t n = net.layer_count();
  if (grads.weights.size() != n || grads.biases.size() != n) {
    throw ShapeError("optimizer step: gradients do not match the network");
  }
  if (slot_a_.empty()) {
    for (std::size_t l = 0; l < n; ++l) {
      slot_a_.push_back(Matrix::zeros(net.weights(l).rows(), net.weights(l).cols()));
      slot_a_.push_back(Matrix::zeros(1, net.biases(l).cols()));
      if (kind_ == OptimizerKind::Adam) {
        slot_b_.push_back(Matrix::zeros(net.weights(l).rows(), net.weights(l).cols()));
        slot_b_.push_back(Matrix::zeros(1, net.biases(l).cols()));
      }
    }
  }
  ++step_;
  for (std::size_t l = 0; l < n; ++l) {
    if (kind_ == OptimizerKind::SgdMomentum) {
      sgd_momentum_step(net.weights(l), grads.weights[l], slot_a_[2 * l], lr_, momentum_);
      sgd_momentum_step(net.biases(l), grads.biases[l], slot_a_[2 * l + 1], lr_, momentum_);
    } else {
      adam_step(net.weights(l), grads.weights[l], slot_a_[2 * l], slot_b_[2 * l], step_,
                lr_, beta1_, beta2_, eps_);
      adam_step(net.biases(l), grads.biases[l], slot_a_[2 * l + 1], slot_b_[2 * l + 1],
                step_, lr_, beta1_, beta2_, eps_);
    }
  }
}

}  // namespace sudonet
