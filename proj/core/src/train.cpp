#include "sudonet/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sudonet {

namespace {

Matrix gather_rows(const Matrix& m, const std::vector<std::uint32_t>& idx,
                   std::size_t begin, std::size_t end) {
  Matrix out(end - begin, m.cols());
  for (std::size_t r = begin; r < end; ++r) {
    const double* src = m.data() + static_cast<std::size_t>(idx[r]) * m.cols();
    std::copy(src, src + m.cols(), out.data() + (r - begin) * m.cols());
  }
  return out;
}

double batch_loss(const Network& net, const ForwardTrace& trace, const Matrix& targets) {
  if (net.spec().loss == Loss::SoftmaxCrossEntropy &&
      net.spec().layers.back().activation.kind == Act::Softmax) {
    return loss_softmax_ce(trace.pre.back(), targets);
  }
  return loss_value(net.spec().loss, trace.post.back(), targets);
}

}  // namespace

TrainResult train(Network& net, const Matrix& inputs, const Matrix& targets,
                  const TrainConfig& config, const EpochCallback& on_epoch) {
  if (inputs.rows() != targets.rows()) {
    throw ShapeError("train: inputs " + inputs.shape_str() + " vs targets " +
                     targets.shape_str());
  }
  const std::size_t n = inputs.rows();
  const std::size_t batch = (config.batch_size == 0 || config.batch_size >= n)
                                ? n
                                : config.batch_size;

  Optimizer opt = config.optimizer == OptimizerKind::SgdMomentum
                      ? Optimizer::sgd_momentum(config.learning_rate, config.momentum)
                      : Optimizer::adam(config.learning_rate, config.beta1, config.beta2,
                                        config.epsilon);

  std::mt19937_64 rng(config.seed);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);

  TrainResult result;
  if (on_epoch) on_epoch(0, net);

  ForwardTrace trace;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (batch < n) std::shuffle(order.begin(), order.end(), rng);

    double epoch_loss = 0.0;
    double weighted_rows = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(start + batch, n);
      if (batch == n) {
        net.forward(inputs, trace);
        epoch_loss += batch_loss(net, trace, targets);
        opt.step(net, net.backward(trace, targets));
      } else {
        Matrix bx = gather_rows(inputs, order, start, stop);
        Matrix by = gather_rows(targets, order, start, stop);
        net.forward(bx, trace);
        // Cross-entropy is a per-row mean, so weight it back up before
        // accumulating; SSE already sums.
        const double bl = batch_loss(net, trace, by);
        epoch_loss += net.spec().loss == Loss::SoftmaxCrossEntropy
                          ? bl * static_cast<double>(stop - start)
                          : bl;
        opt.step(net, net.backward(trace, by));
      }
      weighted_rows += static_cast<double>(stop - start);
    }
    if (net.spec().loss == Loss::SoftmaxCrossEntropy) epoch_loss /= weighted_rows;

    result.final_loss = epoch_loss;
    result.epochs_run = epoch;
    if (!std::isfinite(epoch_loss)) {
      result.diverged = true;
      return result;
    }
    if (on_epoch) on_epoch(epoch, net);
  }
  return result;
}

}  // namespace sudonet
