#ifndef SUDONET_TRAIN_HPP
#define SUDONET_TRAIN_HPP

#include <cstdint>
#include <functional>

#include "sudonet/network.hpp"
#include "sudonet/optimizer.hpp"

namespace sudonet {

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::Adam;
  double learning_rate = 1e-3;
  int epochs = 100;
  std::size_t batch_size = 0;  // 0 = full batch
  std::uint64_t seed = 0;      // minibatch shuffling
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainResult {
  double final_loss = 0.0;
  bool diverged = false;
  int epochs_run = 0;
};

/// Called with (epoch, network): once with epoch 0 before any update, then
/// after each completed epoch.
using EpochCallback = std::function<void(int, const Network&)>;

/// Trains in place. Stops early and flags `diverged` if the running loss
/// stops being finite.
TrainResult train(Network& net, const Matrix& inputs, const Matrix& targets,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace sudonet

#endif  // SUDONET_TRAIN_HPP
