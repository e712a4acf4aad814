//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_NN_TRAIN_H_
#define VOXSCREEN_NN_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "voxscreen/nn/network.h"

namespace voxscreen::nn {

struct AdaDeltaState {
  std::vector<double> eg2;   // E[g^2]
  std::vector<double> edx2;  // E[dx^2]
  double rho = 0.95;
  double epsilon = 1e-6;

  AdaDeltaState() = default;
  AdaDeltaState(std::size_t n, double rho = 0.95, double epsilon = 1e-6);
};

void adadelta_step(std::span<double> params, std::span<const double> grads,
                   AdaDeltaState &state);

struct TrainConfig {
  std::size_t batch_size = 768;
  std::size_t epochs = 1;
  std::uint64_t seed = 0;
  bool shuffle = true;
  std::size_t threads = 1;
};

// Examples are flattened [C][D][H][W] grids with labels 0/1.
struct Dataset {
  std::vector<std::vector<float>> inputs;
  std::vector<int> labels;

  std::size_t size() const { return inputs.size(); }
};

struct TrainLog {
  std::vector<double> epoch_loss;  // mean per-example loss during the epoch
};

// Per-epoch hook: (epoch index, mean loss).
using EpochCallback = std::function<void(std::size_t, double)>;

// Runs config.epochs epochs starting at epoch index first_epoch (the shuffle
// of epoch e uses derive_seed(seed, "shuffle", e)). Gradients are summed in
// fixed 16-example chunks, in chunk order, so results do not depend on the
// thread count.
TrainLog train(Network &net, AdaDeltaState &state, const Dataset &data,
               const TrainConfig &config, std::size_t first_epoch = 0,
               const EpochCallback &on_epoch = {});

inline constexpr std::size_t kGradientChunk = 16;

}  // namespace voxscreen::nn

#endif  // VOXSCREEN_NN_TRAIN_H_
