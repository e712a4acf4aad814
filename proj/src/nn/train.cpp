//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/nn/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen::nn {

AdaDeltaState::AdaDeltaState(std::size_t n, double rho_, double epsilon_)
    : eg2(n, 0.0), edx2(n, 0.0), rho(rho_), epsilon(epsilon_) { }

void adadelta_step(std::span<double> params, std::span<const double> grads,
                   AdaDeltaState &s) {
  if (grads.size() != params.size() || s.eg2.size() != params.size()
      || s.edx2.size() != params.size())
    throw Error(ErrorKind::kShape, "adadelta size mismatch");
  const double rho = s.rho, eps = s.epsilon;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    s.eg2[i] = rho * s.eg2[i] + (1 - rho) * g * g;
    const double dx = -(std::sqrt(s.edx2[i] + eps) / std::sqrt(s.eg2[i] + eps)) * g;
    s.edx2[i] = rho * s.edx2[i] + (1 - rho) * dx * dx;
    params[i] += dx;
  }
}

TrainLog train(Network &net, AdaDeltaState &state, const Dataset &data,
               const TrainConfig &config, std::size_t first_epoch,
               const EpochCallback &on_epoch) {
  if (config.batch_size == 0)
    throw Error(ErrorKind::kConfig, "batch_size must be >= 1");
  if (data.size() == 0)
    throw Error(ErrorKind::kValidation, "empty training set");
  if (data.labels.size() != data.size())
    throw Error(ErrorKind::kShape, "label count does not match inputs");
  const NetworkConfig &cfg = net.config();
  const std::size_t per =
      cfg.in_channels * cfg.in_dims[0] * cfg.in_dims[1] * cfg.in_dims[2];
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.inputs[i].size() != per)
      throw Error(ErrorKind::kShape, "example " + std::to_string(i)
                                         + " does not match network input size");
    if (data.labels[i] != 0 && data.labels[i] != 1)
      throw Error(ErrorKind::kValidation, "example " + std::to_string(i)
                                              + " is unlabeled");
  }
  if (state.eg2.empty() && state.edx2.empty())
    state = AdaDeltaState(net.parameter_count(), state.rho, state.epsilon);
  if (state.eg2.size() != net.parameter_count()
      || state.edx2.size() != net.parameter_count())
    throw Error(ErrorKind::kShape, "optimizer state has "
                                       + std::to_string(state.eg2.size())
                                       + " entries for a network with "
                                       + std::to_string(net.parameter_count())
                                       + " parameters");

  const std::size_t n_params = net.parameter_count();
  TrainLog log;
  std::vector<std::size_t> order(data.size());

  for (std::size_t e = 0; e < config.epochs; ++e) {
    const std::size_t epoch = first_epoch + e;
    std::iota(order.begin(), order.end(), 0);
    if (config.shuffle) {
      Rng rng(derive_seed(config.seed, "shuffle", epoch));
      rng.shuffle(order);
    }

    double epoch_loss = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const std::size_t bsz = stop - start;
      const std::size_t n_chunks = (bsz + kGradientChunk - 1) / kGradientChunk;
      std::vector<std::vector<double>> chunk_grads(n_chunks);
      std::vector<double> chunk_loss(n_chunks, 0.0);

      parallel_for(n_chunks, config.threads, [&](std::size_t c) {
        const std::size_t lo = start + c * kGradientChunk;
        const std::size_t hi = std::min(stop, lo + kGradientChunk);
        std::vector<const std::vector<float> *> grids;
        std::vector<int> labels;
        for (std::size_t i = lo; i < hi; ++i) {
          grids.push_back(&data.inputs[order[i]]);
          labels.push_back(data.labels[order[i]]);
        }
        std::vector<Tensor> cache;
        const Tensor logits = net.forward(batch_tensor(cfg, grids), &cache);
        const CostResult cost =
            logistic_cost(logits, labels, static_cast<double>(bsz));
        chunk_grads[c].assign(n_params, 0.0);
        net.backward(cache, cost.grad_logits, chunk_grads[c]);
        chunk_loss[c] = cost.loss * static_cast<double>(hi - lo);
      });

      std::vector<double> grads(n_params, 0.0);
      for (std::size_t c = 0; c < n_chunks; ++c) {
        for (std::size_t i = 0; i < n_params; ++i)
          grads[i] += chunk_grads[c][i];
        epoch_loss += chunk_loss[c];
      }
      for (double g: grads) {
        if (!std::isfinite(g))
          throw Error(ErrorKind::kNumeric, "non-finite gradient in epoch "
                                               + std::to_string(epoch));
      }
      adadelta_step(net.params(), grads, state);
    }
    epoch_loss /= static_cast<double>(data.size());
    if (!std::isfinite(epoch_loss))
      throw Error(ErrorKind::kNumeric, "non-finite loss in epoch " + std::to_string(epoch));
    log.epoch_loss.push_back(epoch_loss);
    if (on_epoch)
      on_epoch(epoch, epoch_loss);
  }
  return log;
}

}  // namespace voxscreen::nn
