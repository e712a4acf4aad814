//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_NN_OPS_H_
#define VOXSCREEN_NN_OPS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "voxscreen/nn/tensor.h"

namespace voxscreen::nn {

struct ConvGeometry {
  std::size_t in_channels = 1;
  std::size_t n_filters = 1;
  std::size_t filter_edge = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;

  // floor((in + 2p - k) / s) + 1; 0 when the filter does not fit.
  std::size_t out_edge(std::size_t in_edge) const;
  std::size_t weight_count() const;
};

// Weights are [n_filters][in_channels][k][k][k], kernel axes ordered z, y, x.
struct Conv3DLayer {
  ConvGeometry geometry;
  Tensor weights;
  std::vector<double> bias;

  static Conv3DLayer zeros(const ConvGeometry &geometry);
};

// Input [B][C][D][H][W] -> [B][F][D'][H'][W'], zero padding.
Tensor conv3d_forward(const Tensor &input, const ConvGeometry &geometry,
                      std::span<const double> weights,
                      std::span<const double> bias);
Tensor conv3d_forward(const Tensor &input, const Conv3DLayer &layer);

// grad_input (if non-null) is overwritten; grad_weights and grad_bias are
// accumulated into.
void conv3d_backward(const Tensor &grad_out, const Tensor &input,
                     const ConvGeometry &geometry,
                     std::span<const double> weights, Tensor *grad_input,
                     std::span<double> grad_weights,
                     std::span<double> grad_bias);

struct ConvGradients {
  Tensor grad_input;
  std::vector<double> grad_weights;
  std::vector<double> grad_bias;
};

ConvGradients conv3d_backward(const Tensor &grad_out, const Tensor &input,
                              const Conv3DLayer &layer);

Tensor relu(const Tensor &input);
// Gradient passes where input > 0 only.
Tensor relu_backward(const Tensor &grad_out, const Tensor &input);

// Input [B][...] is read as [B][in]; weights are [out][in] row-major.
Tensor fc_forward(const Tensor &input, std::span<const double> weights,
                  std::span<const double> bias);

// grad_input (if non-null) is overwritten with shape of input; weight and
// bias gradients accumulate.
void fc_backward(const Tensor &grad_out, const Tensor &input,
                 std::span<const double> weights, Tensor *grad_input,
                 std::span<double> grad_weights, std::span<double> grad_bias);

// Row-wise softmax of [B][K] with max subtraction.
Tensor softmax(const Tensor &logits);

struct CostResult {
  double loss = 0;      // mean over rows of -log p(true class)
  Tensor grad_logits;   // (softmax - onehot) / normalizer
};

// Two-class logistic cost. normalizer defaults to the row count; training
// passes the full minibatch size when a batch is processed in chunks.
CostResult logistic_cost(const Tensor &logits, std::span<const int> labels,
                         double normalizer = 0);

}  // namespace voxscreen::nn

#endif  // VOXSCREEN_NN_OPS_H_
