//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_NN_NETWORK_H_
#define VOXSCREEN_NN_NETWORK_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxscreen/nn/ops.h"
#include "voxscreen/nn/tensor.h"

namespace voxscreen::nn {

enum class LayerKind { kConv, kRelu, kFlatten, kFc, kLogistic };

struct LayerSpec {
  LayerKind kind = LayerKind::kRelu;
  std::size_t units = 0;        // conv filters or fc outputs
  std::size_t filter_edge = 0;  // conv only
  std::size_t stride = 1;
  std::size_t padding = 0;

  static LayerSpec conv(std::size_t filters, std::size_t edge,
                        std::size_t stride = 1, std::size_t padding = 0);
  static LayerSpec fc(std::size_t units);
  static LayerSpec relu() { return { LayerKind::kRelu }; }
  static LayerSpec flatten() { return { LayerKind::kFlatten }; }
  static LayerSpec logistic() { return { LayerKind::kLogistic }; }

  bool operator==(const LayerSpec &other) const = default;
};

// Per-example activation shape: channels and spatial dims, or a flat
// feature count (d = h = w = 1, flat = true).
struct ActShape {
  std::size_t c = 0, d = 1, h = 1, w = 1;
  bool flat = false;

  std::size_t size() const { return c * d * h * w; }
  bool operator==(const ActShape &other) const = default;
};

struct NetworkConfig {
  std::size_t in_channels = 16;
  std::array<std::size_t, 3> in_dims { 20, 20, 20 };  // D, H, W
  std::vector<LayerSpec> layers;

  // Throws kShape listing every problem. Returns the output shape of each
  // layer, in order.
  std::vector<ActShape> validate() const;
  std::size_t parameter_count() const;

  // Text form, one layer per line (';' also separates):
  //   input C D H W
  //   conv F K [stride [padding]]
  //   relu | flatten | fc N | logistic
  std::string to_text() const;
  static NetworkConfig from_text(std::string_view text);

  bool operator==(const NetworkConfig &other) const = default;
};

// conv(128,5) relu conv(256,3) relu conv(256,3) relu conv(256,3) relu
// flatten fc(1024) relu fc(1024) relu fc(2) logistic.
NetworkConfig atomnet_preset(std::size_t in_channels = 16,
                             std::size_t in_edge = 20);

// Presets by name ("atomnet"); throws kConfig for unknown names.
NetworkConfig preset(std::string_view name, std::size_t in_channels,
                     std::size_t in_edge);

struct ParamBlock {
  std::size_t layer = 0;
  std::size_t weight_offset = 0;
  std::size_t weight_count = 0;
  std::size_t bias_offset = 0;
  std::size_t bias_count = 0;
};

class Network {
public:
  // Validates the config and allocates zeroed parameters.
  explicit Network(NetworkConfig config);

  const NetworkConfig &config() const { return config_; }
  const std::vector<ActShape> &shapes() const { return shapes_; }
  const std::vector<ParamBlock> &blocks() const { return blocks_; }
  std::vector<double> &params() { return params_; }
  const std::vector<double> &params() const { return params_; }
  std::size_t parameter_count() const { return params_.size(); }

  // He init: weights N(0, 2/fan_in), biases 0.
  void initialize(std::uint64_t seed);

  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;
  ConvGeometry conv_geometry(std::size_t layer) const;

  // Input [B][C][D][H][W]. Runs layers [0, stop) (all but the logistic head
  // by default) and returns the last output. If cache is given it receives
  // the input followed by every layer output.
  Tensor forward(const Tensor &input, std::vector<Tensor> *cache = nullptr,
                 std::size_t stop = std::numeric_limits<std::size_t>::max()) const;

  // Back-propagates grad_logits through a full forward cache and
  // accumulates parameter gradients into grads (size parameter_count()).
  void backward(const std::vector<Tensor> &cache, const Tensor &grad_logits,
                std::span<double> grads) const;

  // Index of the logistic head / count of layers evaluated by forward().
  std::size_t head_index() const;

private:
  const ParamBlock *block_for(std::size_t layer) const;

  NetworkConfig config_;
  std::vector<ActShape> shapes_;
  std::vector<ParamBlock> blocks_;
  std::vector<double> params_;
};

// Build a [B][C][D][H][W] tensor from float grids of the network input size.
Tensor batch_tensor(const NetworkConfig &config,
                    std::span<const std::vector<float> *const> grids);

// Mean over poses of softmax p(active). Requires at least one pose.
double predict(const Network &net, std::span<const std::vector<float>> poses);

struct Activation {
  std::array<std::size_t, 3> cell {};  // output cell (z, y, x)
  std::array<double, 3> position {};   // receptive-field center (x, y, z), angstrom
  double value = 0;
};

// Output of the given filter at conv layer `layer` (pre-activation), top_k
// cells by value descending, ties by ascending (z, y, x). Positions use the
// grid convention center = (index + 0.5) * spacing - edge / 2.
std::vector<Activation> filter_activation_map(const Network &net,
                                              const std::vector<float> &grid,
                                              std::size_t layer,
                                              std::size_t filter,
                                              std::size_t top_k,
                                              double spacing = 1.0);

}  // namespace voxscreen::nn

#endif  // VOXSCREEN_NN_NETWORK_H_
