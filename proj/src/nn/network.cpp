//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/nn/network.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen::nn {

LayerSpec LayerSpec::conv(std::size_t filters, std::size_t edge,
                          std::size_t stride, std::size_t padding) {
  return { LayerKind::kConv, filters, edge, stride, padding };
}

LayerSpec LayerSpec::fc(std::size_t units) {
  return { LayerKind::kFc, units, 0, 1, 0 };
}

namespace {
std::string join(const std::vector<std::string> &items) {
  std::string out;
  for (const auto &s: items)
    out += (out.empty() ? "" : "; ") + s;
  return out;
}

std::string layer_name(std::size_t i, const LayerSpec &l) {
  static constexpr const char *kNames[] = { "conv", "relu", "flatten", "fc",
                                            "logistic" };
  return "layer " + std::to_string(i) + " (" + kNames[static_cast<int>(l.kind)]
         + ")";
}
}  // namespace

std::vector<ActShape> NetworkConfig::validate() const {
  std::vector<std::string> problems;
  std::vector<ActShape> shapes;
  ActShape cur { in_channels, in_dims[0], in_dims[1], in_dims[2], false };
  if (in_channels == 0)
    problems.push_back("input channels must be >= 1");
  if (in_dims[0] == 0 || in_dims[1] == 0 || in_dims[2] == 0)
    problems.push_back("input dims must be >= 1");
  if (layers.empty())
    problems.push_back("no layers");

  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec &l = layers[i];
    const std::string name = layer_name(i, l);
    switch (l.kind) {
    case LayerKind::kConv: {
      if (cur.flat)
        problems.push_back(name + ": input is already flattened");
      if (l.units == 0 || l.filter_edge == 0 || l.stride == 0) {
        problems.push_back(name + ": filters, edge and stride must be >= 1");
        cur = { std::max<std::size_t>(l.units, 1), 1, 1, 1, false };
        break;
      }
      ConvGeometry g { cur.c, l.units, l.filter_edge, l.stride, l.padding };
      ActShape next { l.units, g.out_edge(cur.d), g.out_edge(cur.h),
                      g.out_edge(cur.w), false };
      if (next.d == 0 || next.h == 0 || next.w == 0) {
        problems.push_back(name + ": output edge < 1 for input "
                           + std::to_string(cur.d) + "x" + std::to_string(cur.h)
                           + "x" + std::to_string(cur.w));
        next.d = std::max<std::size_t>(next.d, 1);
        next.h = std::max<std::size_t>(next.h, 1);
        next.w = std::max<std::size_t>(next.w, 1);
      }
      cur = next;
      break;
    }
    case LayerKind::kRelu:
      break;
    case LayerKind::kFlatten:
      cur = { cur.size(), 1, 1, 1, true };
      break;
    case LayerKind::kFc:
      if (!cur.flat)
        problems.push_back(name + ": needs a flatten layer before it");
      if (l.units == 0)
        problems.push_back(name + ": units must be >= 1");
      cur = { std::max<std::size_t>(l.units, 1), 1, 1, 1, true };
      break;
    case LayerKind::kLogistic:
      if (i + 1 != layers.size())
        problems.push_back(name + ": must be the last layer");
      if (!(cur.flat && cur.c == 2))
        problems.push_back(name + ": needs a 2-unit fc layer before it");
      break;
    }
    shapes.push_back(cur);
  }
  if (!layers.empty() && layers.back().kind != LayerKind::kLogistic)
    problems.push_back("last layer must be logistic");
  if (!problems.empty())
    throw Error(ErrorKind::kShape, "invalid network: " + join(problems));
  return shapes;
}

std::size_t NetworkConfig::parameter_count() const {
  const auto shapes = validate();
  std::size_t total = 0;
  std::size_t prev_c = in_channels, prev_size = in_channels * in_dims[0] * in_dims[1] * in_dims[2];
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec &l = layers[i];
    if (l.kind == LayerKind::kConv)
      total += l.units * prev_c * l.filter_edge * l.filter_edge * l.filter_edge
               + l.units;
    else if (l.kind == LayerKind::kFc)
      total += l.units * prev_size + l.units;
    prev_c = shapes[i].c;
    prev_size = shapes[i].size();
  }
  return total;
}

std::string NetworkConfig::to_text() const {
  std::string out = "input " + std::to_string(in_channels) + ' '
                    + std::to_string(in_dims[0]) + ' ' + std::to_string(in_dims[1])
                    + ' ' + std::to_string(in_dims[2]) + '\n';
  for (const LayerSpec &l: layers) {
    switch (l.kind) {
    case LayerKind::kConv:
      out += "conv " + std::to_string(l.units) + ' ' + std::to_string(l.filter_edge)
             + ' ' + std::to_string(l.stride) + ' ' + std::to_string(l.padding);
      break;
    case LayerKind::kRelu: out += "relu"; break;
    case LayerKind::kFlatten: out += "flatten"; break;
    case LayerKind::kFc: out += "fc " + std::to_string(l.units); break;
    case LayerKind::kLogistic: out += "logistic"; break;
    }
    out += '\n';
  }
  return out;
}

NetworkConfig NetworkConfig::from_text(std::string_view text) {
  std::string norm(text);
  std::replace(norm.begin(), norm.end(), ';', '\n');
  NetworkConfig cfg;
  cfg.layers.clear();
  bool have_input = false;
  auto lines = split_lines(norm);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::vector<std::string_view> tok;
    for (auto t: split(trim(lines[ln]), ' ')) {
      if (!trim(t).empty())
        tok.push_back(trim(t));
    }
    if (tok.empty() || tok[0].starts_with('#'))
      continue;
    std::vector<std::size_t> nums;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      long v = 0;
      if (!parse_int(tok[i], v) || v < 0)
        throw ParseError("bad number '" + std::string(tok[i]) + "'", ln + 1);
      nums.push_back(static_cast<std::size_t>(v));
    }
    auto need = [&](std::size_t lo, std::size_t hi) {
      if (nums.size() < lo || nums.size() > hi)
        throw ParseError("wrong argument count for '" + std::string(tok[0]) + "'",
                         ln + 1);
    };
    const std::string_view kw = tok[0];
    if (kw == "input") {
      need(4, 4);
      cfg.in_channels = nums[0];
      cfg.in_dims = { nums[1], nums[2], nums[3] };
      have_input = true;
    } else if (kw == "conv") {
      need(2, 4);
      cfg.layers.push_back(LayerSpec::conv(nums[0], nums[1],
                                           nums.size() > 2 ? nums[2] : 1,
                                           nums.size() > 3 ? nums[3] : 0));
    } else if (kw == "relu") {
      need(0, 0);
      cfg.layers.push_back(LayerSpec::relu());
    } else if (kw == "flatten") {
      need(0, 0);
      cfg.layers.push_back(LayerSpec::flatten());
    } else if (kw == "fc") {
      need(1, 1);
      cfg.layers.push_back(LayerSpec::fc(nums[0]));
    } else if (kw == "logistic") {
      need(0, 0);
      cfg.layers.push_back(LayerSpec::logistic());
    } else {
      throw ParseError("unknown layer '" + std::string(kw) + "'", ln + 1);
    }
  }
  if (!have_input)
    throw Error(ErrorKind::kParse, "network text needs an 'input' line");
  return cfg;
}

NetworkConfig atomnet_preset(std::size_t in_channels, std::size_t in_edge) {
  NetworkConfig cfg;
  cfg.in_channels = in_channels;
  cfg.in_dims = { in_edge, in_edge, in_edge };
  cfg.layers = {
    LayerSpec::conv(128, 5), LayerSpec::relu(), LayerSpec::conv(256, 3),
    LayerSpec::relu(),       LayerSpec::conv(256, 3), LayerSpec::relu(),
    LayerSpec::conv(256, 3), LayerSpec::relu(),       LayerSpec::flatten(),
    LayerSpec::fc(1024),     LayerSpec::relu(),       LayerSpec::fc(1024),
    LayerSpec::relu(),       LayerSpec::fc(2),        LayerSpec::logistic(),
  };
  return cfg;
}

NetworkConfig preset(std::string_view name, std::size_t in_channels,
                     std::size_t in_edge) {
  if (name == "atomnet")
    return atomnet_preset(in_channels, in_edge);
  throw Error(ErrorKind::kConfig, "unknown network preset '" + std::string(name) + "'");
}

Network::Network(NetworkConfig config)
    : config_(std::move(config)), shapes_(config_.validate()) {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < config_.layers.size(); ++i) {
    const LayerSpec &l = config_.layers[i];
    const std::size_t in_c = i == 0 ? config_.in_channels : shapes_[i - 1].c;
    const std::size_t in_size =
        i == 0 ? config_.in_channels * config_.in_dims[0] * config_.in_dims[1]
                     * config_.in_dims[2]
               : shapes_[i - 1].size();
    std::size_t wc = 0;
    if (l.kind == LayerKind::kConv)
      wc = l.units * in_c * l.filter_edge * l.filter_edge * l.filter_edge;
    else if (l.kind == LayerKind::kFc)
      wc = l.units * in_size;
    else
      continue;
    blocks_.push_back({ i, offset, wc, offset + wc, l.units });
    offset += wc + l.units;
  }
  params_.assign(offset, 0.0);
}

void Network::initialize(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "init"));
  for (const ParamBlock &b: blocks_) {
    const std::size_t fan_in = b.weight_count / b.bias_count;
    const double sd = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < b.weight_count; ++i)
      params_[b.weight_offset + i] = sd * rng.normal();
    std::fill_n(params_.begin() + static_cast<long>(b.bias_offset), b.bias_count, 0.0);
  }
}

const ParamBlock *Network::block_for(std::size_t layer) const {
  for (const ParamBlock &b: blocks_) {
    if (b.layer == layer)
      return &b;
  }
  return nullptr;
}

std::span<double> Network::weights(std::size_t layer) {
  const ParamBlock *b = block_for(layer);
  if (!b)
    throw Error(ErrorKind::kValidation, "layer has no parameters");
  return { params_.data() + b->weight_offset, b->weight_count };
}

std::span<const double> Network::weights(std::size_t layer) const {
  return const_cast<Network *>(this)->weights(layer);
}

std::span<double> Network::bias(std::size_t layer) {
  const ParamBlock *b = block_for(layer);
  if (!b)
    throw Error(ErrorKind::kValidation, "layer has no parameters");
  return { params_.data() + b->bias_offset, b->bias_count };
}

std::span<const double> Network::bias(std::size_t layer) const {
  return const_cast<Network *>(this)->bias(layer);
}

ConvGeometry Network::conv_geometry(std::size_t layer) const {
  if (layer >= config_.layers.size() || config_.layers[layer].kind != LayerKind::kConv)
    throw Error(ErrorKind::kValidation,
                "layer " + std::to_string(layer) + " is not convolutional");
  const LayerSpec &l = config_.layers[layer];
  const std::size_t in_c = layer == 0 ? config_.in_channels : shapes_[layer - 1].c;
  return { in_c, l.units, l.filter_edge, l.stride, l.padding };
}

std::size_t Network::head_index() const { return config_.layers.size() - 1; }

Tensor Network::forward(const Tensor &input, std::vector<Tensor> *cache,
                        std::size_t stop) const {
  stop = std::min(stop, head_index());
  const std::vector<std::size_t> want { input.rank() == 5 ? input.dim(0) : 0,
                                        config_.in_channels, config_.in_dims[0],
                                        config_.in_dims[1], config_.in_dims[2] };
  if (input.dims() != want)
    throw Error(ErrorKind::kShape, "network input shape " + shape_string(input.dims())
                                       + " does not match config");
  if (cache) {
    cache->clear();
    cache->push_back(input);
  }
  Tensor x = input;
  for (std::size_t i = 0; i < stop; ++i) {
    const LayerSpec &l = config_.layers[i];
    switch (l.kind) {
    case LayerKind::kConv:
      x = conv3d_forward(x, conv_geometry(i), weights(i), bias(i));
      break;
    case LayerKind::kRelu:
      x = relu(x);
      break;
    case LayerKind::kFlatten:
      x = x.reshaped({ x.dim(0), x.size() / x.dim(0) });
      break;
    case LayerKind::kFc:
      x = fc_forward(x, weights(i), bias(i));
      break;
    case LayerKind::kLogistic:
      break;
    }
    x.check_finite("forward pass");
    if (cache)
      cache->push_back(x);
  }
  return x;
}

void Network::backward(const std::vector<Tensor> &cache, const Tensor &grad_logits,
                       std::span<double> grads) const {
  const std::size_t head = head_index();
  if (cache.size() != head + 1)
    throw Error(ErrorKind::kShape, "backward needs a full forward cache");
  if (grads.size() != params_.size())
    throw Error(ErrorKind::kShape, "gradient buffer size mismatch");
  if (grad_logits.dims() != cache.back().dims())
    throw Error(ErrorKind::kShape, "grad_logits shape mismatch");

  Tensor g = grad_logits;
  for (std::size_t i = head; i-- > 0;) {
    const LayerSpec &l = config_.layers[i];
    const Tensor &in = cache[i];
    Tensor gin;
    const ParamBlock *b = block_for(i);
    switch (l.kind) {
    case LayerKind::kConv:
      conv3d_backward(g, in, conv_geometry(i), weights(i), i > 0 ? &gin : nullptr,
                      grads.subspan(b->weight_offset, b->weight_count),
                      grads.subspan(b->bias_offset, b->bias_count));
      break;
    case LayerKind::kRelu:
      gin = relu_backward(g, in);
      break;
    case LayerKind::kFlatten:
      gin = g.reshaped(in.dims());
      break;
    case LayerKind::kFc:
      fc_backward(g, in, weights(i), i > 0 ? &gin : nullptr,
                  grads.subspan(b->weight_offset, b->weight_count),
                  grads.subspan(b->bias_offset, b->bias_count));
      break;
    case LayerKind::kLogistic:
      break;
    }
    if (i > 0)
      g = std::move(gin);
  }
}

Tensor batch_tensor(const NetworkConfig &config,
                    std::span<const std::vector<float> *const> grids) {
  const std::size_t per =
      config.in_channels * config.in_dims[0] * config.in_dims[1] * config.in_dims[2];
  if (grids.empty())
    throw Error(ErrorKind::kShape, "empty batch");
  Tensor t({ grids.size(), config.in_channels, config.in_dims[0], config.in_dims[1],
             config.in_dims[2] });
  for (std::size_t b = 0; b < grids.size(); ++b) {
    if (grids[b]->size() != per)
      throw Error(ErrorKind::kShape, "grid has " + std::to_string(grids[b]->size())
                                         + " values, network expects "
                                         + std::to_string(per));
    std::copy(grids[b]->begin(), grids[b]->end(), t.data() + b * per);
  }
  return t;
}

double predict(const Network &net, std::span<const std::vector<float>> poses) {
  if (poses.empty())
    throw Error(ErrorKind::kValidation, "predict needs at least one pose");
  constexpr std::size_t kChunk = 16;
  double sum = 0;
  for (std::size_t start = 0; start < poses.size(); start += kChunk) {
    std::vector<const std::vector<float> *> ptrs;
    for (std::size_t i = start; i < std::min(poses.size(), start + kChunk); ++i)
      ptrs.push_back(&poses[i]);
    const Tensor p = softmax(net.forward(batch_tensor(net.config(), ptrs)));
    for (std::size_t r = 0; r < ptrs.size(); ++r)
      sum += p[r * 2 + 1];
  }
  return sum / static_cast<double>(poses.size());
}

std::vector<Activation> filter_activation_map(const Network &net,
                                              const std::vector<float> &grid,
                                              std::size_t layer, std::size_t filter,
                                              std::size_t top_k, double spacing) {
  const NetworkConfig &cfg = net.config();
  const ConvGeometry g = net.conv_geometry(layer);
  if (filter >= g.n_filters)
    throw Error(ErrorKind::kValidation, "filter index " + std::to_string(filter)
                                            + " out of range for "
                                            + std::to_string(g.n_filters)
                                            + " filters");
  if (!(spacing > 0))
    throw Error(ErrorKind::kValidation, "spacing must be positive");

  const std::vector<const std::vector<float> *> ptrs { &grid };
  const Tensor out = net.forward(batch_tensor(cfg, ptrs), nullptr, layer + 1);
  const std::size_t d = out.dim(2), h = out.dim(3), w = out.dim(4);
  const std::size_t plane = d * h * w;
  const double *v = out.data() + filter * plane;

  std::vector<std::size_t> order(plane);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  order.resize(std::min(top_k, plane));

  std::vector<Activation> result;
  for (std::size_t idx: order) {
    Activation a;
    a.cell = { idx / (h * w), (idx / w) % h, idx % w };
    a.value = v[idx];
    // Receptive-field center, walked back through every conv layer.
    std::array<double, 3> c { double(a.cell[0]), double(a.cell[1]), double(a.cell[2]) };
    for (std::size_t i = layer + 1; i-- > 0;) {
      const LayerSpec &l = cfg.layers[i];
      if (l.kind != LayerKind::kConv)
        continue;
      for (double &x: c)
        x = x * double(l.stride) - double(l.padding) + (double(l.filter_edge) - 1) / 2;
    }
    // (z, y, x) -> (x, y, z)
    for (int axis = 0; axis < 3; ++axis) {
      const double edge = double(cfg.in_dims[axis]) * spacing;
      a.position[2 - axis] = (c[axis] + 0.5) * spacing - edge / 2;
    }
    result.push_back(a);
  }
  return result;
}

}  // namespace voxscreen::nn
