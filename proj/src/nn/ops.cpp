//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/nn/ops.h"

#include <algorithm>
#include <cmath>

#include "voxscreen/error.h"

namespace voxscreen::nn {

std::size_t ConvGeometry::out_edge(std::size_t in_edge) const {
  if (stride == 0)
    return 0;
  const long span = static_cast<long>(in_edge + 2 * padding)
                    - static_cast<long>(filter_edge);
  if (span < 0)
    return 0;
  return static_cast<std::size_t>(span) / stride + 1;
}

std::size_t ConvGeometry::weight_count() const {
  return n_filters * in_channels * filter_edge * filter_edge * filter_edge;
}

Conv3DLayer Conv3DLayer::zeros(const ConvGeometry &g) {
  return { g,
           Tensor({ g.n_filters, g.in_channels, g.filter_edge, g.filter_edge,
                    g.filter_edge }),
           std::vector<double>(g.n_filters, 0.0) };
}

namespace {

struct ConvShape {
  std::size_t batch, in_ch, d, h, w;
  std::size_t od, oh, ow;
};

ConvShape conv_shape(const Tensor &input, const ConvGeometry &g,
                     std::size_t weights, std::size_t bias) {
  if (input.rank() != 5)
    throw Error(ErrorKind::kShape, "conv3d input must be [B][C][D][H][W], got "
                                       + shape_string(input.dims()));
  if (g.filter_edge == 0 || g.stride == 0)
    throw Error(ErrorKind::kShape, "conv3d filter edge and stride must be >= 1");
  if (input.dim(1) != g.in_channels)
    throw Error(ErrorKind::kShape, "conv3d expects " + std::to_string(g.in_channels)
                                       + " input channels, got "
                                       + std::to_string(input.dim(1)));
  if (weights != g.weight_count() || bias != g.n_filters)
    throw Error(ErrorKind::kShape, "conv3d parameter size mismatch");
  ConvShape s { input.dim(0), input.dim(1), input.dim(2), input.dim(3), input.dim(4),
                g.out_edge(input.dim(2)), g.out_edge(input.dim(3)),
                g.out_edge(input.dim(4)) };
  if (s.od == 0 || s.oh == 0 || s.ow == 0)
    throw Error(ErrorKind::kShape, "conv3d output edge < 1 for input "
                                       + shape_string(input.dims()));
  return s;
}

// Output indices o in [lo, hi) with 0 <= o*s - p + off < in.
struct Range {
  std::size_t lo, hi;
};

Range valid_range(std::size_t off, std::size_t in, std::size_t out,
                  const ConvGeometry &g) {
  const long s = static_cast<long>(g.stride);
  const long p = static_cast<long>(g.padding);
  const long o = static_cast<long>(off);
  const long n = static_cast<long>(in);
  // o*s >= p - off
  long lo = p - o <= 0 ? 0 : (p - o + s - 1) / s;
  // o*s <= n - 1 + p - off
  const long top = n - 1 + p - o;
  long hi = top < 0 ? 0 : top / s + 1;
  lo = std::min<long>(lo, static_cast<long>(out));
  hi = std::clamp<long>(hi, lo, static_cast<long>(out));
  return { static_cast<std::size_t>(lo), static_cast<std::size_t>(hi) };
}

struct OffsetRanges {
  std::vector<Range> z, y, x;
};

OffsetRanges offset_ranges(const ConvShape &s, const ConvGeometry &g) {
  OffsetRanges r;
  for (std::size_t k = 0; k < g.filter_edge; ++k) {
    r.z.push_back(valid_range(k, s.d, s.od, g));
    r.y.push_back(valid_range(k, s.h, s.oh, g));
    r.x.push_back(valid_range(k, s.w, s.ow, g));
  }
  return r;
}

}  // namespace

Tensor conv3d_forward(const Tensor &input, const ConvGeometry &g,
                      std::span<const double> weights,
                      std::span<const double> bias) {
  const ConvShape s = conv_shape(input, g, weights.size(), bias.size());
  const OffsetRanges r = offset_ranges(s, g);
  const std::size_t k = g.filter_edge, st = g.stride;
  // Unsigned wraparound cancels: valid ranges keep every index in bounds.
  const std::size_t p = g.padding;
  const std::size_t in_plane = s.d * s.h * s.w, out_plane = s.od * s.oh * s.ow;

  Tensor out({ s.batch, g.n_filters, s.od, s.oh, s.ow });
  for (std::size_t b = 0; b < s.batch; ++b) {
    for (std::size_t f = 0; f < g.n_filters; ++f) {
      double *o = out.data() + (b * g.n_filters + f) * out_plane;
      std::fill(o, o + out_plane, bias[f]);
      for (std::size_t c = 0; c < s.in_ch; ++c) {
        const double *in = input.data() + (b * s.in_ch + c) * in_plane;
        const double *w = weights.data() + (f * s.in_ch + c) * k * k * k;
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t l = 0; l < k; ++l) {
              const double wv = w[(i * k + j) * k + l];
              const Range rx = r.x[l];
              for (std::size_t oz = r.z[i].lo; oz < r.z[i].hi; ++oz) {
                const std::size_t iz = oz * st + i - p;
                for (std::size_t oy = r.y[j].lo; oy < r.y[j].hi; ++oy) {
                  const std::size_t iy = oy * st + j - p;
                  const double *irow = in + (iz * s.h + iy) * s.w;
                  double *orow = o + (oz * s.oh + oy) * s.ow;
                  for (std::size_t ox = rx.lo; ox < rx.hi; ++ox)
                    orow[ox] += wv * irow[ox * st + l - p];
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

Tensor conv3d_forward(const Tensor &input, const Conv3DLayer &layer) {
  return conv3d_forward(input, layer.geometry, layer.weights.values(), layer.bias);
}

void conv3d_backward(const Tensor &grad_out, const Tensor &input,
                     const ConvGeometry &g, std::span<const double> weights,
                     Tensor *grad_input, std::span<double> grad_weights,
                     std::span<double> grad_bias) {
  const ConvShape s = conv_shape(input, g, weights.size(), g.n_filters);
  if (grad_out.dims()
      != std::vector<std::size_t> { s.batch, g.n_filters, s.od, s.oh, s.ow })
    throw Error(ErrorKind::kShape, "conv3d grad_out shape "
                                       + shape_string(grad_out.dims())
                                       + " does not match forward output");
  if (grad_weights.size() != weights.size() || grad_bias.size() != g.n_filters)
    throw Error(ErrorKind::kShape, "conv3d gradient buffer size mismatch");

  const OffsetRanges r = offset_ranges(s, g);
  const std::size_t k = g.filter_edge, st = g.stride;
  // Unsigned wraparound cancels: valid ranges keep every index in bounds.
  const std::size_t p = g.padding;
  const std::size_t in_plane = s.d * s.h * s.w, out_plane = s.od * s.oh * s.ow;
  if (grad_input)
    *grad_input = Tensor(input.dims());

  for (std::size_t b = 0; b < s.batch; ++b) {
    for (std::size_t f = 0; f < g.n_filters; ++f) {
      const double *go = grad_out.data() + (b * g.n_filters + f) * out_plane;
      double bsum = 0;
      for (std::size_t q = 0; q < out_plane; ++q)
        bsum += go[q];
      grad_bias[f] += bsum;
      for (std::size_t c = 0; c < s.in_ch; ++c) {
        const std::size_t in_off = (b * s.in_ch + c) * in_plane;
        const double *in = input.data() + in_off;
        double *gi = grad_input ? grad_input->data() + in_off : nullptr;
        const std::size_t w_off = (f * s.in_ch + c) * k * k * k;
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t l = 0; l < k; ++l) {
              const std::size_t wi = w_off + (i * k + j) * k + l;
              const double wv = weights[wi];
              const Range rx = r.x[l];
              double gw = 0;
              for (std::size_t oz = r.z[i].lo; oz < r.z[i].hi; ++oz) {
                const std::size_t iz = oz * st + i - p;
                for (std::size_t oy = r.y[j].lo; oy < r.y[j].hi; ++oy) {
                  const std::size_t iy = oy * st + j - p;
                  const std::size_t irow = (iz * s.h + iy) * s.w;
                  const double *orow = go + (oz * s.oh + oy) * s.ow;
                  for (std::size_t ox = rx.lo; ox < rx.hi; ++ox) {
                    const std::size_t ix = irow + ox * st + l - p;
                    gw += in[ix] * orow[ox];
                    if (gi)
                      gi[ix] += wv * orow[ox];
                  }
                }
              }
              grad_weights[wi] += gw;
            }
          }
        }
      }
    }
  }
}

ConvGradients conv3d_backward(const Tensor &grad_out, const Tensor &input,
                              const Conv3DLayer &layer) {
  ConvGradients out;
  out.grad_weights.assign(layer.weights.size(), 0.0);
  out.grad_bias.assign(layer.bias.size(), 0.0);
  conv3d_backward(grad_out, input, layer.geometry, layer.weights.values(),
                  &out.grad_input, out.grad_weights, out.grad_bias);
  return out;
}

Tensor relu(const Tensor &input) {
  Tensor out = input;
  for (double &v: out.values())
    v = v > 0 ? v : 0.0;
  return out;
}

Tensor relu_backward(const Tensor &grad_out, const Tensor &input) {
  if (grad_out.dims() != input.dims())
    throw Error(ErrorKind::kShape, "relu_backward shape mismatch");
  Tensor out(input.dims());
  for (std::size_t i = 0; i < input.size(); ++i)
    out[i] = input[i] > 0 ? grad_out[i] : 0.0;
  return out;
}

namespace {
std::size_t row_width(const Tensor &t) { return t.size() / t.dim(0); }
}  // namespace

Tensor fc_forward(const Tensor &input, std::span<const double> weights,
                  std::span<const double> bias) {
  const std::size_t batch = input.dim(0), in = row_width(input), out = bias.size();
  if (out == 0 || weights.size() != out * in)
    throw Error(ErrorKind::kShape, "fc weights do not match input width "
                                       + std::to_string(in));
  Tensor y({ batch, out });
  for (std::size_t b = 0; b < batch; ++b) {
    const double *x = input.data() + b * in;
    for (std::size_t o = 0; o < out; ++o) {
      const double *w = weights.data() + o * in;
      double acc = bias[o];
      for (std::size_t i = 0; i < in; ++i)
        acc += w[i] * x[i];
      y[b * out + o] = acc;
    }
  }
  return y;
}

void fc_backward(const Tensor &grad_out, const Tensor &input,
                 std::span<const double> weights, Tensor *grad_input,
                 std::span<double> grad_weights, std::span<double> grad_bias) {
  const std::size_t batch = input.dim(0), in = row_width(input),
                    out = grad_bias.size();
  if (grad_out.dims() != std::vector<std::size_t> { batch, out }
      || weights.size() != out * in || grad_weights.size() != out * in)
    throw Error(ErrorKind::kShape, "fc_backward shape mismatch");
  if (grad_input)
    *grad_input = Tensor(input.dims());
  for (std::size_t b = 0; b < batch; ++b) {
    const double *x = input.data() + b * in;
    double *gx = grad_input ? grad_input->data() + b * in : nullptr;
    for (std::size_t o = 0; o < out; ++o) {
      const double g = grad_out[b * out + o];
      grad_bias[o] += g;
      if (g == 0)
        continue;
      const double *w = weights.data() + o * in;
      double *gw = grad_weights.data() + o * in;
      for (std::size_t i = 0; i < in; ++i) {
        gw[i] += g * x[i];
        if (gx)
          gx[i] += g * w[i];
      }
    }
  }
}

Tensor softmax(const Tensor &logits) {
  if (logits.rank() != 2)
    throw Error(ErrorKind::kShape, "softmax expects [B][K]");
  const std::size_t rows = logits.dim(0), k = logits.dim(1);
  Tensor out(logits.dims());
  for (std::size_t r = 0; r < rows; ++r) {
    const double *z = logits.data() + r * k;
    const double m = *std::max_element(z, z + k);
    double sum = 0;
    for (std::size_t j = 0; j < k; ++j)
      sum += out[r * k + j] = std::exp(z[j] - m);
    for (std::size_t j = 0; j < k; ++j)
      out[r * k + j] /= sum;
  }
  return out;
}

CostResult logistic_cost(const Tensor &logits, std::span<const int> labels,
                         double normalizer) {
  if (logits.rank() != 2 || logits.dim(1) != 2)
    throw Error(ErrorKind::kShape, "logistic cost expects [B][2] logits, got "
                                       + shape_string(logits.dims()));
  const std::size_t rows = logits.dim(0);
  if (labels.size() != rows)
    throw Error(ErrorKind::kShape, "label count does not match batch");
  if (normalizer <= 0)
    normalizer = static_cast<double>(rows);

  CostResult res;
  res.grad_logits = softmax(logits);
  double total = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const int y = labels[r];
    if (y != 0 && y != 1)
      throw Error(ErrorKind::kValidation, "labels must be 0 or 1");
    const double *z = logits.data() + r * 2;
    // -log softmax via log-sum-exp
    const double m = std::max(z[0], z[1]);
    total += m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m)) - z[y];
    res.grad_logits[r * 2 + y] -= 1.0;
  }
  for (double &g: res.grad_logits.values())
    g /= normalizer;
  res.loss = total / static_cast<double>(rows);
  if (!std::isfinite(res.loss))
    throw Error(ErrorKind::kNumeric, "non-finite loss");
  return res;
}

}  // namespace voxscreen::nn
