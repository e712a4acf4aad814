//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/nn/tensor.h"

#include <cmath>
#include <functional>
#include <numeric>

#include "voxscreen/error.h"

namespace voxscreen::nn {

namespace {
std::size_t product(const std::vector<std::size_t> &dims) {
  if (dims.empty() || dims.size() > 5)
    throw Error(ErrorKind::kShape, "tensor rank must be 1..5");
  for (std::size_t d: dims) {
    if (d == 0)
      throw Error(ErrorKind::kShape, "tensor dims must be positive");
  }
  return std::accumulate(dims.begin(), dims.end(), std::size_t { 1 },
                         std::multiplies<>());
}
}  // namespace

Tensor::Tensor(std::vector<std::size_t> dims, double fill)
    : dims_(std::move(dims)), values_(product(dims_), fill) { }

Tensor::Tensor(std::vector<std::size_t> dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  if (product(dims_) != values_.size())
    throw Error(ErrorKind::kShape, "value count " + std::to_string(values_.size())
                                       + " does not match dims "
                                       + shape_string(dims_));
}

Tensor Tensor::reshaped(std::vector<std::size_t> dims) const {
  return Tensor(std::move(dims), values_);
}

void Tensor::check_finite(const char *where) const {
  for (double v: values_) {
    if (!std::isfinite(v))
      throw Error(ErrorKind::kNumeric, std::string("non-finite value in ") + where);
  }
}

std::string shape_string(const std::vector<std::size_t> &dims) {
  std::string out = "[";
  for (std::size_t i = 0; i < dims.size(); ++i)
    out += (i ? "x" : "") + std::to_string(dims[i]);
  return out + "]";
}

}  // namespace voxscreen::nn
