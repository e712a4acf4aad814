//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_NN_TENSOR_H_
#define VOXSCREEN_NN_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace voxscreen::nn {

// Dense row-major tensor of up to five dims: [batch][channels][D][H][W] for
// volumes, [batch][features] for the fully connected part.
class Tensor {
public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims, double fill = 0.0);
  Tensor(std::vector<std::size_t> dims, std::vector<double> values);

  const std::vector<std::size_t> &dims() const { return dims_; }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return values_.size(); }

  std::vector<double> &values() { return values_; }
  const std::vector<double> &values() const { return values_; }
  double *data() { return values_.data(); }
  const double *data() const { return values_.data(); }
  double &operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Same values, new dims with an equal product.
  Tensor reshaped(std::vector<std::size_t> dims) const;

  // Throws kNumeric if any value is NaN or infinite.
  void check_finite(const char *where) const;

private:
  std::vector<std::size_t> dims_;
  std::vector<double> values_;
};

std::string shape_string(const std::vector<std::size_t> &dims);

}  // namespace voxscreen::nn

#endif  // VOXSCREEN_NN_TENSOR_H_
