//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_NN_CHECKPOINT_H_
#define VOXSCREEN_NN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxscreen/nn/network.h"
#include "voxscreen/nn/train.h"

namespace voxscreen::nn {

// Little-endian: "VXNN", u32 version, u32 config length, config text,
// u64 parameter count, float32 params (layer order, weights then bias),
// f64 rho, f64 epsilon, float32 E[g^2], float32 E[dx^2].
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const Network &net,
                                            const AdaDeltaState &state);

struct Model {
  Network net;
  AdaDeltaState state;
};

Model decode_checkpoint(std::span<const std::uint8_t> bytes);

void write_checkpoint(const std::filesystem::path &path, const Network &net,
                      const AdaDeltaState &state);
Model read_checkpoint(const std::filesystem::path &path);

// Text sidecar: seed, completed epochs, per-epoch losses.
struct TrainManifest {
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  std::vector<double> losses;

  bool operator==(const TrainManifest &other) const = default;
};

std::string write_train_manifest(const TrainManifest &m);
TrainManifest read_train_manifest(std::string_view text);

}  // namespace voxscreen::nn

#endif  // VOXSCREEN_NN_CHECKPOINT_H_
