//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_VOXEL_H_
#define VOXSCREEN_VOXEL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxscreen/pocket.h"
#include "voxscreen/util.h"
#include "voxscreen/structio.h"

namespace voxscreen {

enum class Source : std::uint8_t { kProtein, kLigand };

enum class ElementClass : std::uint8_t {
  kC,
  kN,
  kO,
  kS,
  kP,
  kHalogen,
  kMet,
  kUnk,
};

inline constexpr std::size_t kElementClassCount = 8;

// nullopt for hydrogen, which never reaches a grid.
std::optional<ElementClass> element_class(Element e);

struct ChannelDescriptor {
  Source source = Source::kProtein;
  ElementClass element_class = ElementClass::kC;

  bool operator==(const ChannelDescriptor &other) const = default;
};

std::string to_string(const ChannelDescriptor &ch);

// 2 sources x 8 element classes, protein first.
std::vector<ChannelDescriptor> default_channels();

struct GridSpec {
  double box_edge = 20.0;
  double spacing = 1.0;
  std::vector<ChannelDescriptor> channels = default_channels();

  int cells_per_axis() const;
  std::size_t value_count() const;
  std::optional<std::size_t> channel_of(Source source, ElementClass cls) const;
  // Throws kValidation if box_edge / spacing is not a positive integer or
  // the channel list has duplicates.
  void validate() const;
};

enum class Label : std::uint8_t {
  kInactive = 0,
  kActive = 1,
  kUnlabeled = 255,
};

struct VoxelGrid {
  GridSpec spec;
  // [channel][z][y][x]; x is the fastest axis.
  std::vector<float> values;
  Label label = Label::kUnlabeled;
  std::string complex_id;
  int pose_id = 0;

  std::size_t index(std::size_t ch, std::size_t z, std::size_t y,
                    std::size_t x) const {
    const std::size_t n = static_cast<std::size_t>(spec.cells_per_axis());
    return ((ch * n + z) * n + y) * n + x;
  }
  float at(std::size_t ch, std::size_t z, std::size_t y, std::size_t x) const {
    return values[index(ch, z, y, x)];
  }
};

// Rigid placement of the ligand: p' = R (p - c) + c + t, with c the ligand
// heavy-atom centroid.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  int pose_id = 0;
  std::uint64_t rng_seed = 0;

  static Pose identity() { return {}; }
  Vec3 apply(const Vec3 &p, const Vec3 &pivot) const {
    return rotation * (p - pivot) + pivot + translation;
  }
};

struct PoseSamplerParams {
  double clash_distance = 1.5;
  int max_consecutive_rejections = 1000;
  double box_edge = 20.0;
};

// Uniformly random rotation (unit quaternion method).
Mat3 random_rotation(Rng &rng);

// Pose 0 is the identity. Later poses rotate the ligand about its centroid
// and place the centroid on a uniformly drawn site cell center, rejecting
// clashes with protein heavy atoms and centroids outside the box.
std::vector<Pose> sample_poses(const CoComplex &complex, std::size_t n,
                               std::uint64_t seed,
                               const PoseSamplerParams &params = {});

Molecule apply_pose(const Molecule &ligand, const Pose &pose);

// Count-mode rasterization of heavy atoms into the box centered at the
// origin. Atoms outside the box are dropped.
VoxelGrid rasterize(const CoComplex &complex, const Pose &pose,
                    const GridSpec &spec);

std::vector<float> unfold(const VoxelGrid &grid);
VoxelGrid refold(std::span<const float> values, const GridSpec &spec);

// Binary grid file: "VOXG", u32 version, u32 channels, u32 D, H, W,
// u8 label, float32 values in unfold order. Little-endian.
struct GridFile {
  std::uint32_t channels = 0;
  std::uint32_t depth = 0;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  Label label = Label::kUnlabeled;
  std::vector<float> values;
};

inline constexpr std::uint32_t kGridFileVersion = 1;

std::vector<std::uint8_t> encode_grid(const VoxelGrid &grid);
GridFile decode_grid(std::span<const std::uint8_t> bytes);
void write_grid_file(const std::filesystem::path &path, const VoxelGrid &grid);
GridFile read_grid_file(const std::filesystem::path &path);

// Sidecar manifest: tab-separated path, complex id, pose id, label
// (1, 0 or NA). Paths are relative to the manifest's directory.
struct ManifestEntry {
  std::string path;
  std::string complex_id;
  int pose_id = 0;
  Label label = Label::kUnlabeled;
};

std::string write_manifest(const std::vector<ManifestEntry> &entries);
std::vector<ManifestEntry> read_manifest(std::string_view text);

}  // namespace voxscreen

#endif  // VOXSCREEN_VOXEL_H_
