//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/voxel.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <unordered_map>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen {

static_assert(std::endian::native == std::endian::little,
              "grid and checkpoint IO assume a little-endian host");

std::optional<ElementClass> element_class(Element e) {
  switch (e) {
  case Element::kH:
    return std::nullopt;
  case Element::kC:
    return ElementClass::kC;
  case Element::kN:
    return ElementClass::kN;
  case Element::kO:
    return ElementClass::kO;
  case Element::kS:
    return ElementClass::kS;
  case Element::kP:
    return ElementClass::kP;
  case Element::kF:
  case Element::kCl:
  case Element::kBr:
  case Element::kI:
    return ElementClass::kHalogen;
  case Element::kMet:
    return ElementClass::kMet;
  case Element::kB:
  case Element::kUnk:
    return ElementClass::kUnk;
  }
  return ElementClass::kUnk;
}

std::string to_string(const ChannelDescriptor &ch) {
  static constexpr std::string_view kNames[] = { "C", "N",       "O",   "S",
                                                 "P", "halogen", "Met", "Unk" };
  std::string out = ch.source == Source::kProtein ? "protein:" : "ligand:";
  out += kNames[static_cast<std::size_t>(ch.element_class)];
  return out;
}

std::vector<ChannelDescriptor> default_channels() {
  std::vector<ChannelDescriptor> out;
  for (Source s: { Source::kProtein, Source::kLigand }) {
    for (std::size_t c = 0; c < kElementClassCount; ++c)
      out.push_back({ s, static_cast<ElementClass>(c) });
  }
  return out;
}

int GridSpec::cells_per_axis() const {
  return static_cast<int>(std::lround(box_edge / spacing));
}

std::size_t GridSpec::value_count() const {
  const auto n = static_cast<std::size_t>(cells_per_axis());
  return channels.size() * n * n * n;
}

std::optional<std::size_t> GridSpec::channel_of(Source source,
                                                ElementClass cls) const {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].source == source && channels[i].element_class == cls)
      return i;
  }
  return std::nullopt;
}

void GridSpec::validate() const {
  if (!(box_edge > 0) || !(spacing > 0))
    throw Error(ErrorKind::kValidation,
                "grid box_edge and spacing must be positive");
  const double ratio = box_edge / spacing;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1)
    throw Error(ErrorKind::kValidation,
                "grid box_edge / spacing must be a positive integer");
  if (channels.empty())
    throw Error(ErrorKind::kValidation, "grid needs at least one channel");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    for (std::size_t j = i + 1; j < channels.size(); ++j) {
      if (channels[i] == channels[j])
        throw Error(ErrorKind::kValidation,
                    "duplicate grid channel " + to_string(channels[i]));
    }
  }
}

Mat3 random_rotation(Rng &rng) {
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double u3 = rng.uniform();
  const double a = std::sqrt(1 - u1);
  const double b = std::sqrt(u1);
  const double t2 = 2 * std::numbers::pi * u2;
  const double t3 = 2 * std::numbers::pi * u3;
  Eigen::Quaterniond q(b * std::cos(t3), a * std::sin(t2), a * std::cos(t2),
                       b * std::sin(t3));
  return q.normalized().toRotationMatrix();
}

namespace {
// Bins protein heavy atoms for clash queries.
class ClashIndex {
public:
  ClashIndex(const ProteinStructure &protein, double cutoff)
      : cutoff_(cutoff), cutoff2_(cutoff * cutoff) {
    for (const Atom &a: protein.atoms) {
      if (a.is_heavy())
        bins_[key(bin(a.position))].push_back(a.position);
    }
  }

  bool clashes(const Vec3 &p) const {
    const auto b = bin(p);
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        for (int dk = -1; dk <= 1; ++dk) {
          auto it = bins_.find(key({ b[0] + di, b[1] + dj, b[2] + dk }));
          if (it == bins_.end())
            continue;
          for (const Vec3 &q: it->second) {
            if ((q - p).squaredNorm() < cutoff2_)
              return true;
          }
        }
      }
    }
    return false;
  }

private:
  std::array<long, 3> bin(const Vec3 &p) const {
    return { static_cast<long>(std::floor(p.x() / cutoff_)),
             static_cast<long>(std::floor(p.y() / cutoff_)),
             static_cast<long>(std::floor(p.z() / cutoff_)) };
  }

  static std::uint64_t key(const std::array<long, 3> &b) {
    auto u = [](long v) {
      return static_cast<std::uint64_t>(v + (1L << 20)) & 0x1fffff;
    };
    return (u(b[0]) << 42) | (u(b[1]) << 21) | u(b[2]);
  }

  double cutoff_;
  double cutoff2_;
  std::unordered_map<std::uint64_t, std::vector<Vec3>> bins_;
};
}  // namespace

Molecule apply_pose(const Molecule &ligand, const Pose &pose) {
  const Vec3 pivot = ligand.heavy_centroid();
  std::vector<Atom> atoms = ligand.atoms();
  for (Atom &a: atoms)
    a.position = pose.apply(a.position, pivot);
  return Molecule(ligand.name(), std::move(atoms), ligand.bonds());
}

std::vector<Pose> sample_poses(const CoComplex &complex, std::size_t n,
                               std::uint64_t seed,
                               const PoseSamplerParams &params) {
  if (n == 0)
    throw Error(ErrorKind::kSampling, "pose count must be >= 1");
  if (complex.site.empty())
    throw Error(ErrorKind::kSampling, "empty site");

  std::vector<Pose> poses;
  poses.reserve(n);
  poses.push_back(Pose::identity());
  if (n == 1)
    return poses;

  const Vec3 pivot = complex.ligand.heavy_centroid();
  std::vector<Vec3> heavy;
  for (const Atom &a: complex.ligand.atoms()) {
    if (a.is_heavy())
      heavy.push_back(a.position - pivot);
  }
  ClashIndex clash(complex.protein, params.clash_distance);
  const double half = params.box_edge / 2;

  for (std::size_t k = 1; k < n; ++k) {
    Pose pose;
    pose.pose_id = static_cast<int>(k);
    pose.rng_seed = derive_seed(seed, "pose", k);
    Rng rng(pose.rng_seed);

    int rejections = 0;
    while (true) {
      const Mat3 r = random_rotation(rng);
      const GridIndex &cell =
          complex.site.cells[rng.below(complex.site.cells.size())];
      const Vec3 target = complex.site.cell_center(cell);

      bool ok = (target.array().abs() < half).all();
      for (std::size_t i = 0; ok && i < heavy.size(); ++i)
        ok = !clash.clashes(r * heavy[i] + target);

      if (ok) {
        pose.rotation = r;
        pose.translation = target - pivot;
        break;
      }
      if (++rejections >= params.max_consecutive_rejections)
        throw Error(ErrorKind::kSampling,
                    "pose sampling stalled after "
                        + std::to_string(rejections)
                        + " consecutive rejections");
    }
    poses.push_back(pose);
  }
  return poses;
}

VoxelGrid rasterize(const CoComplex &complex, const Pose &pose,
                    const GridSpec &spec) {
  spec.validate();

  VoxelGrid grid;
  grid.spec = spec;
  grid.pose_id = pose.pose_id;
  grid.values.assign(spec.value_count(), 0.0F);
  const int n = spec.cells_per_axis();
  const double half = spec.box_edge / 2;

  auto deposit = [&](Source src, const Atom &a, const Vec3 &p) {
    auto cls = element_class(a.element);
    if (!cls)
      return;
    auto ch = spec.channel_of(src, *cls);
    if (!ch)
      return;
    int c[3];
    for (int k = 0; k < 3; ++k) {
      const double f = std::floor((p[k] + half) / spec.spacing);
      if (!(f >= 0 && f < n))
        return;
      c[k] = static_cast<int>(f);
    }
    // position (x, y, z) -> cell [z][y][x]
    grid.values[grid.index(*ch, c[2], c[1], c[0])] += 1.0F;
  };

  for (const Atom &a: complex.protein.atoms)
    deposit(Source::kProtein, a, a.position);

  if (complex.ligand.heavy_atom_count() > 0) {
    const Vec3 pivot = complex.ligand.heavy_centroid();
    for (const Atom &a: complex.ligand.atoms())
      deposit(Source::kLigand, a, pose.apply(a.position, pivot));
  }
  return grid;
}

std::vector<float> unfold(const VoxelGrid &grid) {
  return grid.values;
}

VoxelGrid refold(std::span<const float> values, const GridSpec &spec) {
  spec.validate();
  if (values.size() != spec.value_count())
    throw Error(ErrorKind::kShape, "vector length does not match grid spec");
  VoxelGrid grid;
  grid.spec = spec;
  grid.values.assign(values.begin(), values.end());
  return grid;
}

namespace {
void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k)
    v |= static_cast<std::uint32_t>(in[at + k]) << (8 * k);
  return v;
}
}  // namespace

std::vector<std::uint8_t> encode_grid(const VoxelGrid &grid) {
  const auto n = static_cast<std::uint32_t>(grid.spec.cells_per_axis());
  std::vector<std::uint8_t> out = { 'V', 'O', 'X', 'G' };
  out.reserve(25 + 4 * grid.values.size());
  put_u32(out, kGridFileVersion);
  put_u32(out, static_cast<std::uint32_t>(grid.spec.channels.size()));
  put_u32(out, n);
  put_u32(out, n);
  put_u32(out, n);
  out.push_back(static_cast<std::uint8_t>(grid.label));
  const std::size_t off = out.size();
  out.resize(off + 4 * grid.values.size());
  std::memcpy(out.data() + off, grid.values.data(), 4 * grid.values.size());
  return out;
}

GridFile decode_grid(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t kHeader = 4 + 5 * 4 + 1;
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), "VOXG", 4) != 0)
    throw Error(ErrorKind::kParse, "not a VOXG grid file");
  if (get_u32(bytes, 4) != kGridFileVersion)
    throw Error(ErrorKind::kParse, "unsupported grid file version");

  GridFile g;
  g.channels = get_u32(bytes, 8);
  g.depth = get_u32(bytes, 12);
  g.height = get_u32(bytes, 16);
  g.width = get_u32(bytes, 20);
  const std::uint8_t label = bytes[24];
  if (label != 0 && label != 1 && label != 255)
    throw Error(ErrorKind::kParse, "bad grid label byte");
  g.label = static_cast<Label>(label);

  const std::size_t count = static_cast<std::size_t>(g.channels) * g.depth
                            * g.height * g.width;
  if (bytes.size() != kHeader + 4 * count)
    throw Error(ErrorKind::kParse, "grid file size does not match header");
  g.values.resize(count);
  std::memcpy(g.values.data(), bytes.data() + kHeader, 4 * count);
  return g;
}

void write_grid_file(const std::filesystem::path &path, const VoxelGrid &grid) {
  auto bytes = encode_grid(grid);
  write_file(path, std::string_view(reinterpret_cast<const char *>(bytes.data()),
                                    bytes.size()));
}

GridFile read_grid_file(const std::filesystem::path &path) {
  auto bytes = read_binary(path);
  try {
    return decode_grid(bytes);
  } catch (const Error &e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

namespace {
std::string_view label_text(Label l) {
  switch (l) {
  case Label::kActive:
    return "1";
  case Label::kInactive:
    return "0";
  case Label::kUnlabeled:
    break;
  }
  return "NA";
}
}  // namespace

std::string write_manifest(const std::vector<ManifestEntry> &entries) {
  std::string out;
  for (const ManifestEntry &e: entries) {
    out += e.path + '\t' + e.complex_id + '\t' + std::to_string(e.pose_id)
           + '\t' + std::string(label_text(e.label)) + '\n';
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(std::string_view text) {
  std::vector<ManifestEntry> out;
  auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty() || lines[ln].starts_with('#'))
      continue;
    auto cols = split(lines[ln], '\t');
    if (cols.size() != 4)
      throw ParseError("manifest line needs 4 tab-separated columns", ln + 1);
    ManifestEntry e;
    e.path = std::string(trim(cols[0]));
    e.complex_id = std::string(trim(cols[1]));
    long pose;
    if (!parse_int(cols[2], pose))
      throw ParseError("bad pose id", ln + 1);
    e.pose_id = static_cast<int>(pose);
    auto l = trim(cols[3]);
    if (l == "1")
      e.label = Label::kActive;
    else if (l == "0")
      e.label = Label::kInactive;
    else if (l == "NA")
      e.label = Label::kUnlabeled;
    else
      throw ParseError("label must be 1, 0 or NA", ln + 1);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace voxscreen
