//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_POCKET_H_
#define VOXSCREEN_POCKET_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "voxscreen/structio.h"

namespace voxscreen {

struct GridIndex {
  int i = 0;
  int j = 0;
  int k = 0;

  auto operator<=>(const GridIndex &other) const = default;
};

using GridDims = std::array<int, 3>;

double vdw_radius(Element e);

// Regular lattice of cells over a protein. Cell (i, j, k) is centered at
// origin + spacing * (i, j, k).
class SiteGrid {
public:
  SiteGrid(const Vec3 &origin, double spacing, const GridDims &dims,
           std::vector<std::uint8_t> occupied);

  const Vec3 &origin() const { return origin_; }
  double spacing() const { return spacing_; }
  const GridDims &dims() const { return dims_; }
  std::size_t cell_count() const { return occupied_.size(); }

  bool in_bounds(const GridIndex &c) const {
    return c.i >= 0 && c.j >= 0 && c.k >= 0 && c.i < dims_[0]
           && c.j < dims_[1] && c.k < dims_[2];
  }

  std::size_t linear(const GridIndex &c) const {
    return (static_cast<std::size_t>(c.i) * dims_[1] + c.j) * dims_[2] + c.k;
  }

  bool occupied(const GridIndex &c) const { return occupied_[linear(c)] != 0; }

  Vec3 center(const GridIndex &c) const {
    return origin_ + spacing_ * Vec3(c.i, c.j, c.k);
  }

  // Cell whose center is nearest to p (may be out of bounds).
  GridIndex nearest_cell(const Vec3 &p) const;

private:
  Vec3 origin_;
  double spacing_;
  GridDims dims_;
  std::vector<std::uint8_t> occupied_;
};

// Grid over the protein bounding box plus margin. A cell is occupied iff
// its center lies within the vdW radius of some heavy atom.
SiteGrid build_site_grid(const ProteinStructure &protein, double margin,
                         double spacing = 1.0);

struct FloodParams {
  std::size_t max_cells = 8000;
  // Burial: at least this many of the six axial rays must hit protein.
  int min_buried_rays = 4;
  double ray_length = 12.0;
  // How far to look for an empty cell when the seed cell is occupied.
  double seed_search_radius = 3.0;
};

struct BindingSite {
  std::vector<GridIndex> cells;  // sorted
  Vec3 origin = Vec3::Zero();
  double spacing = 1.0;
  GridDims dims { 0, 0, 0 };
  Vec3 center_of_mass = Vec3::Zero();
  double volume = 0;

  Vec3 cell_center(const GridIndex &c) const {
    return origin + spacing * Vec3(c.i, c.j, c.k);
  }

  bool empty() const { return cells.empty(); }
};

// Number of the six axial rays from c that hit an occupied cell within
// params.ray_length.
int buried_ray_count(const SiteGrid &grid, const GridIndex &c,
                     const FloodParams &params);

// Ligand-seeded 6-connected flood over empty, buried cells.
//
// Errors: seed outside the grid (kGeometry), no empty cell near the seed
// ("seed buried"), seed or flood not enclosed ("site escaped enclosure").
BindingSite flood_site(const SiteGrid &grid, const Vec3 &seed,
                       const FloodParams &params = {});

struct CoComplex {
  ProteinStructure protein;
  Molecule ligand;
  BindingSite site;
  // Translation applied to reach the site-centered frame.
  Vec3 translation = Vec3::Zero();
};

// Translate protein, ligand and site so the site center of mass is the
// origin.
CoComplex recenter(ProteinStructure protein, Molecule ligand,
                   BindingSite site);
CoComplex recenter(const CoComplex &complex);

// Text export: one JSON header line (origin, spacing, dims) followed by
// one "i j k" line per cell.
std::string write_site(const BindingSite &site);
BindingSite read_site(std::string_view text);

}  // namespace voxscreen

#endif  // VOXSCREEN_POCKET_H_
