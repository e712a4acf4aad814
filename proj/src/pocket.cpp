//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/pocket.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include <json.hpp>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen {
namespace {
constexpr std::array<GridIndex, 6> kAxial = { {
  { 1, 0, 0 },
  { -1, 0, 0 },
  { 0, 1, 0 },
  { 0, -1, 0 },
  { 0, 0, 1 },
  { 0, 0, -1 },
} };

GridIndex step(const GridIndex &c, const GridIndex &d, int n = 1) {
  return { c.i + n * d.i, c.j + n * d.j, c.k + n * d.k };
}

Vec3 mean_cell_center(const BindingSite &site) {
  Vec3 sum = Vec3::Zero();
  for (const GridIndex &c: site.cells)
    sum += Vec3(c.i, c.j, c.k);
  return site.origin
         + site.spacing * sum / static_cast<double>(site.cells.size());
}
}  // namespace

double vdw_radius(Element e) {
  // Bondi radii; anything not listed uses the carbon value.
  switch (e) {
  case Element::kC:
    return 1.70;
  case Element::kN:
    return 1.55;
  case Element::kO:
    return 1.52;
  case Element::kS:
    return 1.80;
  case Element::kP:
    return 1.80;
  case Element::kF:
    return 1.47;
  case Element::kCl:
    return 1.75;
  case Element::kBr:
    return 1.85;
  case Element::kI:
    return 1.98;
  case Element::kH:
    return 1.20;
  default:
    return 1.70;
  }
}

SiteGrid::SiteGrid(const Vec3 &origin, double spacing, const GridDims &dims,
                   std::vector<std::uint8_t> occupied)
    : origin_(origin), spacing_(spacing), dims_(dims),
      occupied_(std::move(occupied)) {
  if (!(spacing > 0))
    throw Error(ErrorKind::kGeometry, "site grid spacing must be positive");
  for (int d: dims_) {
    if (d < 3)
      throw Error(ErrorKind::kGeometry, "site grid dims must be >= 3");
  }
  const std::size_t n =
      static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  if (occupied_.size() != n)
    throw Error(ErrorKind::kGeometry, "site grid occupancy size mismatch");
}

GridIndex SiteGrid::nearest_cell(const Vec3 &p) const {
  const Vec3 f = (p - origin_) / spacing_;
  return { static_cast<int>(std::lround(f.x())),
           static_cast<int>(std::lround(f.y())),
           static_cast<int>(std::lround(f.z())) };
}

SiteGrid build_site_grid(const ProteinStructure &protein, double margin,
                         double spacing) {
  if (protein.atoms.empty())
    throw Error(ErrorKind::kGeometry, "empty structure");
  if (!(margin >= 0))
    throw Error(ErrorKind::kGeometry, "margin must be non-negative");
  if (!(spacing > 0))
    throw Error(ErrorKind::kGeometry, "spacing must be positive");

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const Atom &a: protein.atoms) {
    lo = lo.cwiseMin(a.position);
    hi = hi.cwiseMax(a.position);
  }
  const Vec3 origin = lo - Vec3::Constant(margin);
  GridDims dims;
  for (int k = 0; k < 3; ++k) {
    const double extent = hi[k] - lo[k] + 2 * margin;
    dims[k] = std::max(3, static_cast<int>(std::floor(extent / spacing + 1e-9)) + 1);
  }

  std::vector<std::uint8_t> occ(
      static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 0);
  for (const Atom &a: protein.atoms) {
    if (!a.is_heavy())
      continue;
    const double r = vdw_radius(a.element);
    const double r2 = r * r;
    const Vec3 f = (a.position - origin) / spacing;
    const int reach = static_cast<int>(std::ceil(r / spacing));
    const int ci = static_cast<int>(std::lround(f.x()));
    const int cj = static_cast<int>(std::lround(f.y()));
    const int ck = static_cast<int>(std::lround(f.z()));
    for (int i = std::max(0, ci - reach); i <= std::min(dims[0] - 1, ci + reach);
         ++i) {
      for (int j = std::max(0, cj - reach);
           j <= std::min(dims[1] - 1, cj + reach); ++j) {
        for (int k = std::max(0, ck - reach);
             k <= std::min(dims[2] - 1, ck + reach); ++k) {
          const Vec3 c = origin + spacing * Vec3(i, j, k);
          if ((c - a.position).squaredNorm() <= r2)
            occ[(static_cast<std::size_t>(i) * dims[1] + j) * dims[2] + k] = 1;
        }
      }
    }
  }
  return SiteGrid(origin, spacing, dims, std::move(occ));
}

int buried_ray_count(const SiteGrid &grid, const GridIndex &c,
                     const FloodParams &params) {
  const int max_steps =
      static_cast<int>(std::floor(params.ray_length / grid.spacing() + 1e-9));
  int hits = 0;
  for (const GridIndex &d: kAxial) {
    for (int n = 1; n <= max_steps; ++n) {
      GridIndex p = step(c, d, n);
      if (!grid.in_bounds(p))
        break;
      if (grid.occupied(p)) {
        ++hits;
        break;
      }
    }
  }
  return hits;
}

BindingSite flood_site(const SiteGrid &grid, const Vec3 &seed,
                       const FloodParams &params) {
  GridIndex start = grid.nearest_cell(seed);
  if (!grid.in_bounds(start))
    throw Error(ErrorKind::kGeometry, "seed outside site grid");

  if (grid.occupied(start)) {
    // Nearest empty cell within the search radius; ties by index order.
    const int reach = static_cast<int>(
        std::ceil(params.seed_search_radius / grid.spacing()));
    const double r2 = params.seed_search_radius * params.seed_search_radius;
    double best = std::numeric_limits<double>::infinity();
    GridIndex found = start;
    bool any = false;
    for (int di = -reach; di <= reach; ++di) {
      for (int dj = -reach; dj <= reach; ++dj) {
        for (int dk = -reach; dk <= reach; ++dk) {
          GridIndex c { start.i + di, start.j + dj, start.k + dk };
          if (!grid.in_bounds(c) || grid.occupied(c))
            continue;
          const double d2 = (grid.center(c) - seed).squaredNorm();
          if (d2 <= r2 && (d2 < best || (d2 == best && c < found))) {
            best = d2;
            found = c;
            any = true;
          }
        }
      }
    }
    if (!any)
      throw Error(ErrorKind::kGeometry, "seed buried");
    start = found;
  }

  if (buried_ray_count(grid, start, params) < params.min_buried_rays)
    throw Error(ErrorKind::kGeometry, "site escaped enclosure");

  // 0 = unvisited, 1 = admitted, 2 = rejected by the burial test.
  std::vector<std::uint8_t> state(grid.cell_count(), 0);
  std::vector<GridIndex> cells;
  std::deque<GridIndex> frontier;
  state[grid.linear(start)] = 1;
  cells.push_back(start);
  frontier.push_back(start);
  if (cells.size() >= params.max_cells)
    throw Error(ErrorKind::kGeometry, "site escaped enclosure");

  while (!frontier.empty()) {
    const GridIndex c = frontier.front();
    frontier.pop_front();
    for (const GridIndex &d: kAxial) {
      const GridIndex n = step(c, d);
      if (!grid.in_bounds(n) || grid.occupied(n))
        continue;
      auto &s = state[grid.linear(n)];
      if (s != 0)
        continue;
      if (buried_ray_count(grid, n, params) < params.min_buried_rays) {
        s = 2;
        continue;
      }
      s = 1;
      cells.push_back(n);
      if (cells.size() >= params.max_cells)
        throw Error(ErrorKind::kGeometry, "site escaped enclosure");
      frontier.push_back(n);
    }
  }

  std::sort(cells.begin(), cells.end());
  BindingSite site;
  site.cells = std::move(cells);
  site.origin = grid.origin();
  site.spacing = grid.spacing();
  site.dims = grid.dims();
  site.center_of_mass = mean_cell_center(site);
  site.volume = static_cast<double>(site.cells.size()) * site.spacing
                * site.spacing * site.spacing;
  return site;
}

CoComplex recenter(ProteinStructure protein, Molecule ligand,
                   BindingSite site) {
  if (site.empty())
    throw Error(ErrorKind::kGeometry, "empty site");

  const Vec3 shift = -mean_cell_center(site);
  CoComplex out;
  out.protein = protein.translated(shift);
  out.ligand = ligand.translated(shift);
  site.origin += shift;
  site.center_of_mass = mean_cell_center(site);
  out.site = std::move(site);
  out.translation = shift;
  return out;
}

CoComplex recenter(const CoComplex &complex) {
  CoComplex out = recenter(complex.protein, complex.ligand, complex.site);
  out.translation += complex.translation;
  return out;
}

std::string write_site(const BindingSite &site) {
  nlohmann::json header {
    { "origin", { site.origin.x(), site.origin.y(), site.origin.z() } },
    { "spacing", site.spacing },
    { "dims", { site.dims[0], site.dims[1], site.dims[2] } },
    { "cells", site.cells.size() },
  };
  std::string out = header.dump() + "\n";
  for (const GridIndex &c: site.cells) {
    out += std::to_string(c.i) + ' ' + std::to_string(c.j) + ' '
           + std::to_string(c.k) + '\n';
  }
  return out;
}

BindingSite read_site(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty())
    throw ParseError("missing site header", 1);

  BindingSite site;
  try {
    auto header = nlohmann::json::parse(lines[0]);
    for (int k = 0; k < 3; ++k) {
      site.origin[k] = header.at("origin").at(k).get<double>();
      site.dims[k] = header.at("dims").at(k).get<int>();
    }
    site.spacing = header.at("spacing").get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("bad site header: ") + e.what(), 1);
  }

  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty())
      continue;
    std::vector<long> v;
    for (auto tok: split(trim(lines[ln]), ' ')) {
      if (tok.empty())
        continue;
      long x;
      if (!parse_int(tok, x))
        throw ParseError("bad cell index", ln + 1);
      v.push_back(x);
    }
    if (v.size() != 3)
      throw ParseError("expected 'i j k'", ln + 1);
    site.cells.push_back({ static_cast<int>(v[0]), static_cast<int>(v[1]),
                           static_cast<int>(v[2]) });
  }
  std::sort(site.cells.begin(), site.cells.end());
  if (!site.cells.empty()) {
    site.center_of_mass = mean_cell_center(site);
    site.volume = static_cast<double>(site.cells.size()) * site.spacing
                  * site.spacing * site.spacing;
  }
  return site;
}

}  // namespace voxscreen
