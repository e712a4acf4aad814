//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/pocket.h"

#include <deque>
#include <set>

#include <gtest/gtest.h>

#include "pocket_support.h"
#include "voxscreen/error.h"
#include "voxscreen/synthetic.h"

namespace voxscreen {
namespace {

ProteinStructure atoms_at(const std::vector<Vec3> &points, Element e = Element::kC) {
  ProteinStructure p;
  for (const Vec3 &v: points) {
    p.atoms.push_back({ e, v, 0 });
    p.residue_tags.push_back({ 'A', "ALA", 1 });
  }
  return p;
}

using testing::reference_flood;

TEST(SiteGrid, SingleCarbonOccupancyMatchesEnumeration) {
  const SiteGrid g = build_site_grid(atoms_at({ Vec3::Zero() }), 3.0);
  EXPECT_EQ(g.dims(), (GridDims { 7, 7, 7 }));
  std::size_t occupied = 0;
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      for (int k = 0; k < 7; ++k) {
        const GridIndex c { i, j, k };
        const bool expect = g.center(c).norm() <= 1.70;
        EXPECT_EQ(g.occupied(c), expect);
        occupied += expect;
      }
    }
  }
  // Origin, 6 axial neighbors and 12 edge-diagonal neighbors (sqrt 2 < 1.70).
  EXPECT_EQ(occupied, 19U);
}

TEST(SiteGrid, RadiusTable) {
  EXPECT_DOUBLE_EQ(vdw_radius(Element::kC), 1.70);
  EXPECT_DOUBLE_EQ(vdw_radius(Element::kN), 1.55);
  EXPECT_DOUBLE_EQ(vdw_radius(Element::kO), 1.52);
  EXPECT_DOUBLE_EQ(vdw_radius(Element::kS), 1.80);
  EXPECT_DOUBLE_EQ(vdw_radius(Element::kP), 1.80);
  EXPECT_DOUBLE_EQ(vdw_radius(Element::kF), 1.47);
  EXPECT_DOUBLE_EQ(vdw_radius(Element::kUnk), 1.70);
}

TEST(SiteGrid, Deterministic) {
  const auto p = synthetic::shell_protein();
  const SiteGrid a = build_site_grid(p, 2.0), b = build_site_grid(p, 2.0);
  EXPECT_EQ(a.dims(), b.dims());
  for (std::size_t i = 0; i < a.cell_count(); ++i) {
    const GridIndex c { int(i / (a.dims()[1] * a.dims()[2])),
                        int(i / a.dims()[2] % a.dims()[1]), int(i % a.dims()[2]) };
    ASSERT_EQ(a.occupied(c), b.occupied(c));
  }
}

TEST(SiteGrid, EmptyProteinRejected) {
  EXPECT_THROW(build_site_grid(ProteinStructure {}, 3.0), Error);
}

std::set<GridIndex> as_set(const BindingSite &site) {
  return { site.cells.begin(), site.cells.end() };
}

TEST(Flood, EnclosedCavityAllInteriorCells) {
  const SiteGrid g = build_site_grid(synthetic::cavity_box(5), 2.0);
  const BindingSite site = flood_site(g, Vec3(2, 2, 2));
  ASSERT_EQ(site.cells.size(), 125U);
  std::set<GridIndex> expect;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      for (int z = 0; z < 5; ++z)
        expect.insert(g.nearest_cell(Vec3(x, y, z)));
  EXPECT_EQ(as_set(site), expect);
  EXPECT_EQ(as_set(site), reference_flood(g, g.nearest_cell(Vec3(2, 2, 2)), 4, 12));
  EXPECT_NEAR((site.center_of_mass - Vec3(2, 2, 2)).norm(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(site.volume, 125.0);
}

TEST(Flood, MatchesReferenceOnShell) {
  const auto p = synthetic::shell_protein();
  const SiteGrid g = build_site_grid(p, 3.0);
  const BindingSite site = flood_site(g, Vec3::Zero());
  EXPECT_EQ(as_set(site), reference_flood(g, g.nearest_cell(Vec3::Zero()), 4, 12));
  for (const GridIndex &c: site.cells)
    EXPECT_FALSE(g.occupied(c));
}

TEST(Flood, CellsAreOneConnectedComponent) {
  const SiteGrid g = build_site_grid(synthetic::shell_protein(), 3.0);
  const BindingSite site = flood_site(g, Vec3::Zero());
  const std::set<GridIndex> cells = as_set(site);
  std::set<GridIndex> reached { site.cells.front() };
  std::deque<GridIndex> q { site.cells.front() };
  while (!q.empty()) {
    GridIndex c = q.front();
    q.pop_front();
    for (int axis = 0; axis < 3; ++axis) {
      for (int s: { -1, 1 }) {
        GridIndex n = c;
        (axis == 0 ? n.i : axis == 1 ? n.j : n.k) += s;
        if (cells.count(n) && reached.insert(n).second)
          q.push_back(n);
      }
    }
  }
  EXPECT_EQ(reached, cells);
}

TEST(Flood, OpenGeometryEscapes) {
  const SiteGrid g = build_site_grid(synthetic::open_plate(), 4.0);
  try {
    flood_site(g, Vec3(0, 0, 2));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGeometry);
    EXPECT_NE(std::string(e.what()).find("site escaped"), std::string::npos);
  }
}

TEST(Flood, MaxCellsReachedEscapes) {
  const SiteGrid g = build_site_grid(synthetic::cavity_box(5), 2.0);
  FloodParams params;
  params.max_cells = 125;
  EXPECT_THROW(flood_site(g, Vec3(2, 2, 2), params), Error);
  params.max_cells = 126;
  EXPECT_EQ(flood_site(g, Vec3(2, 2, 2), params).cells.size(), 125U);
}

TEST(Flood, MonotoneInMaxCells) {
  const SiteGrid g = build_site_grid(synthetic::shell_protein(), 3.0);
  FloodParams small, large;
  small.max_cells = 1000;
  large.max_cells = 50000;
  const auto a = as_set(flood_site(g, Vec3::Zero(), small));
  const auto b = as_set(flood_site(g, Vec3::Zero(), large));
  EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
}

TEST(Flood, SeedEnclosedOnAllSidesIsOneCell) {
  const auto p = atoms_at({ Vec3(2, 0, 0), Vec3(-2, 0, 0), Vec3(0, 2, 0), Vec3(0, -2, 0),
                            Vec3(0, 0, 2), Vec3(0, 0, -2) });
  const SiteGrid g = build_site_grid(p, 2.0);
  const BindingSite site = flood_site(g, Vec3::Zero());
  ASSERT_EQ(site.cells.size(), 1U);
  EXPECT_EQ(site.cells[0], g.nearest_cell(Vec3::Zero()));
}

TEST(Flood, OccupiedSeedMovesToNearestEmptyCell) {
  // Seed on a wall atom of the cavity; the nearest empty cells are inside.
  const SiteGrid g = build_site_grid(synthetic::cavity_box(5), 2.0);
  const BindingSite site = flood_site(g, Vec3(2, 2, -1));
  EXPECT_EQ(site.cells.size(), 125U);
}

TEST(Flood, SolidBlockSeedBuried) {
  std::vector<Vec3> pts;
  for (int x = -5; x <= 5; ++x)
    for (int y = -5; y <= 5; ++y)
      for (int z = -5; z <= 5; ++z)
        pts.emplace_back(x, y, z);
  const SiteGrid g = build_site_grid(atoms_at(pts), 1.0);
  try {
    flood_site(g, Vec3::Zero());
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("seed buried"), std::string::npos);
  }
}

TEST(Flood, SeedOutsideGrid) {
  const SiteGrid g = build_site_grid(synthetic::cavity_box(5), 2.0);
  EXPECT_THROW(flood_site(g, Vec3(100, 0, 0)), Error);
}

BindingSite single_cell_at(const Vec3 &p) {
  BindingSite s;
  s.cells = { GridIndex { 0, 0, 0 } };
  s.origin = p;
  s.dims = { 3, 3, 3 };
  s.center_of_mass = p;
  s.volume = 1;
  return s;
}

TEST(Recenter, SingleCellShift) {
  const auto p = atoms_at({ Vec3(1, 2, 3), Vec3(5, 0, 0) });
  Molecule lig("l", { { Element::kC, Vec3(6, 1, 1), 0 } }, {});
  const CoComplex c = recenter(p, lig, single_cell_at(Vec3(5, 0, 0)));
  EXPECT_EQ(c.translation, Vec3(-5, 0, 0));
  EXPECT_EQ(c.protein.atoms[0].position, Vec3(-4, 2, 3));
  EXPECT_EQ(c.protein.atoms[1].position, Vec3(0, 0, 0));
  EXPECT_EQ(c.ligand.atoms()[0].position, Vec3(1, 1, 1));
  EXPECT_NEAR(c.site.center_of_mass.norm(), 0.0, 1e-9);
}

TEST(Recenter, IdempotentAndDistancePreserving) {
  const auto p = synthetic::shell_protein();
  const Vec3 shift(3.25, -1.5, 7.125);
  const auto moved = p.translated(shift);
  const SiteGrid gm = build_site_grid(moved, 3.0);
  const BindingSite site = flood_site(gm, shift);
  const CoComplex a = recenter(moved, *moved.bound_ligand, site);
  EXPECT_NEAR(a.site.center_of_mass.norm(), 0.0, 1e-9);
  const CoComplex b = recenter(a.protein, a.ligand, a.site);
  EXPECT_NEAR(b.translation.norm(), 0.0, 1e-12);
  const CoComplex c = recenter(a);
  EXPECT_NEAR((c.translation - a.translation).norm(), 0.0, 1e-12);
  for (std::size_t i = 1; i < p.atoms.size(); i += 17) {
    const double d0 = (moved.atoms[i].position - moved.atoms[0].position).norm();
    const double d1 = (a.protein.atoms[i].position - a.protein.atoms[0].position).norm();
    EXPECT_NEAR(d0, d1, 1e-12);
  }
}

TEST(Recenter, EmptySiteRejected) {
  const auto p = atoms_at({ Vec3::Zero() });
  EXPECT_THROW(recenter(p, Molecule {}, BindingSite {}), Error);
}

TEST(SiteText, RoundTrip) {
  const SiteGrid g = build_site_grid(synthetic::cavity_box(5), 2.0);
  const BindingSite site = flood_site(g, Vec3(2, 2, 2));
  const BindingSite back = read_site(write_site(site));
  EXPECT_EQ(back.cells, site.cells);
  EXPECT_EQ(back.dims, site.dims);
  EXPECT_EQ(back.origin, site.origin);
  EXPECT_EQ(back.spacing, site.spacing);
}

}  // namespace
}  // namespace voxscreen
