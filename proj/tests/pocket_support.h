//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_TESTS_POCKET_SUPPORT_H_
#define VOXSCREEN_TESTS_POCKET_SUPPORT_H_

#include <deque>
#include <set>

#include "voxscreen/pocket.h"

namespace voxscreen::testing {

// Reference flood written directly from the definition: BFS from the seed
// cell over empty cells, admitting a cell iff at least min_rays of its six
// axial rays reach an occupied cell within max_steps steps.
inline std::set<GridIndex> reference_flood(const SiteGrid &g, GridIndex seed, int min_rays,
                                    int max_steps) {
  auto rays = [&](GridIndex c) {
    const int d[6][3] = { { 1, 0, 0 }, { -1, 0, 0 }, { 0, 1, 0 },
                          { 0, -1, 0 }, { 0, 0, 1 }, { 0, 0, -1 } };
    int hits = 0;
    for (const auto &v: d) {
      for (int s = 1; s <= max_steps; ++s) {
        GridIndex p { c.i + v[0] * s, c.j + v[1] * s, c.k + v[2] * s };
        if (!g.in_bounds(p))
          break;
        if (g.occupied(p)) {
          ++hits;
          break;
        }
      }
    }
    return hits;
  };
  std::set<GridIndex> out;
  if (rays(seed) < min_rays)
    return out;
  std::deque<GridIndex> q { seed };
  out.insert(seed);
  while (!q.empty()) {
    GridIndex c = q.front();
    q.pop_front();
    for (GridIndex n: { GridIndex { c.i + 1, c.j, c.k }, GridIndex { c.i - 1, c.j, c.k },
                        GridIndex { c.i, c.j + 1, c.k }, GridIndex { c.i, c.j - 1, c.k },
                        GridIndex { c.i, c.j, c.k + 1 }, GridIndex { c.i, c.j, c.k - 1 } }) {
      if (!g.in_bounds(n) || g.occupied(n) || out.count(n) || rays(n) < min_rays)
        continue;
      out.insert(n);
      q.push_back(n);
    }
  }
  return out;
}

}  // namespace voxscreen::testing

#endif  // VOXSCREEN_TESTS_POCKET_SUPPORT_H_
