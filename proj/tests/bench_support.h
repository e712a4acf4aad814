//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_TESTS_BENCH_SUPPORT_H_
#define VOXSCREEN_TESTS_BENCH_SUPPORT_H_

#include <cmath>
#include <string>
#include <vector>

#include "voxscreen/bench.h"
#include "voxscreen/util.h"

namespace voxscreen::testing {

// Scaffold s: a saturated ring of 5 + s % 4 atoms joined to a phenyl by a
// linker of 1 + s / 4 carbons. Up to 24 distinct frameworks.
inline Molecule random_ligand(Rng &rng, int s, std::string name) {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::vector<bool> free;
  auto add = [&](Element e, bool can_branch) {
    const double i = static_cast<double>(atoms.size());
    atoms.push_back({ e, Vec3(1.5 * i, std::fmod(i, 3.0), 0), 0 });
    free.push_back(can_branch);
    return atoms.size() - 1;
  };
  const int ring = 5 + s % 4;
  for (int i = 0; i < ring; ++i) {
    add(Element::kC, true);
    if (i > 0)
      bonds.push_back({ atoms.size() - 2, atoms.size() - 1, BondOrder::kSingle });
  }
  bonds.push_back({ 0, atoms.size() - 1, BondOrder::kSingle });
  std::size_t prev = 0;
  free[0] = false;
  for (int i = 0; i < 1 + s / 4; ++i) {
    const auto c = add(Element::kC, false);
    bonds.push_back({ prev, c, BondOrder::kSingle });
    prev = c;
  }
  const std::size_t ph = atoms.size();
  for (int i = 0; i < 6; ++i)
    add(Element::kC, i != 0);
  for (int i = 0; i < 6; ++i)
    bonds.push_back({ ph + i, ph + (i + 1) % 6, BondOrder::kAromatic });
  bonds.push_back({ prev, ph, BondOrder::kSingle });

  const Element inner[] = { Element::kC, Element::kN, Element::kO, Element::kS };
  const Element tail[] = { Element::kC, Element::kN, Element::kO,
                           Element::kF, Element::kCl, Element::kBr };
  const int n_sub = 1 + static_cast<int>(rng.below(4));
  for (int k = 0; k < n_sub; ++k) {
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < free.size(); ++i)
      if (free[i])
        open.push_back(i);
    if (open.empty())
      break;
    std::size_t at = open[rng.below(open.size())];
    free[at] = false;
    const int len = 1 + static_cast<int>(rng.below(3));
    for (int j = 0; j < len; ++j) {
      const Element e = j + 1 == len ? tail[rng.below(6)] : inner[rng.below(4)];
      const auto c = add(e, false);
      bonds.push_back({ at, c, BondOrder::kSingle });
      at = c;
    }
  }
  return Molecule(std::move(name), std::move(atoms), std::move(bonds));
}

// Two targets: "wide" has actives over 12 frameworks, "narrow" over 4.
// Every active is also measured as inactive on the other target at 50 uM.
struct BenchScenario {
  std::vector<ActivityRecord> records;
  LigandLibrary library;
  LigandLibrary pool;
};

inline BenchScenario make_bench_scenario(std::uint64_t seed, int per_cluster = 12,
                                         int pool_size = 1500) {
  BenchScenario sc;
  Rng rng(seed);
  auto add_target = [&](const std::string &target, const std::string &other,
                        int first, int n) {
    for (int s = first; s < first + n; ++s) {
      for (int i = 0; i < per_cluster; ++i) {
        const std::string id = target + "_s" + std::to_string(s) + "_" + std::to_string(i);
        sc.library[id] = random_ligand(rng, s, id);
        sc.records.push_back({ id, target, 0.01 + 0.9 * rng.uniform(),
                               i % 2 ? AffinityType::kKi : AffinityType::kIC50, "t" });
        sc.records.push_back({ id, other, 50.0 + rng.uniform(), AffinityType::kIC50, "t" });
      }
    }
  };
  add_target("wide", "narrow", 0, 12);
  add_target("narrow", "wide", 12, 4);
  for (int i = 0; i < pool_size; ++i) {
    const std::string id = "zinc" + std::to_string(100000 + i);
    sc.pool[id] = random_ligand(rng, static_cast<int>(rng.below(24)), id);
  }
  return sc;
}

}  // namespace voxscreen::testing

#endif  // VOXSCREEN_TESTS_BENCH_SUPPORT_H_
