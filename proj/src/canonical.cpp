//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Canonical graph keys by colour refinement plus individualization.
//
// Atoms start coloured by (atomic number, charge, heavy degree) and are
// refined by the multiset of (bond order, neighbor colour) until stable.
// When ties remain, every member of the first tied class is individualized
// in turn and the lexicographically smallest serialization wins. The search
// tree depends only on the graph, so the result is independent of the
// input atom order.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "voxscreen/chem.h"

namespace voxscreen {
namespace {
using Colors = std::vector<int>;

// Leaves beyond this are not explored; only reachable for highly symmetric
// cages far outside drug-like chemistry.
constexpr std::size_t kMaxLeaves = 50000;

struct Canonizer {
  const HeavyGraph &g;
  std::vector<std::pair<int, int>> labels;  // (atomic number, charge)
  std::vector<int> best;
  std::size_t leaves = 0;

  void refine(Colors &colors) const {
    std::size_t classes = count_classes(colors);
    using Sig = std::pair<int, std::vector<std::pair<int, int>>>;
    std::vector<Sig> sigs(g.size());
    while (true) {
      for (std::size_t v = 0; v < g.size(); ++v) {
        sigs[v].first = colors[v];
        auto &nb = sigs[v].second;
        nb.clear();
        for (const auto &e: g.adj[v])
          nb.emplace_back(static_cast<int>(e.order), colors[e.to]);
        std::sort(nb.begin(), nb.end());
      }
      std::vector<Sig> uniq = sigs;
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      for (std::size_t v = 0; v < g.size(); ++v)
        colors[v] = static_cast<int>(
            std::lower_bound(uniq.begin(), uniq.end(), sigs[v]) - uniq.begin());
      if (uniq.size() == classes)
        return;
      classes = uniq.size();
    }
  }

  static std::size_t count_classes(const Colors &colors) {
    std::vector<int> c = colors;
    std::sort(c.begin(), c.end());
    return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
  }

  std::vector<int> serialize(const Colors &order) const {
    // order[v] is the canonical position of atom v.
    std::vector<int> out;
    std::vector<std::size_t> at(g.size());
    for (std::size_t v = 0; v < g.size(); ++v)
      at[static_cast<std::size_t>(order[v])] = v;
    for (std::size_t p = 0; p < g.size(); ++p) {
      out.push_back(labels[at[p]].first);
      out.push_back(labels[at[p]].second);
    }
    std::vector<std::tuple<int, int, int>> edges;
    for (std::size_t v = 0; v < g.size(); ++v) {
      for (const auto &e: g.adj[v]) {
        if (order[v] < order[e.to])
          edges.emplace_back(order[v], order[e.to], static_cast<int>(e.order));
      }
    }
    std::sort(edges.begin(), edges.end());
    for (const auto &[a, b, o]: edges) {
      out.push_back(a);
      out.push_back(b);
      out.push_back(o);
    }
    return out;
  }

  void search(Colors colors) {
    if (leaves >= kMaxLeaves)
      return;
    refine(colors);

    std::map<int, std::vector<std::size_t>> classes;
    for (std::size_t v = 0; v < g.size(); ++v)
      classes[colors[v]].push_back(v);
    auto tied = std::find_if(classes.begin(), classes.end(),
                             [](const auto &kv) { return kv.second.size() > 1; });
    if (tied == classes.end()) {
      ++leaves;
      auto s = serialize(colors);
      if (best.empty() || s < best)
        best = std::move(s);
      return;
    }

    for (std::size_t v: tied->second) {
      Colors next(g.size());
      for (std::size_t u = 0; u < g.size(); ++u)
        next[u] = 2 * colors[u] + ((colors[u] == tied->first && u != v) ? 1 : 0);
      search(std::move(next));
    }
  }
};

std::string render(const std::vector<int> &code, std::size_t n) {
  std::string out;
  for (std::size_t p = 0; p < n; ++p) {
    if (p > 0)
      out += '.';
    const int z = code[2 * p];
    const int q = code[2 * p + 1];
    Element e = Element::kUnk;
    for (int k = 0; k <= static_cast<int>(Element::kUnk); ++k) {
      if (atomic_number(static_cast<Element>(k)) == z)
        e = static_cast<Element>(k);
    }
    out += element_symbol(e);
    if (q != 0)
      out += (q > 0 ? "+" : "") + std::to_string(q);
  }
  out += '|';
  for (std::size_t i = 2 * n; i + 2 < code.size(); i += 3) {
    if (i > 2 * n)
      out += ',';
    out += std::to_string(code[i]) + '-' + std::to_string(code[i + 1]) + ':';
    const int o = code[i + 2];
    out += o == static_cast<int>(BondOrder::kAromatic) ? std::string("a")
                                                       : std::to_string(o);
  }
  return out;
}
}  // namespace

std::string canonical_key(const Molecule &mol) {
  HeavyGraph g(mol);
  if (g.size() == 0)
    return "";

  Canonizer c { g, {}, {}, 0 };
  c.labels.reserve(g.size());
  std::vector<std::tuple<int, int, int>> init;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const Atom &a = mol.atoms()[g.atom_index[v]];
    c.labels.emplace_back(atomic_number(a.element), a.formal_charge);
    init.emplace_back(atomic_number(a.element), a.formal_charge,
                      static_cast<int>(g.adj[v].size()));
  }
  auto uniq = init;
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  Colors colors(g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    colors[v] = static_cast<int>(
        std::lower_bound(uniq.begin(), uniq.end(), init[v]) - uniq.begin());

  c.search(std::move(colors));
  return render(c.best, g.size());
}

}  // namespace voxscreen
