//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/chem.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen {

HeavyGraph::HeavyGraph(const Molecule &mol) {
  std::vector<std::size_t> heavy_of(mol.size(), SIZE_MAX);
  for (std::size_t i = 0; i < mol.size(); ++i) {
    if (mol.atoms()[i].is_heavy()) {
      heavy_of[i] = atom_index.size();
      atom_index.push_back(i);
    }
  }
  adj.resize(atom_index.size());
  explicit_h.assign(atom_index.size(), 0);
  for (const Bond &b: mol.bonds()) {
    const std::size_t ha = heavy_of[b.a], hb = heavy_of[b.b];
    if (ha != SIZE_MAX && hb != SIZE_MAX) {
      adj[ha].push_back({ hb, b.order });
      adj[hb].push_back({ ha, b.order });
    } else if (ha != SIZE_MAX) {
      ++explicit_h[ha];
    } else if (hb != SIZE_MAX) {
      ++explicit_h[hb];
    }
  }
}

namespace {
// Marks non-bridge edges (ring bonds) of the heavy graph.
class BridgeFinder {
public:
  explicit BridgeFinder(const HeavyGraph &g)
      : g_(g), disc_(g.size(), -1), low_(g.size(), 0) {
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (disc_[v] < 0)
        dfs(v, SIZE_MAX);
    }
  }

  bool is_bridge(std::size_t u, std::size_t v) const {
    return bridges_.count({ std::min(u, v), std::max(u, v) }) != 0;
  }

private:
  void dfs(std::size_t v, std::size_t parent) {
    disc_[v] = low_[v] = timer_++;
    for (const auto &e: g_.adj[v]) {
      if (e.to == parent)
        continue;
      if (disc_[e.to] < 0) {
        dfs(e.to, v);
        low_[v] = std::min(low_[v], low_[e.to]);
        if (low_[e.to] > disc_[v])
          bridges_.emplace(std::min(v, e.to), std::max(v, e.to));
      } else {
        low_[v] = std::min(low_[v], disc_[e.to]);
      }
    }
  }

  const HeavyGraph &g_;
  std::vector<int> disc_;
  std::vector<int> low_;
  int timer_ = 0;
  std::set<std::pair<std::size_t, std::size_t>> bridges_;
};

std::vector<bool> heavy_ring_flags(const HeavyGraph &g,
                                   const BridgeFinder &bf) {
  std::vector<bool> ring(g.size(), false);
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (const auto &e: g.adj[v]) {
      if (!bf.is_bridge(v, e.to)) {
        ring[v] = true;
        break;
      }
    }
  }
  return ring;
}

int standard_valence(Element e, int charge, double bond_sum) {
  auto smallest_fitting = [&](std::initializer_list<int> options) {
    for (int v: options) {
      if (v + charge >= bond_sum - 1e-9)
        return v + charge;
    }
    return *(options.end() - 1) + charge;
  };

  switch (e) {
  case Element::kC:
    return 4 - std::abs(charge);
  case Element::kN:
    return 3 + charge;
  case Element::kO:
    return 2 + charge;
  case Element::kB:
    return 3 - charge;
  case Element::kS:
    return smallest_fitting({ 2, 4, 6 });
  case Element::kP:
    return smallest_fitting({ 3, 5 });
  case Element::kF:
  case Element::kCl:
  case Element::kBr:
  case Element::kI:
    return 1 + charge;
  default:
    return 0;
  }
}
}  // namespace

std::vector<bool> ring_atoms(const Molecule &mol) {
  HeavyGraph g(mol);
  BridgeFinder bf(g);
  auto heavy = heavy_ring_flags(g, bf);
  std::vector<bool> out(mol.size(), false);
  for (std::size_t h = 0; h < g.size(); ++h)
    out[g.atom_index[h]] = heavy[h];
  return out;
}

std::vector<int> implicit_hydrogens(const Molecule &mol) {
  std::vector<double> sum(mol.size(), 0.0);
  for (const Bond &b: mol.bonds()) {
    sum[b.a] += bond_valence(b.order);
    sum[b.b] += bond_valence(b.order);
  }
  std::vector<int> out(mol.size(), 0);
  for (std::size_t i = 0; i < mol.size(); ++i) {
    const Atom &a = mol.atoms()[i];
    if (!a.is_heavy())
      continue;
    const int v = standard_valence(a.element, a.formal_charge, sum[i]);
    out[i] = std::max(0, static_cast<int>(std::floor(v - sum[i] + 1e-9)));
  }
  return out;
}

Scaffold murcko_scaffold(const Molecule &mol) {
  if (mol.empty())
    throw Error(ErrorKind::kValidation, "empty molecule");

  HeavyGraph g(mol);
  BridgeFinder bf(g);
  const auto ring = heavy_ring_flags(g, bf);

  std::vector<bool> alive(g.size(), true);
  std::vector<int> degree(g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    degree[v] = static_cast<int>(g.adj[v].size());

  std::vector<std::size_t> queue;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!ring[v] && degree[v] <= 1)
      queue.push_back(v);
  }
  while (!queue.empty()) {
    const std::size_t v = queue.back();
    queue.pop_back();
    if (!alive[v])
      continue;
    alive[v] = false;
    for (const auto &e: g.adj[v]) {
      if (alive[e.to] && --degree[e.to] <= 1 && !ring[e.to])
        queue.push_back(e.to);
    }
  }

  std::vector<std::size_t> new_index(mol.size(), SIZE_MAX);
  std::vector<Atom> atoms;
  for (std::size_t h = 0; h < g.size(); ++h) {
    if (alive[h]) {
      new_index[g.atom_index[h]] = atoms.size();
      atoms.push_back(mol.atoms()[g.atom_index[h]]);
    }
  }
  if (atoms.empty())
    return { Molecule(std::string(kAcyclicKey), {}, {}),
             std::string(kAcyclicKey) };

  std::vector<Bond> bonds;
  for (const Bond &b: mol.bonds()) {
    if (new_index[b.a] != SIZE_MAX && new_index[b.b] != SIZE_MAX)
      bonds.push_back({ new_index[b.a], new_index[b.b], b.order });
  }
  Molecule scaffold(mol.name(), std::move(atoms), std::move(bonds));
  std::string key = canonical_key(scaffold);
  return { std::move(scaffold), std::move(key) };
}

// ---------------------------------------------------------------------------
// Fingerprints
// ---------------------------------------------------------------------------

Fingerprint::Fingerprint(std::size_t nbits, int radius)
    : nbits_(nbits), radius_(radius), words_((nbits + 63) / 64, 0) {
  if (nbits == 0)
    throw Error(ErrorKind::kValidation, "fingerprint needs >= 1 bit");
}

void Fingerprint::set(std::size_t bit) {
  words_[bit / 64] |= std::uint64_t { 1 } << (bit % 64);
}

bool Fingerprint::test(std::size_t bit) const {
  return (words_[bit / 64] >> (bit % 64)) & 1U;
}

std::size_t Fingerprint::popcount() const {
  std::size_t n = 0;
  for (auto w: words_)
    n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> Fingerprint::set_bits() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nbits_; ++i) {
    if (test(i))
      out.push_back(i);
  }
  return out;
}

std::string Fingerprint::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  const std::size_t nbytes = (nbits_ + 7) / 8;
  out.reserve(2 * nbytes);
  for (std::size_t i = 0; i < nbytes; ++i) {
    const auto byte =
        static_cast<unsigned>((words_[i / 8] >> (8 * (i % 8))) & 0xff);
    out += kDigits[byte >> 4];
    out += kDigits[byte & 0xf];
  }
  return out;
}

Fingerprint Fingerprint::from_hex(std::string_view hex, int radius) {
  if (hex.empty() || hex.size() % 2 != 0)
    throw Error(ErrorKind::kParse, "fingerprint hex must have even length");
  Fingerprint fp(hex.size() * 4, radius);
  auto nibble = [](char c) -> unsigned {
    if (c >= '0' && c <= '9')
      return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f')
      return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F')
      return static_cast<unsigned>(c - 'A' + 10);
    throw Error(ErrorKind::kParse, "bad hex digit in fingerprint");
  };
  for (std::size_t i = 0; i < hex.size() / 2; ++i) {
    const std::uint64_t byte = (nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]);
    fp.words_[i / 8] |= byte << (8 * (i % 8));
  }
  return fp;
}

namespace {
void append_u64(std::vector<std::uint8_t> &buf, std::uint64_t v) {
  for (int k = 0; k < 8; ++k)
    buf.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}
}  // namespace

Fingerprint ecfp_fingerprint(const Molecule &mol, int radius,
                             std::size_t nbits) {
  if (radius < 0)
    throw Error(ErrorKind::kValidation, "fingerprint radius must be >= 0");
  Fingerprint fp(nbits, radius);

  HeavyGraph g(mol);
  BridgeFinder bf(g);
  const auto ring = heavy_ring_flags(g, bf);
  const auto implicit = implicit_hydrogens(mol);

  std::vector<std::uint64_t> codes(g.size());
  std::vector<std::uint8_t> buf;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const Atom &a = mol.atoms()[g.atom_index[v]];
    const int h = g.explicit_h[v] + implicit[g.atom_index[v]];
    buf = {
      static_cast<std::uint8_t>(atomic_number(a.element)),
      static_cast<std::uint8_t>(g.adj[v].size()),
      static_cast<std::uint8_t>(a.formal_charge + 128),
      static_cast<std::uint8_t>(h),
      static_cast<std::uint8_t>(ring[v] ? 1 : 0),
    };
    codes[v] = fnv1a64(buf);
    fp.set(codes[v] % nbits);
  }

  std::vector<std::pair<std::uint8_t, std::uint64_t>> nbrs;
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
      nbrs.clear();
      for (const auto &e: g.adj[v])
        nbrs.emplace_back(static_cast<std::uint8_t>(e.order), codes[e.to]);
      std::sort(nbrs.begin(), nbrs.end());
      buf.clear();
      append_u64(buf, codes[v]);
      for (const auto &[order, code]: nbrs) {
        buf.push_back(order);
        append_u64(buf, code);
      }
      next[v] = fnv1a64(buf);
      fp.set(next[v] % nbits);
    }
    codes = std::move(next);
  }
  return fp;
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.nbits() != b.nbits())
    throw Error(ErrorKind::kValidation, "fingerprint length mismatch");
  std::size_t both = 0, either = 0;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    both += static_cast<std::size_t>(std::popcount(a.words()[i] & b.words()[i]));
    either +=
        static_cast<std::size_t>(std::popcount(a.words()[i] | b.words()[i]));
  }
  if (either == 0)
    return 1.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

double atomic_weight(Element e) {
  switch (e) {
  case Element::kH:
    return 1.008;
  case Element::kB:
    return 10.81;
  case Element::kC:
    return 12.011;
  case Element::kN:
    return 14.007;
  case Element::kO:
    return 15.999;
  case Element::kF:
    return 18.998;
  case Element::kP:
    return 30.974;
  case Element::kS:
    return 32.06;
  case Element::kCl:
    return 35.45;
  case Element::kBr:
    return 79.904;
  case Element::kI:
    return 126.904;
  case Element::kMet:
    return 65.38;  // identity is lost on parsing; zinc stands in
  case Element::kUnk:
    return 12.011;
  }
  return 12.011;
}

DescriptorVector descriptors(const Molecule &mol) {
  if (mol.empty())
    throw Error(ErrorKind::kValidation, "empty molecule");

  HeavyGraph g(mol);
  BridgeFinder bf(g);
  const auto implicit = implicit_hydrogens(mol);

  DescriptorVector d;
  for (std::size_t i = 0; i < mol.size(); ++i) {
    const Atom &a = mol.atoms()[i];
    d.mol_weight += atomic_weight(a.element) + implicit[i] * atomic_weight(Element::kH);
    d.net_charge += a.formal_charge;
  }
  d.heavy_atoms = static_cast<int>(g.size());

  for (std::size_t v = 0; v < g.size(); ++v) {
    const Element e = mol.atoms()[g.atom_index[v]].element;
    if (e != Element::kN && e != Element::kO)
      continue;
    ++d.hba;
    if (g.explicit_h[v] + implicit[g.atom_index[v]] > 0)
      ++d.hbd;
  }

  for (std::size_t v = 0; v < g.size(); ++v) {
    for (const auto &e: g.adj[v]) {
      if (e.to < v || e.order != BondOrder::kSingle)
        continue;
      if (!bf.is_bridge(v, e.to))
        continue;  // ring bond
      if (g.adj[v].size() >= 2 && g.adj[e.to].size() >= 2)
        ++d.rot_bonds;
    }
  }
  return d;
}

std::string to_csv_row(const DescriptorVector &d) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.3f,%d,%d,%d,%d,%d", d.mol_weight,
                d.heavy_atoms, d.hbd, d.hba, d.rot_bonds, d.net_charge);
  return buf;
}

LigandFilter accept_all() {
  return [](const Molecule &) { return true; };
}

}  // namespace voxscreen
