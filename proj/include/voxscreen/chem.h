//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_CHEM_H_
#define VOXSCREEN_CHEM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "voxscreen/structio.h"

namespace voxscreen {

// Heavy-atom view of a molecule: hydrogens removed, explicit H counted on
// their heavy neighbor.
struct HeavyGraph {
  struct Edge {
    std::size_t to;
    BondOrder order;
  };

  std::vector<std::size_t> atom_index;  // heavy index -> molecule index
  std::vector<std::vector<Edge>> adj;
  std::vector<int> explicit_h;

  explicit HeavyGraph(const Molecule &mol);
  std::size_t size() const { return atom_index.size(); }
};

// Ring membership by bridge detection: an atom is a ring atom iff it has an
// incident bond that is not a bridge.
std::vector<bool> ring_atoms(const Molecule &mol);

// Hydrogens implied by standard valence minus bond-order sum, floored at 0.
// Per-atom over the full molecule; 0 for explicit hydrogens.
std::vector<int> implicit_hydrogens(const Molecule &mol);

// Canonical serialization of the heavy-atom graph (element, charge and bond
// order labelled). Equal for any atom ordering of the same graph.
std::string canonical_key(const Molecule &mol);

inline constexpr std::string_view kAcyclicKey = "ACYCLIC";

struct Scaffold {
  Molecule molecule;
  std::string canonical_key;

  bool acyclic() const { return canonical_key == kAcyclicKey; }
};

// Bemis-Murcko framework: drop hydrogens, then repeatedly delete non-ring
// heavy atoms of degree <= 1. Elements and bond orders are kept.
Scaffold murcko_scaffold(const Molecule &mol);

class Fingerprint {
public:
  Fingerprint() = default;
  Fingerprint(std::size_t nbits, int radius);

  std::size_t nbits() const { return nbits_; }
  int radius() const { return radius_; }

  void set(std::size_t bit);
  bool test(std::size_t bit) const;
  std::size_t popcount() const;
  std::vector<std::size_t> set_bits() const;
  const std::vector<std::uint64_t> &words() const { return words_; }

  // Byte i holds bits 8i..8i+7, least significant first; two lowercase hex
  // digits per byte.
  std::string to_hex() const;
  static Fingerprint from_hex(std::string_view hex, int radius);

  bool operator==(const Fingerprint &other) const = default;

private:
  std::size_t nbits_ = 0;
  int radius_ = 0;
  std::vector<std::uint64_t> words_;
};

// Extended-connectivity fingerprint over heavy atoms.
//
// Initial code: FNV-1a 64 over the bytes (atomic number, heavy degree,
// formal charge + 128, attached hydrogens, ring flag). Round r: FNV-1a 64
// over the previous code (8 bytes LE) followed by, for each neighbor in
// ascending (bond order, code) order, the bond-order byte and the
// neighbor's code (8 bytes LE). Every code of every round sets bit
// code % nbits.
Fingerprint ecfp_fingerprint(const Molecule &mol, int radius = 2,
                             std::size_t nbits = 2048);

// |a & b| / |a | b|; 1.0 when both are empty. Throws on length mismatch.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

struct DescriptorVector {
  double mol_weight = 0;
  int heavy_atoms = 0;
  int hbd = 0;
  int hba = 0;
  int rot_bonds = 0;
  int net_charge = 0;

  bool operator==(const DescriptorVector &other) const = default;
};

double atomic_weight(Element e);

DescriptorVector descriptors(const Molecule &mol);

inline constexpr std::string_view kDescriptorCsvHeader =
    "mw,heavy,hbd,hba,rot,charge";
std::string to_csv_row(const DescriptorVector &d);

// Structural alert hook (PAINS, promiscuity rules). The rule sets are not
// bundled; accept_all() is the default.
using LigandFilter = std::function<bool(const Molecule &)>;
LigandFilter accept_all();

}  // namespace voxscreen

#endif  // VOXSCREEN_CHEM_H_
