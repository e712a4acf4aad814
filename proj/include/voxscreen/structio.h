//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_STRUCTIO_H_
#define VOXSCREEN_STRUCTIO_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace voxscreen {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Supported element set. Any metal collapses to kMet and anything
// unrecognized to kUnk.
enum class Element : std::uint8_t {
  kH,
  kB,
  kC,
  kN,
  kO,
  kF,
  kP,
  kS,
  kCl,
  kBr,
  kI,
  kMet,
  kUnk,
};

std::string_view element_symbol(Element e);

// Case-insensitive symbol lookup. Metal symbols map to kMet; unknown
// symbols map to kUnk with *known set to false.
Element element_from_symbol(std::string_view symbol, bool *known = nullptr);

int atomic_number(Element e);

struct Atom {
  Element element = Element::kUnk;
  Vec3 position = Vec3::Zero();
  int formal_charge = 0;

  bool is_heavy() const { return element != Element::kH; }

  bool operator==(const Atom &other) const = default;
};

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// Contribution to the valence sum (aromatic counts 1.5).
double bond_valence(BondOrder order);

struct Bond {
  std::size_t a = 0;
  std::size_t b = 0;
  BondOrder order = BondOrder::kSingle;

  bool operator==(const Bond &other) const = default;
};

// Atoms plus explicit bonds. Bond indices are validated on construction:
// in range, no self bonds, no duplicate unordered pairs.
class Molecule {
public:
  Molecule() = default;
  Molecule(std::string name, std::vector<Atom> atoms, std::vector<Bond> bonds);

  const std::string &name() const { return name_; }
  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  std::size_t heavy_atom_count() const;
  // Centroid of the heavy atoms. Requires heavy_atom_count() > 0.
  Vec3 heavy_centroid() const;

  Molecule translated(const Vec3 &shift) const;
  Molecule renamed(std::string name) const;

  bool operator==(const Molecule &other) const = default;

private:
  std::string name_;
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
};

struct ResidueTag {
  char chain = ' ';
  std::string residue_name;
  int residue_number = 0;

  bool operator==(const ResidueTag &other) const = default;
};

// Per-file diagnostics. Every coordinate record either produces an atom or
// increments one of these counters.
struct ParseReport {
  std::size_t unknown_elements = 0;
  std::size_t duplicate_atoms = 0;  // altloc / insertion-code repeats
  std::size_t dropped_waters = 0;
  std::size_t dropped_metals = 0;
  std::size_t extra_ligand_atoms = 0;  // later copies of the site ligand
};

struct ProteinStructure {
  std::vector<Atom> atoms;
  std::vector<ResidueTag> residue_tags;
  std::optional<Molecule> bound_ligand;
  ParseReport report;

  ProteinStructure translated(const Vec3 &shift) const;
};

struct PdbOptions {
  // HETATM residue name that marks the site-seeding ligand.
  std::string ligand_residue = "LIG";
  bool keep_waters = false;
  bool keep_metals = true;
};

// PDB subset: ATOM/HETATM (coordinates in columns 31-54, element in 77-78,
// charge in 79-80), TER ignored, END/ENDMDL terminate. Proteins carry no
// bonds; the bound ligand gets distance-perceived single bonds.
ProteinStructure parse_protein(std::string_view text,
                               const PdbOptions &options = {});

std::string write_pdb(const ProteinStructure &protein);

// SDF V2000 subset. parse_ligand() reads the first record only.
Molecule parse_ligand(std::string_view text);
std::vector<Molecule> parse_ligands(std::string_view text);

using SdfProperties = std::vector<std::pair<std::string, std::string>>;

std::string write_sdf(const Molecule &mol, const SdfProperties &props = {});

double covalent_radius(Element e);

// Bonded iff distance < r_cov(a) + r_cov(b) + slack.
inline constexpr double kBondSlack = 0.45;
std::vector<Bond> perceive_bonds(std::span<const Atom> atoms);

struct ValidatedComplex {
  ProteinStructure protein;
  Molecule ligand;
};

inline constexpr double kMaxLigandDistance = 15.0;

// Ligand needs >= 1 heavy atom and its heavy-atom centroid must lie within
// kMaxLigandDistance of some protein atom.
ValidatedComplex validate_complex(ProteinStructure protein, Molecule ligand);

}  // namespace voxscreen

#endif  // VOXSCREEN_STRUCTIO_H_
