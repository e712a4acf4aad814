//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/structio.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <tuple>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen {
namespace {
constexpr std::array<std::string_view, 13> kSymbols = {
  "H", "B", "C", "N", "O", "F", "P", "S", "Cl", "Br", "I", "Met", "Unk",
};

constexpr std::array<std::string_view, 52> kMetals = {
  "LI", "NA", "K",  "RB", "CS", "BE", "MG", "CA", "SR", "BA", "AL",
  "GA", "IN", "TL", "SN", "PB", "BI", "SC", "TI", "V",  "CR", "MN",
  "FE", "CO", "NI", "CU", "ZN", "Y",  "ZR", "NB", "MO", "TC", "RU",
  "RH", "PD", "AG", "CD", "HF", "TA", "W",  "RE", "OS", "IR", "PT",
  "AU", "HG", "LA", "CE", "GD", "EU", "YB", "SM",
};

constexpr std::array<std::string_view, 6> kWaterNames = {
  "HOH", "WAT", "DOD", "H2O", "TIP", "SOL",
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto &c: out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view field(std::string_view line, std::size_t begin,
                       std::size_t end) {
  if (begin >= line.size())
    return {};
  return line.substr(begin, std::min(end, line.size()) - begin);
}
}  // namespace

std::string_view element_symbol(Element e) {
  return kSymbols[static_cast<std::size_t>(e)];
}

Element element_from_symbol(std::string_view symbol, bool *known) {
  if (known != nullptr)
    *known = true;

  const std::string up = upper(trim(symbol));
  // Toolkit pseudo-symbols written by write_sdf().
  if (up == "MET")
    return Element::kMet;
  if (up == "UNK")
    return Element::kUnk;

  for (std::size_t i = 0; i < 11; ++i) {
    if (upper(kSymbols[i]) == up)
      return static_cast<Element>(i);
  }
  if (up == "D")  // deuterium
    return Element::kH;
  if (std::find(kMetals.begin(), kMetals.end(), up) != kMetals.end())
    return Element::kMet;

  if (known != nullptr)
    *known = false;
  return Element::kUnk;
}

int atomic_number(Element e) {
  switch (e) {
  case Element::kH:
    return 1;
  case Element::kB:
    return 5;
  case Element::kC:
    return 6;
  case Element::kN:
    return 7;
  case Element::kO:
    return 8;
  case Element::kF:
    return 9;
  case Element::kP:
    return 15;
  case Element::kS:
    return 16;
  case Element::kCl:
    return 17;
  case Element::kBr:
    return 35;
  case Element::kI:
    return 53;
  case Element::kMet:
    return 200;
  case Element::kUnk:
    return 0;
  }
  return 0;
}

double bond_valence(BondOrder order) {
  switch (order) {
  case BondOrder::kSingle:
    return 1.0;
  case BondOrder::kDouble:
    return 2.0;
  case BondOrder::kTriple:
    return 3.0;
  case BondOrder::kAromatic:
    return 1.5;
  }
  return 1.0;
}

Molecule::Molecule(std::string name, std::vector<Atom> atoms,
                   std::vector<Bond> bonds)
    : name_(std::move(name)), atoms_(std::move(atoms)),
      bonds_(std::move(bonds)) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Atom &a: atoms_) {
    if (!a.position.allFinite())
      throw Error(ErrorKind::kValidation, "non-finite atom position");
  }
  for (const Bond &b: bonds_) {
    if (b.a >= atoms_.size() || b.b >= atoms_.size())
      throw Error(ErrorKind::kValidation, "bond index out of range");
    if (b.a == b.b)
      throw Error(ErrorKind::kValidation, "self bond");
    if (!seen.emplace(std::min(b.a, b.b), std::max(b.a, b.b)).second)
      throw Error(ErrorKind::kValidation, "duplicate bond");
  }
}

std::size_t Molecule::heavy_atom_count() const {
  return static_cast<std::size_t>(std::count_if(
      atoms_.begin(), atoms_.end(), [](const Atom &a) { return a.is_heavy(); }));
}

Vec3 Molecule::heavy_centroid() const {
  Vec3 sum = Vec3::Zero();
  std::size_t n = 0;
  for (const Atom &a: atoms_) {
    if (a.is_heavy()) {
      sum += a.position;
      ++n;
    }
  }
  if (n == 0)
    throw Error(ErrorKind::kValidation, "no heavy atoms");
  return sum / static_cast<double>(n);
}

Molecule Molecule::translated(const Vec3 &shift) const {
  Molecule out = *this;
  for (Atom &a: out.atoms_)
    a.position += shift;
  return out;
}

Molecule Molecule::renamed(std::string name) const {
  Molecule out = *this;
  out.name_ = std::move(name);
  return out;
}

ProteinStructure ProteinStructure::translated(const Vec3 &shift) const {
  ProteinStructure out = *this;
  for (Atom &a: out.atoms)
    a.position += shift;
  if (out.bound_ligand)
    out.bound_ligand = out.bound_ligand->translated(shift);
  return out;
}

double covalent_radius(Element e) {
  switch (e) {
  case Element::kH:
    return 0.31;
  case Element::kB:
    return 0.84;
  case Element::kC:
    return 0.76;
  case Element::kN:
    return 0.71;
  case Element::kO:
    return 0.66;
  case Element::kF:
    return 0.57;
  case Element::kP:
    return 1.07;
  case Element::kS:
    return 1.05;
  case Element::kCl:
    return 1.02;
  case Element::kBr:
    return 1.20;
  case Element::kI:
    return 1.39;
  case Element::kMet:
    return 1.40;
  case Element::kUnk:
    return 0.76;
  }
  return 0.76;
}

std::vector<Bond> perceive_bonds(std::span<const Atom> atoms) {
  std::vector<Bond> bonds;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const double cutoff = covalent_radius(atoms[i].element)
                            + covalent_radius(atoms[j].element) + kBondSlack;
      if ((atoms[i].position - atoms[j].position).norm() < cutoff)
        bonds.push_back({ i, j, BondOrder::kSingle });
    }
  }
  return bonds;
}

// ---------------------------------------------------------------------------
// PDB
// ---------------------------------------------------------------------------

namespace {
Element pdb_element(std::string_view line, bool &known) {
  std::string_view el = trim(field(line, 76, 78));
  if (!el.empty())
    return element_from_symbol(el, &known);

  // No element column: deduce from the atom name (columns 13-16). A
  // right-justified name (blank or digit in column 13) has a one-letter
  // element in column 14.
  std::string_view name = field(line, 12, 16);
  if (name.empty()) {
    known = false;
    return Element::kUnk;
  }
  std::string letters;
  if (name[0] == ' ' || std::isdigit(static_cast<unsigned char>(name[0]))) {
    if (name.size() > 1)
      letters = std::string(1, name[1]);
  } else {
    letters = std::string(name.substr(0, std::min<std::size_t>(2, name.size())));
    letters.erase(std::remove_if(letters.begin(), letters.end(),
                                 [](char c) {
                                   return !std::isalpha(
                                       static_cast<unsigned char>(c));
                                 }),
                  letters.end());
  }
  return element_from_symbol(letters, &known);
}

int pdb_charge(std::string_view line) {
  std::string_view ch = trim(field(line, 78, 80));
  if (ch.size() != 2 || !std::isdigit(static_cast<unsigned char>(ch[0])))
    return 0;
  const int mag = ch[0] - '0';
  if (ch[1] == '-')
    return -mag;
  if (ch[1] == '+')
    return mag;
  return 0;
}

bool is_water(std::string_view resname) {
  std::string up = upper(trim(resname));
  return std::any_of(kWaterNames.begin(), kWaterNames.end(),
                     [&](std::string_view w) { return up.starts_with(w); });
}
}  // namespace

ProteinStructure parse_protein(std::string_view text,
                               const PdbOptions &options) {
  ProteinStructure out;
  std::vector<Atom> ligand_atoms;
  std::optional<std::pair<char, int>> ligand_group;
  // Key for "first occurrence wins": (chain, residue number, atom name).
  std::set<std::tuple<char, int, std::string, bool>> seen;
  const std::string ligand_res = upper(trim(options.ligand_residue));

  auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    const std::size_t lineno = ln + 1;

    if (line.starts_with("END"))  // END and ENDMDL
      break;
    const bool is_atom = line.starts_with("ATOM  ") || line == "ATOM";
    const bool is_het = line.starts_with("HETATM");
    if (!is_atom && !is_het)
      continue;

    if (line.size() < 54)
      throw ParseError("coordinate record too short", lineno);

    Vec3 pos;
    for (int k = 0; k < 3; ++k) {
      double v;
      if (!parse_double(field(line, 30 + 8 * k, 38 + 8 * k), v))
        throw ParseError("unparseable coordinate", lineno);
      pos[k] = v;
    }

    bool known = true;
    Atom atom { pdb_element(line, known), pos, pdb_charge(line) };
    if (!known)
      ++out.report.unknown_elements;

    const std::string resname(trim(field(line, 17, 20)));
    const char chain = line.size() > 21 ? line[21] : ' ';
    long resnum = 0;
    if (!parse_int(field(line, 22, 26), resnum))
      throw ParseError("unparseable residue number", lineno);
    const std::string atom_name(trim(field(line, 12, 16)));

    if (is_het && is_water(resname) && !options.keep_waters) {
      ++out.report.dropped_waters;
      continue;
    }
    if (is_het && atom.element == Element::kMet && !options.keep_metals) {
      ++out.report.dropped_metals;
      continue;
    }

    if (!seen.emplace(chain, static_cast<int>(resnum), atom_name, is_het)
             .second) {
      ++out.report.duplicate_atoms;
      continue;
    }

    if (is_het && !ligand_res.empty() && upper(resname) == ligand_res) {
      std::pair<char, int> group { chain, static_cast<int>(resnum) };
      if (!ligand_group)
        ligand_group = group;
      if (*ligand_group == group)
        ligand_atoms.push_back(atom);
      else
        ++out.report.extra_ligand_atoms;
      continue;
    }

    out.atoms.push_back(atom);
    out.residue_tags.push_back({ chain, resname, static_cast<int>(resnum) });
  }

  if (out.atoms.empty())
    throw Error(ErrorKind::kParse, "empty structure");

  if (!ligand_atoms.empty()) {
    auto bonds = perceive_bonds(ligand_atoms);
    out.bound_ligand = Molecule(options.ligand_residue, std::move(ligand_atoms),
                                std::move(bonds));
  }
  return out;
}

std::string write_pdb(const ProteinStructure &protein) {
  std::string out;
  char buf[96];
  std::size_t serial = 1;
  std::pair<char, int> last_residue { '\0', 0 };
  int in_residue = 0;
  auto emit = [&](const char *record, const Atom &a, std::string_view resname,
                  char chain, int resnum) {
    if (last_residue != std::pair { chain, resnum }) {
      last_residue = { chain, resnum };
      in_residue = 0;
    }
    ++in_residue;
    std::string sym(element_symbol(a.element));
    if (a.element == Element::kMet)
      sym = "ZN";
    else if (a.element == Element::kUnk)
      sym = "X";
    std::string name = upper(sym) + std::to_string(in_residue);
    if (name.size() > 4)
      name = name.substr(0, 4);
    std::string charge = "  ";
    if (a.formal_charge != 0)
      charge = std::to_string(std::abs(a.formal_charge))
               + (a.formal_charge > 0 ? "+" : "-");
    std::snprintf(buf, sizeof(buf),
                  "%-6s%5zu %-4s %3.3s %c%4d    %8.3f%8.3f%8.3f  1.00  0.00"
                  "          %2s%2s\n",
                  record, serial % 100000, name.c_str(),
                  std::string(resname).c_str(), chain, resnum, a.position.x(),
                  a.position.y(), a.position.z(), upper(sym).c_str(),
                  charge.c_str());
    out += buf;
    ++serial;
  };

  for (std::size_t i = 0; i < protein.atoms.size(); ++i) {
    const ResidueTag &tag = protein.residue_tags[i];
    emit("ATOM", protein.atoms[i], tag.residue_name, tag.chain,
         tag.residue_number);
  }
  out += "TER\n";
  if (protein.bound_ligand) {
    for (const Atom &a: protein.bound_ligand->atoms())
      emit("HETATM", a, protein.bound_ligand->name(), 'L', 1);
  }
  out += "END\n";
  return out;
}

// ---------------------------------------------------------------------------
// SDF
// ---------------------------------------------------------------------------

namespace {
int charge_from_code(long code) {
  switch (code) {
  case 1:
    return 3;
  case 2:
    return 2;
  case 3:
    return 1;
  case 5:
    return -1;
  case 6:
    return -2;
  case 7:
    return -3;
  default:
    return 0;
  }
}

// Parses one record starting at lines[pos]; advances pos past `$$$$`.
Molecule parse_sdf_record(const std::vector<std::string_view> &lines,
                          std::size_t &pos) {
  const std::size_t start = pos;
  if (pos + 3 >= lines.size())
    throw ParseError("truncated header block", pos + 1);

  std::string name(trim(lines[pos]));
  const std::string_view counts = lines[pos + 3];
  const std::size_t counts_line = pos + 4;
  if (counts.find("V3000") != std::string_view::npos)
    throw ParseError("V3000 records are not supported", counts_line);

  long natoms = 0, nbonds = 0;
  if (!parse_int(field(counts, 0, 3), natoms)
      || !parse_int(field(counts, 3, 6), nbonds) || natoms < 0 || nbonds < 0)
    throw ParseError("malformed counts line", counts_line);
  pos += 4;

  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(natoms));
  for (long i = 0; i < natoms; ++i, ++pos) {
    if (pos >= lines.size())
      throw ParseError("counts line declares " + std::to_string(natoms)
                           + " atoms but the atom block ends early",
                       pos + 1);
    std::string_view line = lines[pos];
    Atom atom;
    for (int k = 0; k < 3; ++k) {
      double v;
      if (!parse_double(field(line, 10 * k, 10 * k + 10), v))
        throw ParseError("counts line declares " + std::to_string(natoms)
                             + " atoms; malformed atom line",
                         pos + 1);
      atom.position[k] = v;
    }
    std::string_view sym = trim(field(line, 31, 34));
    if (sym.empty()
        || !std::all_of(sym.begin(), sym.end(), [](char c) {
             return std::isalpha(static_cast<unsigned char>(c));
           }))
      throw ParseError("malformed element symbol", pos + 1);
    atom.element = element_from_symbol(sym);
    long code = 0;
    if (line.size() > 36 && parse_int(field(line, 36, 39), code))
      atom.formal_charge = charge_from_code(code);
    atoms.push_back(atom);
  }

  std::vector<Bond> bonds;
  bonds.reserve(static_cast<std::size_t>(nbonds));
  for (long i = 0; i < nbonds; ++i, ++pos) {
    if (pos >= lines.size())
      throw ParseError("counts line declares " + std::to_string(nbonds)
                           + " bonds but the bond block ends early",
                       pos + 1);
    std::string_view line = lines[pos];
    long a, b, type;
    if (!parse_int(field(line, 0, 3), a) || !parse_int(field(line, 3, 6), b)
        || !parse_int(field(line, 6, 9), type))
      throw ParseError("counts line declares " + std::to_string(nbonds)
                           + " bonds; malformed bond line",
                       pos + 1);
    if (a < 1 || b < 1 || a > natoms || b > natoms)
      throw ParseError("bond atom index out of range", pos + 1);
    if (type < 1 || type > 4)
      throw ParseError("unsupported bond type " + std::to_string(type),
                       pos + 1);
    if (a == b)
      throw ParseError("self bond", pos + 1);
    bonds.push_back({ static_cast<std::size_t>(a - 1),
                      static_cast<std::size_t>(b - 1),
                      static_cast<BondOrder>(type) });
  }

  // Properties block. M  CHG resets all charges from the atom block.
  bool charges_reset = false;
  for (; pos < lines.size(); ++pos) {
    std::string_view line = lines[pos];
    if (line.starts_with("M  END")) {
      ++pos;
      break;
    }
    if (line.starts_with("$$$$") || line.starts_with("> "))
      break;
    if (line.starts_with("M  CHG")) {
      if (!charges_reset) {
        for (Atom &a: atoms)
          a.formal_charge = 0;
        charges_reset = true;
      }
      long n = 0;
      if (!parse_int(field(line, 6, 9), n) || n < 0 || n > 8)
        throw ParseError("malformed M  CHG line", pos + 1);
      for (long k = 0; k < n; ++k) {
        long idx, val;
        if (!parse_int(field(line, 9 + 8 * k, 13 + 8 * k), idx)
            || !parse_int(field(line, 13 + 8 * k, 17 + 8 * k), val))
          throw ParseError("malformed M  CHG entry", pos + 1);
        if (idx < 1 || idx > natoms)
          throw ParseError("M  CHG atom index out of range", pos + 1);
        atoms[static_cast<std::size_t>(idx - 1)].formal_charge =
            static_cast<int>(val);
      }
    }
  }

  // Data items up to the record terminator.
  for (; pos < lines.size(); ++pos) {
    if (lines[pos].starts_with("$$$$")) {
      ++pos;
      break;
    }
  }

  try {
    return Molecule(std::move(name), std::move(atoms), std::move(bonds));
  } catch (const Error &e) {
    throw ParseError(e.what(), start + 1);
  }
}
}  // namespace

std::vector<Molecule> parse_ligands(std::string_view text) {
  auto lines = split_lines(text);
  std::vector<Molecule> out;
  std::size_t pos = 0;
  while (pos < lines.size()) {
    // Skip trailing blank lines between records.
    std::size_t probe = pos;
    while (probe < lines.size() && trim(lines[probe]).empty())
      ++probe;
    if (probe == lines.size())
      break;
    out.push_back(parse_sdf_record(lines, pos));
  }
  return out;
}

Molecule parse_ligand(std::string_view text) {
  auto lines = split_lines(text);
  std::size_t pos = 0;
  if (lines.empty())
    throw ParseError("empty SDF", 1);
  return parse_sdf_record(lines, pos);
}

std::string write_sdf(const Molecule &mol, const SdfProperties &props) {
  std::string out;
  char buf[128];
  out += mol.name();
  out += "\n  voxscreen\n\n";
  std::snprintf(buf, sizeof(buf), "%3zu%3zu  0  0  0  0  0  0  0  0999 V2000\n",
                mol.size(), mol.bonds().size());
  out += buf;

  std::vector<std::pair<std::size_t, int>> charged;
  for (std::size_t i = 0; i < mol.size(); ++i) {
    const Atom &a = mol.atoms()[i];
    std::snprintf(buf, sizeof(buf),
                  "%10.4f%10.4f%10.4f %-3s 0  0  0  0  0  0  0  0  0  0  0  0\n",
                  a.position.x(), a.position.y(), a.position.z(),
                  std::string(element_symbol(a.element)).c_str());
    out += buf;
    if (a.formal_charge != 0)
      charged.emplace_back(i + 1, a.formal_charge);
  }
  for (const Bond &b: mol.bonds()) {
    std::snprintf(buf, sizeof(buf), "%3zu%3zu%3d  0\n", b.a + 1, b.b + 1,
                  static_cast<int>(b.order));
    out += buf;
  }
  for (std::size_t k = 0; k < charged.size(); k += 8) {
    const std::size_t n = std::min<std::size_t>(8, charged.size() - k);
    std::snprintf(buf, sizeof(buf), "M  CHG%3zu", n);
    out += buf;
    for (std::size_t m = 0; m < n; ++m) {
      std::snprintf(buf, sizeof(buf), " %3zu %3d", charged[k + m].first,
                    charged[k + m].second);
      out += buf;
    }
    out += '\n';
  }
  out += "M  END\n";
  for (const auto &[key, value]: props) {
    out += "> <" + key + ">\n" + value + "\n\n";
  }
  out += "$$$$\n";
  return out;
}

ValidatedComplex validate_complex(ProteinStructure protein, Molecule ligand) {
  if (protein.atoms.empty())
    throw Error(ErrorKind::kValidation, "empty structure");
  if (ligand.heavy_atom_count() == 0)
    throw Error(ErrorKind::kValidation, "no heavy atoms");

  const Vec3 c = ligand.heavy_centroid();
  double best = std::numeric_limits<double>::infinity();
  for (const Atom &a: protein.atoms)
    best = std::min(best, (a.position - c).squaredNorm());
  if (std::sqrt(best) > kMaxLigandDistance)
    throw Error(ErrorKind::kValidation, "ligand outside structure");

  return { std::move(protein), std::move(ligand) };
}

}  // namespace voxscreen
