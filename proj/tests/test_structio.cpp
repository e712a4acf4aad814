//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/structio.h"

#include <gtest/gtest.h>

#include "test_support.h"
#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen {
namespace {

using testing::pdb_atom;

std::string two_atoms() {
  return pdb_atom("ATOM", 1, " N", "GLY", 'A', 1, 0, 0, 0, "N")
         + pdb_atom("ATOM", 2, " CA", "GLY", 'A', 1, 1.45, 0, 0, "C");
}

TEST(ParseProtein, CountsAtomRecords) {
  ProteinStructure p = parse_protein(two_atoms() + "END\n");
  ASSERT_EQ(p.atoms.size(), 2U);
  EXPECT_EQ(p.residue_tags.size(), 2U);
  EXPECT_EQ(p.atoms[0].element, Element::kN);
  EXPECT_EQ(p.atoms[1].element, Element::kC);
  EXPECT_DOUBLE_EQ(p.atoms[1].position.x(), 1.45);
  EXPECT_EQ(p.residue_tags[0].chain, 'A');
  EXPECT_EQ(p.residue_tags[0].residue_name, "GLY");
  EXPECT_FALSE(p.bound_ligand.has_value());
}

TEST(ParseProtein, NoAtomsIsEmptyStructure) {
  try {
    parse_protein("REMARK nothing here\nEND\n");
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("empty structure"), std::string::npos);
  }
}

TEST(ParseProtein, LigandBondsByDistance) {
  // C covalent radius 0.76: threshold 0.76 + 0.76 + 0.45 = 1.97.
  const std::string bonded = two_atoms()
                             + pdb_atom("HETATM", 3, " C1", "LIG", 'B', 9, 5, 5, 5, "C")
                             + pdb_atom("HETATM", 4, " C2", "LIG", 'B', 9, 6.5, 5, 5, "C");
  ProteinStructure p = parse_protein(bonded);
  ASSERT_TRUE(p.bound_ligand.has_value());
  EXPECT_EQ(p.bound_ligand->size(), 2U);
  EXPECT_EQ(p.bound_ligand->bonds().size(), 1U);
  EXPECT_EQ(p.atoms.size(), 2U);

  const std::string apart = two_atoms()
                            + pdb_atom("HETATM", 3, " C1", "LIG", 'B', 9, 5, 5, 5, "C")
                            + pdb_atom("HETATM", 4, " C2", "LIG", 'B', 9, 8.0, 5, 5, "C");
  EXPECT_EQ(parse_protein(apart).bound_ligand->bonds().size(), 0U);
}

TEST(ParseProtein, PerceptionThresholdEdges) {
  std::vector<Atom> atoms { { Element::kC, Vec3(0, 0, 0), 0 },
                            { Element::kC, Vec3(1.96, 0, 0), 0 } };
  EXPECT_EQ(perceive_bonds(atoms).size(), 1U);
  atoms[1].position.x() = 1.98;
  EXPECT_EQ(perceive_bonds(atoms).size(), 0U);
}

TEST(ParseProtein, ShortRecordReportsLine) {
  const std::string text = two_atoms() + "ATOM      3  C   GLY A   1      1.0\n";
  try {
    parse_protein(text);
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3U);
  }
}

TEST(ParseProtein, BadCoordinateReportsLine) {
  std::string bad = pdb_atom("ATOM", 3, " C", "GLY", 'A', 1, 1, 2, 3, "C");
  bad.replace(30, 8, "  abc.de");
  try {
    parse_protein(two_atoms() + bad);
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3U);
  }
}

TEST(ParseProtein, UnknownElementCountedNotDropped) {
  const std::string text = two_atoms() + pdb_atom("ATOM", 3, " XX", "GLY", 'A', 2, 3, 0, 0, "Xx");
  ProteinStructure p = parse_protein(text);
  ASSERT_EQ(p.atoms.size(), 3U);
  EXPECT_EQ(p.atoms[2].element, Element::kUnk);
  EXPECT_EQ(p.report.unknown_elements, 1U);
}

TEST(ParseProtein, ElementFromAtomName) {
  const std::string text = pdb_atom("ATOM", 1, " CA", "GLY", 'A', 1, 0, 0, 0, "")
                           + pdb_atom("ATOM", 2, " OG", "SER", 'A', 2, 1, 0, 0, "")
                           + pdb_atom("HETATM", 3, "ZN", "ZN", 'A', 3, 2, 0, 0, "");
  ProteinStructure p = parse_protein(text);
  ASSERT_EQ(p.atoms.size(), 3U);
  EXPECT_EQ(p.atoms[0].element, Element::kC);
  EXPECT_EQ(p.atoms[1].element, Element::kO);
  EXPECT_EQ(p.atoms[2].element, Element::kMet);
}

TEST(ParseProtein, WatersDroppedMetalsKept) {
  const std::string text = two_atoms()
                           + pdb_atom("HETATM", 3, " O", "HOH", 'A', 50, 4, 0, 0, "O")
                           + pdb_atom("HETATM", 4, "ZN", "ZN", 'A', 51, 5, 0, 0, "ZN");
  ProteinStructure p = parse_protein(text);
  EXPECT_EQ(p.atoms.size(), 3U);
  EXPECT_EQ(p.report.dropped_waters, 1U);

  PdbOptions opt;
  opt.keep_waters = true;
  opt.keep_metals = false;
  ProteinStructure q = parse_protein(text, opt);
  EXPECT_EQ(q.atoms.size(), 3U);
  EXPECT_EQ(q.report.dropped_metals, 1U);
  EXPECT_EQ(q.atoms[2].element, Element::kO);
}

TEST(ParseProtein, AltLocFirstOccurrenceWins) {
  const std::string text = pdb_atom("ATOM", 1, " CB", "SER", 'A', 1, 0, 0, 0, "C", "", 'A')
                           + pdb_atom("ATOM", 2, " CB", "SER", 'A', 1, 0.3, 0, 0, "C", "", 'B');
  ProteinStructure p = parse_protein(text);
  ASSERT_EQ(p.atoms.size(), 1U);
  EXPECT_DOUBLE_EQ(p.atoms[0].position.x(), 0.0);
  EXPECT_EQ(p.report.duplicate_atoms, 1U);
}

TEST(ParseProtein, FormalChargeColumns) {
  const std::string text = pdb_atom("ATOM", 1, " NZ", "LYS", 'A', 1, 0, 0, 0, "N", "1+")
                           + pdb_atom("ATOM", 2, " OD1", "ASP", 'A', 2, 3, 0, 0, "O", "1-");
  ProteinStructure p = parse_protein(text);
  EXPECT_EQ(p.atoms[0].formal_charge, 1);
  EXPECT_EQ(p.atoms[1].formal_charge, -1);
}

TEST(ParseProtein, StopsAtEnd) {
  const std::string text = two_atoms() + "END\n"
                           + pdb_atom("ATOM", 3, " C", "GLY", 'A', 2, 9, 9, 9, "C");
  EXPECT_EQ(parse_protein(text).atoms.size(), 2U);
}

TEST(ParseProtein, PdbRoundTrip) {
  const std::string text = two_atoms()
                           + pdb_atom("ATOM", 3, " NZ", "LYS", 'A', 2, 2.5, -1.25, 3.125, "N", "1+")
                           + pdb_atom("HETATM", 4, " C1", "LIG", 'B', 9, 5, 5, 5, "C")
                           + pdb_atom("HETATM", 5, " O1", "LIG", 'B', 9, 6.2, 5, 5, "O");
  ProteinStructure a = parse_protein(text);
  ProteinStructure b = parse_protein(write_pdb(a));
  EXPECT_EQ(a.atoms, b.atoms);
  ASSERT_TRUE(b.bound_ligand.has_value());
  EXPECT_EQ(a.bound_ligand->atoms(), b.bound_ligand->atoms());
  EXPECT_EQ(a.bound_ligand->bonds(), b.bound_ligand->bonds());
}

TEST(ParseProtein, Deterministic) {
  const std::string text = two_atoms();
  EXPECT_EQ(parse_protein(text).atoms, parse_protein(text).atoms);
}

const char *kEthane =
    "ethane\n  hand\n\n"
    "  2  1  0  0  0  0  0  0  0  0999 V2000\n"
    "    0.0000    0.0000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0\n"
    "    1.5400    0.0000    0.0000 C   0  0  0  0  0  0  0  0  0  0  0  0\n"
    "  1  2  1  0\n"
    "M  END\n$$$$\n";

std::string benzene() {
  std::string s = "benzene\n\n\n  6  6  0  0  0  0  0  0  0  0999 V2000\n";
  for (int i = 0; i < 6; ++i) {
    char buf[80];
    const double a = i * 3.14159265358979 / 3;
    std::snprintf(buf, sizeof buf, "%10.4f%10.4f%10.4f C   0  0\n", 1.39 * std::cos(a),
                  1.39 * std::sin(a), 0.0);
    s += buf;
  }
  for (int i = 0; i < 6; ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%3d%3d  4  0\n", i + 1, (i + 1) % 6 + 1);
    s += buf;
  }
  return s + "M  END\n$$$$\n";
}

TEST(ParseLigand, Ethane) {
  Molecule m = parse_ligand(kEthane);
  EXPECT_EQ(m.name(), "ethane");
  ASSERT_EQ(m.size(), 2U);
  ASSERT_EQ(m.bonds().size(), 1U);
  EXPECT_EQ(m.bonds()[0].order, BondOrder::kSingle);
  EXPECT_DOUBLE_EQ(m.atoms()[1].position.x(), 1.54);
}

TEST(ParseLigand, BenzeneAromatic) {
  Molecule m = parse_ligand(benzene());
  EXPECT_EQ(m.size(), 6U);
  ASSERT_EQ(m.bonds().size(), 6U);
  for (const Bond &b: m.bonds())
    EXPECT_EQ(b.order, BondOrder::kAromatic);
}

TEST(ParseLigand, CountMismatch) {
  const std::string text =
      "short\n\n\n  5  0  0  0  0  0  0  0  0  0999 V2000\n"
      "    0.0000    0.0000    0.0000 C   0  0\n"
      "    1.0000    0.0000    0.0000 C   0  0\n"
      "    2.0000    0.0000    0.0000 C   0  0\n"
      "    3.0000    0.0000    0.0000 C   0  0\n"
      "M  END\n$$$$\n";
  EXPECT_THROW(parse_ligand(text), ParseError);
}

TEST(ParseLigand, BondIndexOutOfRange) {
  std::string text = kEthane;
  text.replace(text.find("  1  2  1  0"), 12, "  1  3  1  0");
  EXPECT_THROW(parse_ligand(text), ParseError);
}

TEST(ParseLigand, ChargeLineApplied) {
  std::string text = kEthane;
  text.replace(text.find("M  END"), 6, "M  CHG  2   1   1   2  -1\nM  END");
  Molecule m = parse_ligand(text);
  EXPECT_EQ(m.atoms()[0].formal_charge, 1);
  EXPECT_EQ(m.atoms()[1].formal_charge, -1);
}

TEST(ParseLigand, MultipleRecordsAndData) {
  std::string text = kEthane;
  text.insert(text.find("$$$$"), "> <activity>\n3.2\n\n");
  const auto mols = parse_ligands(text + benzene());
  ASSERT_EQ(mols.size(), 2U);
  EXPECT_EQ(mols[1].name(), "benzene");
}

TEST(Sdf, RoundTripProperty) {
  Rng rng(11);
  const Element pool[] = { Element::kC, Element::kN, Element::kO, Element::kS,
                           Element::kCl, Element::kH, Element::kMet, Element::kUnk };
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < n; ++i) {
      Atom a;
      a.element = pool[rng.below(8)];
      for (int k = 0; k < 3; ++k)
        a.position[k] = std::round((rng.uniform() * 40 - 20) * 1e4) / 1e4;
      a.formal_charge = static_cast<int>(rng.below(5)) - 2;
      atoms.push_back(a);
    }
    std::vector<Bond> bonds;
    for (std::size_t i = 1; i < n; ++i) {
      if (rng.below(4) != 0)
        bonds.push_back({ rng.below(i), i, static_cast<BondOrder>(1 + rng.below(4)) });
    }
    Molecule m("mol" + std::to_string(trial), atoms, bonds);
    Molecule back = parse_ligand(write_sdf(m, { { "k", "v" } }));
    ASSERT_EQ(back, m) << "trial " << trial;
  }
}

TEST(Molecule, RejectsBadBonds) {
  std::vector<Atom> atoms(2, Atom { Element::kC, Vec3::Zero(), 0 });
  EXPECT_THROW(Molecule("x", atoms, { { 0, 2, BondOrder::kSingle } }), Error);
  EXPECT_THROW(Molecule("x", atoms, { { 1, 1, BondOrder::kSingle } }), Error);
  EXPECT_THROW(Molecule("x", atoms, { { 0, 1, BondOrder::kSingle },
                                      { 1, 0, BondOrder::kDouble } }),
               Error);
  atoms[0].position.x() = std::nan("");
  EXPECT_THROW(Molecule("x", atoms, {}), Error);
}

TEST(ValidateComplex, DistanceRule) {
  ProteinStructure p = parse_protein(two_atoms());
  Molecule near("near", { { Element::kC, Vec3(0, 2, 0), 0 } }, {});
  EXPECT_NO_THROW(validate_complex(p, near));
  Molecule far("far", { { Element::kC, Vec3(40, 0, 0), 0 } }, {});
  try {
    validate_complex(p, far);
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("ligand outside structure"), std::string::npos);
  }
}

TEST(ValidateComplex, HydrogenOnlyLigand) {
  ProteinStructure p = parse_protein(two_atoms());
  Molecule h2("h2", { { Element::kH, Vec3(0, 1, 0), 0 }, { Element::kH, Vec3(0, 1.7, 0), 0 } },
              {});
  try {
    validate_complex(p, h2);
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("no heavy atoms"), std::string::npos);
  }
}

TEST(Elements, SymbolMappingIsTotal) {
  bool known = true;
  EXPECT_EQ(element_from_symbol("cl"), Element::kCl);
  EXPECT_EQ(element_from_symbol("D"), Element::kH);
  EXPECT_EQ(element_from_symbol("FE"), Element::kMet);
  EXPECT_EQ(element_from_symbol("Qq", &known), Element::kUnk);
  EXPECT_FALSE(known);
  for (int i = 0; i <= static_cast<int>(Element::kUnk); ++i) {
    const auto e = static_cast<Element>(i);
    EXPECT_EQ(element_from_symbol(element_symbol(e)), e);
  }
}

}  // namespace
}  // namespace voxscreen
