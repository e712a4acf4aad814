//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/synthetic.h"

#include <cmath>
#include <numbers>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen::synthetic {

namespace {
ProteinStructure from_atoms(std::vector<Atom> atoms) {
  ProteinStructure p;
  p.atoms = std::move(atoms);
  p.residue_tags.assign(p.atoms.size(), ResidueTag { 'A', "GLY", 1 });
  for (std::size_t i = 0; i < p.residue_tags.size(); ++i)
    p.residue_tags[i].residue_number = static_cast<int>(i / 8) + 1;
  return p;
}

Atom carbon(double x, double y, double z) {
  return { Element::kC, Vec3(x, y, z), 0 };
}
}  // namespace

ProteinStructure cavity_box(int interior_edge) {
  if (interior_edge < 1)
    throw Error(ErrorKind::kValidation, "interior edge must be >= 1");
  const int lo = -2, hi = interior_edge + 1;
  std::vector<Atom> atoms;
  for (int x = lo; x <= hi; ++x) {
    for (int y = lo; y <= hi; ++y) {
      for (int z = lo; z <= hi; ++z) {
        if (x == lo || x == hi || y == lo || y == hi || z == lo || z == hi)
          atoms.push_back(carbon(x, y, z));
      }
    }
  }
  return from_atoms(std::move(atoms));
}

ProteinStructure open_plate(int half_width) {
  std::vector<Atom> atoms;
  for (int x = -half_width; x <= half_width; ++x) {
    for (int y = -half_width; y <= half_width; ++y)
      atoms.push_back(carbon(x, y, 0));
  }
  return from_atoms(std::move(atoms));
}

ProteinStructure shell_protein(double radius, std::size_t n_atoms) {
  std::vector<Atom> atoms;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n_atoms; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / n_atoms;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * static_cast<double>(i);
    // Snap to 3 decimals so PDB round trips are exact.
    auto snap = [](double v) { return std::round(v * 1000.0) / 1000.0; };
    atoms.push_back(carbon(snap(radius * r * std::cos(phi)),
                           snap(radius * r * std::sin(phi)), snap(radius * z)));
  }
  ProteinStructure p = from_atoms(std::move(atoms));
  p.bound_ligand = Molecule("LIG", { carbon(0, 0, 0) }, {});
  return p;
}

Molecule toy_ligand(bool active, std::uint64_t seed, const std::string &name) {
  Rng rng(seed);
  static const Vec3 kDirs[4] = { Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1),
                                 Vec3(-1, -1, 1) };
  Element subs[4];
  if (active) {
    subs[0] = Element::kN;
    subs[1] = Element::kS;
    subs[2] = rng.below(2) ? Element::kN : Element::kC;
    subs[3] = rng.below(2) ? Element::kS : Element::kC;
  } else {
    subs[0] = Element::kO;
    subs[1] = Element::kC;
    subs[2] = rng.below(2) ? Element::kO : Element::kC;
    subs[3] = Element::kC;
  }
  // Shuffle which arm gets which element.
  for (int i = 3; i > 0; --i)
    std::swap(subs[i], subs[rng.below(static_cast<std::uint64_t>(i) + 1)]);

  std::vector<Atom> atoms { carbon(0, 0, 0) };
  std::vector<Bond> bonds;
  for (int i = 0; i < 4; ++i) {
    Vec3 p = kDirs[i].normalized() * 1.5;
    for (int a = 0; a < 3; ++a)
      p[a] = std::round((p[a] + 0.1 * (rng.uniform() - 0.5)) * 1e4) / 1e4;
    atoms.push_back({ subs[i], p, 0 });
    bonds.push_back({ 0, static_cast<std::size_t>(i + 1), BondOrder::kSingle });
  }
  return Molecule(name, std::move(atoms), std::move(bonds));
}

namespace {
bool has_block(const std::vector<float> &g, const MotifSpec &s) {
  const std::size_t n = s.edge, m = s.motif_edge;
  const float *c = g.data() + s.motif_channel * n * n * n;
  for (std::size_t z = 0; z + m <= n; ++z) {
    for (std::size_t y = 0; y + m <= n; ++y) {
      for (std::size_t x = 0; x + m <= n; ++x) {
        bool full = true;
        for (std::size_t i = 0; i < m && full; ++i)
          for (std::size_t j = 0; j < m && full; ++j)
            for (std::size_t l = 0; l < m && full; ++l)
              full = c[((z + i) * n + y + j) * n + x + l] != 0.0f;
        if (full)
          return true;
      }
    }
  }
  return false;
}
}  // namespace

nn::Dataset motif_dataset(std::size_t n, std::uint64_t seed, const MotifSpec &s) {
  if (s.motif_edge == 0 || s.motif_edge > s.edge || s.motif_channel >= s.channels)
    throw Error(ErrorKind::kValidation, "bad motif spec");
  Rng rng(seed);
  const std::size_t cells = s.edge * s.edge * s.edge;
  nn::Dataset data;
  for (std::size_t k = 0; k < n; ++k) {
    const int label = k % 2 == 0 ? 1 : 0;
    std::vector<float> g;
    do {
      g.assign(s.channels * cells, 0.0f);
      for (float &v: g)
        v = rng.uniform() < s.background ? 1.0f : 0.0f;
    } while (label == 0 && has_block(g, s));
    if (label == 1) {
      const std::size_t span = s.edge - s.motif_edge + 1;
      const std::size_t z0 = rng.below(span), y0 = rng.below(span),
                        x0 = rng.below(span);
      float *c = g.data() + s.motif_channel * cells;
      for (std::size_t i = 0; i < s.motif_edge; ++i)
        for (std::size_t j = 0; j < s.motif_edge; ++j)
          for (std::size_t l = 0; l < s.motif_edge; ++l)
            c[((z0 + i) * s.edge + y0 + j) * s.edge + x0 + l] = 1.0f;
    }
    data.inputs.push_back(std::move(g));
    data.labels.push_back(label);
  }
  return data;
}

nn::NetworkConfig motif_network(const MotifSpec &s) {
  nn::NetworkConfig cfg;
  cfg.in_channels = s.channels;
  cfg.in_dims = { s.edge, s.edge, s.edge };
  cfg.layers = { nn::LayerSpec::conv(8, s.motif_edge), nn::LayerSpec::relu(),
                 nn::LayerSpec::conv(8, 3, 2),          nn::LayerSpec::relu(),
                 nn::LayerSpec::flatten(),              nn::LayerSpec::fc(2),
                 nn::LayerSpec::logistic() };
  return cfg;
}

void write_pipeline_fixture(const std::filesystem::path &dir,
                            const PipelineFixture &f) {
  ProteinStructure protein = shell_protein();
  write_file(dir / "protein.pdb", write_pdb(protein));

  std::uint64_t stream = 0;
  auto ligands = [&](const std::string &prefix, bool active, std::size_t n) {
    std::string sdf;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string name = prefix + std::to_string(i);
      sdf += write_sdf(toy_ligand(active, derive_seed(f.seed, "ligand", stream++), name));
    }
    return sdf;
  };
  write_file(dir / "train_actives.sdf", ligands("ta", true, f.n_train_per_class));
  write_file(dir / "train_decoys.sdf", ligands("td", false, f.n_train_per_class));
  write_file(dir / "test_actives.sdf", ligands("xa", true, f.n_test_per_class));
  write_file(dir / "test_decoys.sdf", ligands("xd", false, f.n_test_per_class));

  const std::string header = "complex_id\tprotein_pdb\tligand_sdf\tlabel\n";
  write_file(dir / "train.tsv", header + "shell\tprotein.pdb\ttrain_actives.sdf\t1\n"
                                    + "shell\tprotein.pdb\ttrain_decoys.sdf\t0\n");
  write_file(dir / "test.tsv", header + "shell\tprotein.pdb\ttest_actives.sdf\t1\n"
                                   + "shell\tprotein.pdb\ttest_decoys.sdf\t0\n");
  write_file(dir / "run.cfg",
             "# Reduced grids and network so the toy pipeline trains in seconds.\n"
             "seed = " + std::to_string(f.seed) + "\n"
             "threads = 1\n"
             "\n[grid]\nbox_edge = 20\nspacing = 2.5\n"
             "\n[prep]\nposes = 4\nmargin = 4\n"
             "\n[network]\nlayers = conv 8 3; relu; conv 8 3; relu; flatten; fc 32; relu; fc 2; logistic\n"
             "\n[train]\nepochs = 12\nbatch_size = 32\n");
}

}  // namespace voxscreen::synthetic
