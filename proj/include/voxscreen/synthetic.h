//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_SYNTHETIC_H_
#define VOXSCREEN_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "voxscreen/nn/train.h"
#include "voxscreen/structio.h"

// Generators for the bundled test data: toy proteins, toy ligands and the
// planted-motif grid task.
namespace voxscreen::synthetic {

// Carbon walls at every integer point of the faces of [-2, edge+1]^3, which
// leaves cells 0..edge-1 on each axis empty and every cell at -1 or edge
// occupied.
ProteinStructure cavity_box(int interior_edge = 5);

// A single square carbon plate in the z = 0 plane; nothing encloses the
// space above it.
ProteinStructure open_plate(int half_width = 6);

// Carbon atoms on a Fibonacci sphere around the origin, plus a one-atom LIG
// group at the center to seed the site.
ProteinStructure shell_protein(double radius = 7.0, std::size_t n_atoms = 320);

// Tetrahedral five-atom ligand centered at the origin. Actives carry at
// least one N and one S substituent; decoys only C and O.
Molecule toy_ligand(bool active, std::uint64_t seed, const std::string &name);

struct MotifSpec {
  std::size_t edge = 8;
  std::size_t channels = 4;
  double background = 0.01;
  std::size_t motif_channel = 0;
  std::size_t motif_edge = 2;
};

// Labels alternate 1, 0, 1, ... Positives get a solid motif_edge^3 block of
// ones in motif_channel at a random position; negatives are redrawn until
// they contain no such block.
nn::Dataset motif_dataset(std::size_t n, std::uint64_t seed,
                          const MotifSpec &spec = {});

// Reduced network for the motif task: conv(8, motif_edge) relu
// conv(8, 3, stride 2) relu flatten fc(2) logistic.
nn::NetworkConfig motif_network(const MotifSpec &spec = {});

struct PipelineFixture {
  std::size_t n_train_per_class = 24;
  std::size_t n_test_per_class = 12;
  std::uint64_t seed = 7;
};

// protein.pdb, {train,test}_{actives,decoys}.sdf, train.tsv, test.tsv and a
// run.cfg for the command-line pipeline.
void write_pipeline_fixture(const std::filesystem::path &dir,
                            const PipelineFixture &fixture = {});

}  // namespace voxscreen::synthetic

#endif  // VOXSCREEN_SYNTHETIC_H_
