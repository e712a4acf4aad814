//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_BENCH_H_
#define VOXSCREEN_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voxscreen/chem.h"
#include "voxscreen/structio.h"

namespace voxscreen {

enum class AffinityType { kIC50, kKi };

struct ActivityRecord {
  std::string ligand_id;
  std::string target_id;
  double affinity_um = 0;  // micromolar, > 0
  AffinityType type = AffinityType::kIC50;
  std::string source;
};

// CSV with header ligand_id,target_id,affinity_um,type.
std::vector<ActivityRecord> read_activity_csv(std::string_view text);

struct ActivityCutoffs {
  double active_um = 1.0;     // active iff affinity < active_um
  double inactive_um = 30.0;  // inactive iff affinity > inactive_um
  std::size_t min_actives = 10;
};

struct TargetActivities {
  std::vector<std::string> actives;    // sorted, unique
  std::vector<std::string> inactives;  // sorted, unique
};

// Ligands measured on both sides of the cutoffs for one target are dropped
// from both lists. Targets with fewer than min_actives actives are removed.
std::map<std::string, TargetActivities>
filter_activities(std::span<const ActivityRecord> records,
                  const ActivityCutoffs &cutoffs = {});

struct FingerprintParams {
  int radius = 2;
  std::size_t nbits = 2048;
};

// A ligand with everything benchmark construction needs precomputed.
struct LigandEntry {
  std::string id;
  Molecule mol;
  Fingerprint fp;
  DescriptorVector desc;
  std::string scaffold_key;
};

LigandEntry make_entry(std::string id, Molecule mol,
                       const FingerprintParams &fp = {});

struct ClusterParams {
  double max_exemplar_similarity = 0.6;
  std::size_t min_exemplars = 10;
};

struct Cluster {
  std::string key;                      // scaffold canonical key
  std::vector<std::string> members;     // all ligands with this scaffold
  std::vector<std::string> exemplars;   // in admission order
};

// Group by scaffold, then admit exemplars greedily (heavy atoms
// descending, then id) while Tanimoto to every admitted exemplar stays
// <= max_exemplar_similarity. Clusters short of min_exemplars are dropped.
std::vector<Cluster> cluster_actives(std::span<const LigandEntry> actives,
                                     const ClusterParams &params = {});

struct DecoyWindows {
  double mol_weight = 25.0;
  int rot_bonds = 1;
  int hbd = 1;
  int hba = 1;
  bool match_charge = true;
  double max_tanimoto = 0.35;
};

bool within_windows(const LigandEntry &active, const LigandEntry &candidate,
                    const DecoyWindows &windows);

struct DecoySelection {
  std::vector<std::string> decoys;
  bool exhausted = false;  // fewer than k qualified
};

// The k qualifying candidates with the smallest |dMW|, ties by id.
// Candidates whose id is in `excluded` are never chosen.
DecoySelection select_decoys(const LigandEntry &active,
                             std::span<const LigandEntry> pool, std::size_t k,
                             const DecoyWindows &windows = {},
                             const std::set<std::string> &excluded = {});

inline constexpr int kTrainOnlyFold = -1;

struct FoldAssignment {
  std::map<std::string, int> fold_of;  // cluster key -> fold
  std::size_t n_folds = 0;
  // Too few clusters for validation: every cluster sits in every training
  // split and fold_of holds kTrainOnlyFold.
  bool train_only = false;
};

FoldAssignment partition_folds(std::span<const std::string> cluster_keys,
                               std::size_t n_folds, std::uint64_t seed,
                               std::size_t min_clusters_for_validation = 10);

enum class BenchMode { kPmd, kInactives };

struct BenchConfig {
  BenchMode mode = BenchMode::kPmd;
  ActivityCutoffs cutoffs;
  ClusterParams clusters;
  DecoyWindows windows;
  FingerprintParams fingerprint;
  std::size_t decoys_per_active = 30;
  std::size_t n_folds = 0;  // 0: 5 for PMD, 3 for inactives
  std::size_t min_clusters_for_validation = 10;
  std::uint64_t seed = 0;
  LigandFilter filter = accept_all();
};

struct BenchLigand {
  std::string id;
  std::string cluster_key;
  std::string paired_active;  // PMD decoys only
};

struct TargetBenchmark {
  std::string target_id;
  std::vector<BenchLigand> actives;
  std::vector<BenchLigand> decoys;  // PMD decoys or measured inactives
  std::vector<Cluster> clusters;
  FoldAssignment folds;
  std::size_t decoy_shortfalls = 0;  // actives that got < k decoys
};

struct BenchmarkSet {
  BenchMode mode = BenchMode::kPmd;
  std::vector<TargetBenchmark> targets;
};

using LigandLibrary = std::map<std::string, Molecule>;

// Library is keyed by ligand id (SDF record name); missing ids are skipped.
BenchmarkSet build_benchmark(std::span<const ActivityRecord> records,
                             const LigandLibrary &library,
                             const LigandLibrary &decoy_pool,
                             const BenchConfig &config);

// One directory per target with actives.sdf, decoys.sdf and folds.tsv,
// plus a top-level targets.tsv summary.
void write_benchmark(const BenchmarkSet &set, const LigandLibrary &library,
                     const LigandLibrary &decoy_pool,
                     const std::filesystem::path &out_dir);

}  // namespace voxscreen

#endif  // VOXSCREEN_BENCH_H_
