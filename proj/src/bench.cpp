//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/bench.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iostream>
#include <tuple>

#include "voxscreen/error.h"
#include "voxscreen/util.h"

namespace voxscreen {

std::vector<ActivityRecord> read_activity_csv(std::string_view text) {
  std::vector<ActivityRecord> out;
  auto lines = split_lines(text);
  bool header_seen = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = trim(lines[ln]);
    if (line.empty() || line.starts_with('#'))
      continue;
    auto cols = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      if (trim(cols[0]) == "ligand_id")
        continue;
    }
    if (cols.size() < 4)
      throw ParseError("activity row needs ligand_id,target_id,affinity_um,type",
                       ln + 1);
    ActivityRecord r;
    r.ligand_id = std::string(trim(cols[0]));
    r.target_id = std::string(trim(cols[1]));
    if (!parse_double(cols[2], r.affinity_um) || !(r.affinity_um > 0))
      throw ParseError("affinity must be a positive number", ln + 1);
    std::string type(trim(cols[3]));
    for (auto &c: type)
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (type == "IC50")
      r.type = AffinityType::kIC50;
    else if (type == "KI")
      r.type = AffinityType::kKi;
    else
      throw ParseError("affinity type must be IC50 or Ki", ln + 1);
    if (cols.size() > 4)
      r.source = std::string(trim(cols[4]));
    if (r.ligand_id.empty() || r.target_id.empty())
      throw ParseError("empty ligand or target id", ln + 1);
    out.push_back(std::move(r));
  }
  return out;
}

std::map<std::string, TargetActivities>
filter_activities(std::span<const ActivityRecord> records,
                  const ActivityCutoffs &cutoffs) {
  if (!(cutoffs.active_um > 0) || !(cutoffs.active_um < cutoffs.inactive_um))
    throw Error(ErrorKind::kValidation,
                "cutoffs must satisfy 0 < active < inactive");

  std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>>
      by_target;
  for (const ActivityRecord &r: records) {
    if (!(r.affinity_um > 0))
      throw Error(ErrorKind::kValidation,
                  "non-positive affinity for " + r.ligand_id);
    auto &[act, inact] = by_target[r.target_id];
    if (r.affinity_um < cutoffs.active_um)
      act.insert(r.ligand_id);
    else if (r.affinity_um > cutoffs.inactive_um)
      inact.insert(r.ligand_id);
  }

  std::map<std::string, TargetActivities> out;
  for (auto &[target, sets]: by_target) {
    auto &[act, inact] = sets;
    TargetActivities t;
    for (const auto &id: act) {
      if (!inact.count(id))
        t.actives.push_back(id);
    }
    for (const auto &id: inact) {
      if (!act.count(id))
        t.inactives.push_back(id);
    }
    if (t.actives.size() >= cutoffs.min_actives)
      out.emplace(target, std::move(t));
  }
  return out;
}

LigandEntry make_entry(std::string id, Molecule mol,
                       const FingerprintParams &fp) {
  LigandEntry e;
  e.id = std::move(id);
  e.fp = ecfp_fingerprint(mol, fp.radius, fp.nbits);
  e.desc = descriptors(mol);
  e.scaffold_key = murcko_scaffold(mol).canonical_key;
  e.mol = std::move(mol);
  return e;
}

std::vector<Cluster> cluster_actives(std::span<const LigandEntry> actives,
                                     const ClusterParams &params) {
  std::map<std::string, std::vector<const LigandEntry *>> groups;
  for (const LigandEntry &e: actives)
    groups[e.scaffold_key].push_back(&e);

  std::vector<Cluster> out;
  for (auto &[key, members]: groups) {
    std::sort(members.begin(), members.end(),
              [](const LigandEntry *a, const LigandEntry *b) {
                if (a->desc.heavy_atoms != b->desc.heavy_atoms)
                  return a->desc.heavy_atoms > b->desc.heavy_atoms;
                return a->id < b->id;
              });

    Cluster c;
    c.key = key;
    std::vector<const LigandEntry *> admitted;
    for (const LigandEntry *m: members) {
      c.members.push_back(m->id);
      const bool diverse =
          std::all_of(admitted.begin(), admitted.end(), [&](const auto *x) {
            return tanimoto(m->fp, x->fp) <= params.max_exemplar_similarity;
          });
      if (diverse) {
        admitted.push_back(m);
        c.exemplars.push_back(m->id);
      }
    }
    std::sort(c.members.begin(), c.members.end());
    if (c.exemplars.size() >= params.min_exemplars)
      out.push_back(std::move(c));
  }
  return out;
}

bool within_windows(const LigandEntry &active, const LigandEntry &candidate,
                    const DecoyWindows &w) {
  const DescriptorVector &a = active.desc, &c = candidate.desc;
  return std::abs(a.mol_weight - c.mol_weight) <= w.mol_weight
         && std::abs(a.rot_bonds - c.rot_bonds) <= w.rot_bonds
         && std::abs(a.hbd - c.hbd) <= w.hbd && std::abs(a.hba - c.hba) <= w.hba
         && (!w.match_charge || a.net_charge == c.net_charge)
         && tanimoto(active.fp, candidate.fp) <= w.max_tanimoto;
}

DecoySelection select_decoys(const LigandEntry &active,
                             std::span<const LigandEntry> pool, std::size_t k,
                             const DecoyWindows &windows,
                             const std::set<std::string> &excluded) {
  if (pool.empty())
    throw Error(ErrorKind::kValidation, "empty decoy pool");

  std::vector<std::pair<double, const LigandEntry *>> qualified;
  for (const LigandEntry &c: pool) {
    if (c.id == active.id || excluded.count(c.id))
      continue;
    if (within_windows(active, c, windows))
      qualified.emplace_back(std::abs(active.desc.mol_weight - c.desc.mol_weight),
                             &c);
  }
  std::sort(qualified.begin(), qualified.end(), [](const auto &x, const auto &y) {
    if (x.first != y.first)
      return x.first < y.first;
    return x.second->id < y.second->id;
  });

  DecoySelection sel;
  for (std::size_t i = 0; i < qualified.size() && sel.decoys.size() < k; ++i)
    sel.decoys.push_back(qualified[i].second->id);
  sel.exhausted = sel.decoys.size() < k;
  return sel;
}

FoldAssignment partition_folds(std::span<const std::string> cluster_keys,
                               std::size_t n_folds, std::uint64_t seed,
                               std::size_t min_clusters_for_validation) {
  if (n_folds < 2)
    throw Error(ErrorKind::kValidation, "n_folds must be >= 2");

  std::vector<std::string> keys(cluster_keys.begin(), cluster_keys.end());
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  FoldAssignment out;
  out.n_folds = n_folds;
  out.train_only = keys.size() < min_clusters_for_validation;
  if (out.train_only) {
    for (const auto &k: keys)
      out.fold_of[k] = kTrainOnlyFold;
    return out;
  }

  Rng rng(seed);
  rng.shuffle(keys);
  for (std::size_t i = 0; i < keys.size(); ++i)
    out.fold_of[keys[i]] = static_cast<int>(i % n_folds);
  return out;
}

namespace {
std::vector<LigandEntry> entries_for(const std::vector<std::string> &ids,
                                     const LigandLibrary &library,
                                     const BenchConfig &config,
                                     std::size_t &missing) {
  std::vector<LigandEntry> out;
  for (const auto &id: ids) {
    auto it = library.find(id);
    if (it == library.end() || it->second.heavy_atom_count() == 0) {
      ++missing;
      continue;
    }
    if (!config.filter(it->second))
      continue;
    out.push_back(make_entry(id, it->second, config.fingerprint));
  }
  return out;
}
}  // namespace

BenchmarkSet build_benchmark(std::span<const ActivityRecord> records,
                             const LigandLibrary &library,
                             const LigandLibrary &decoy_pool,
                             const BenchConfig &config) {
  BenchmarkSet set;
  set.mode = config.mode;
  const std::size_t n_folds =
      config.n_folds != 0 ? config.n_folds
                          : (config.mode == BenchMode::kPmd ? 5 : 3);

  std::vector<LigandEntry> pool;
  if (config.mode == BenchMode::kPmd) {
    for (const auto &[id, mol]: decoy_pool) {
      if (mol.heavy_atom_count() > 0 && config.filter(mol))
        pool.push_back(make_entry(id, mol, config.fingerprint));
    }
  }

  std::size_t missing = 0;
  for (const auto &[target, acts]: filter_activities(records, config.cutoffs)) {
    auto actives = entries_for(acts.actives, library, config, missing);
    TargetBenchmark tb;
    tb.target_id = target;
    tb.clusters = cluster_actives(actives, config.clusters);
    if (tb.clusters.empty())
      continue;

    std::map<std::string, const LigandEntry *> by_id;
    for (const auto &e: actives)
      by_id[e.id] = &e;

    std::set<std::string> used(acts.actives.begin(), acts.actives.end());
    std::vector<std::string> fold_keys;
    for (const Cluster &c: tb.clusters) {
      fold_keys.push_back(c.key);
      for (const auto &id: c.exemplars)
        tb.actives.push_back({ id, c.key, {} });
    }

    if (config.mode == BenchMode::kPmd) {
      if (pool.empty())
        throw Error(ErrorKind::kValidation, "empty decoy pool");
      for (const BenchLigand &a: tb.actives) {
        auto sel = select_decoys(*by_id.at(a.id), pool,
                                 config.decoys_per_active, config.windows, used);
        if (sel.exhausted)
          ++tb.decoy_shortfalls;
        for (auto &d: sel.decoys) {
          used.insert(d);
          tb.decoys.push_back({ std::move(d), a.cluster_key, a.id });
        }
      }
    } else {
      auto inactives = entries_for(acts.inactives, library, config, missing);
      for (const LigandEntry &e: inactives) {
        tb.decoys.push_back({ e.id, e.scaffold_key, {} });
        fold_keys.push_back(e.scaffold_key);
      }
    }

    // Train-only status is decided by active clusters alone.
    tb.folds = partition_folds(fold_keys, n_folds,
                               derive_seed(config.seed, "folds", fnv1a64(target)),
                               0);
    if (tb.clusters.size() < config.min_clusters_for_validation) {
      tb.folds.train_only = true;
      for (auto &[k, f]: tb.folds.fold_of)
        f = kTrainOnlyFold;
    }
    if (tb.decoy_shortfalls > 0)
      std::cerr << "warning: target " << target << ": " << tb.decoy_shortfalls
                << " actives received fewer than " << config.decoys_per_active
                << " decoys\n";
    set.targets.push_back(std::move(tb));
  }
  if (missing > 0)
    std::cerr << "warning: " << missing
              << " ligand ids had no usable structure in the library\n";
  return set;
}

namespace {
std::string dir_name(std::string_view target) {
  std::string out;
  for (char c: target)
    out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'
               ? c
               : '_';
  return out.empty() ? std::string("_") : out;
}
}  // namespace

void write_benchmark(const BenchmarkSet &set, const LigandLibrary &library,
                     const LigandLibrary &decoy_pool,
                     const std::filesystem::path &out_dir) {
  std::string summary = "target\tn_actives\tn_decoys\tn_clusters\ttrain_only\n";
  const LigandLibrary &decoy_source =
      set.mode == BenchMode::kPmd ? decoy_pool : library;

  for (const TargetBenchmark &tb: set.targets) {
    const auto dir = out_dir / dir_name(tb.target_id);
    auto fold_text = [&](const std::string &key) {
      return std::to_string(tb.folds.fold_of.at(key));
    };

    std::string actives;
    for (const BenchLigand &a: tb.actives) {
      actives += write_sdf(library.at(a.id).renamed(a.id),
                           { { "cluster_key", a.cluster_key },
                             { "fold", fold_text(a.cluster_key) } });
    }
    std::string decoys;
    for (const BenchLigand &d: tb.decoys) {
      SdfProperties props { { "cluster_key", d.cluster_key },
                            { "fold", fold_text(d.cluster_key) } };
      if (!d.paired_active.empty())
        props.emplace_back("active_id", d.paired_active);
      decoys += write_sdf(decoy_source.at(d.id).renamed(d.id), props);
    }
    std::string folds = "cluster_key\tfold\n";
    for (const auto &[key, fold]: tb.folds.fold_of)
      folds += key + '\t' + std::to_string(fold) + '\n';

    write_file(dir / "actives.sdf", actives);
    write_file(dir / "decoys.sdf", decoys);
    write_file(dir / "folds.tsv", folds);
    summary += tb.target_id + '\t' + std::to_string(tb.actives.size()) + '\t'
               + std::to_string(tb.decoys.size()) + '\t'
               + std::to_string(tb.clusters.size()) + '\t'
               + (tb.folds.train_only ? "1" : "0") + '\n';
  }
  write_file(out_dir / "targets.tsv", summary);
}

}  // namespace voxscreen
