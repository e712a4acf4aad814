//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "voxscreen/cli/commands.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <set>

#include "voxscreen/bench.h"
#include "voxscreen/error.h"
#include "voxscreen/eval.h"
#include "voxscreen/nn/checkpoint.h"
#include "voxscreen/nn/network.h"
#include "voxscreen/nn/train.h"
#include "voxscreen/pocket.h"
#include "voxscreen/structio.h"
#include "voxscreen/util.h"
#include "voxscreen/voxel.h"

namespace voxscreen::cli {

namespace fs = std::filesystem;

const std::vector<std::string> &known_keys() {
  static const std::vector<std::string> kKeys {
    "seed", "threads",
    "grid.box_edge", "grid.spacing",
    "prep.complexes", "prep.out", "prep.poses", "prep.margin",
    "prep.ligand_residue", "prep.keep_waters", "prep.keep_metals",
    "prep.max_cells", "prep.min_buried_rays", "prep.ray_length",
    "prep.clash_distance",
    "network.preset", "network.layers",
    "train.manifest", "train.checkpoint", "train.epochs", "train.batch_size",
    "train.shuffle", "train.rho", "train.epsilon",
    "score.checkpoint", "score.manifest", "score.out",
    "eval.scores", "eval.out", "eval.roc_dir", "eval.lambda",
    "bench.activities", "bench.ligands", "bench.decoy_pool", "bench.out",
    "bench.mode", "bench.active_um", "bench.inactive_um", "bench.min_actives",
    "bench.min_exemplars", "bench.max_exemplar_similarity",
    "bench.decoys_per_active", "bench.n_folds", "bench.min_clusters",
    "bench.mw_window", "bench.rot_window", "bench.hbd_window",
    "bench.hba_window", "bench.match_charge", "bench.max_tanimoto",
    "bench.fp_radius", "bench.fp_bits",
    "probe.checkpoint", "probe.grid", "probe.layer", "probe.filter",
    "probe.top_k", "probe.out",
  };
  return kKeys;
}

namespace {

void check_known(const Config &config, Reader &r) {
  const auto &known = known_keys();
  for (const auto &k: config.keys()) {
    if (std::find(known.begin(), known.end(), k) == known.end())
      r.problem(k + ": unknown key");
  }
}

std::size_t threads_of(Reader &r) { return r.count("threads", 1, 1); }

std::string safe_name(std::string_view id) {
  std::string out;
  for (char c: id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-'
                    || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

std::string format(const char *spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Label parse_label(std::string_view s, std::size_t line) {
  s = trim(s);
  if (s == "1")
    return Label::kActive;
  if (s == "0")
    return Label::kInactive;
  if (s == "NA" || s.empty())
    return Label::kUnlabeled;
  throw ParseError("label must be 1, 0 or NA", line);
}

struct ComplexRow {
  std::string id;
  fs::path protein;
  fs::path ligands;
  Label label = Label::kUnlabeled;
};

std::vector<ComplexRow> read_complex_list(const fs::path &file) {
  std::vector<ComplexRow> rows;
  const auto text = read_file(file);
  auto lines = split_lines(text);
  const fs::path base = file.parent_path();
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = trim(lines[ln]);
    if (line.empty() || line.starts_with('#'))
      continue;
    auto cols = split(line, '\t');
    if (rows.empty() && trim(cols[0]) == "complex_id")
      continue;
    if (cols.size() != 4)
      throw ParseError(file.string() + ": need complex_id, protein_pdb, ligand_sdf, label",
                       ln + 1);
    auto resolve = [&](std::string_view p) {
      fs::path path(trim(p));
      return path.is_absolute() ? path : base / path;
    };
    rows.push_back({ std::string(trim(cols[0])), resolve(cols[1]), resolve(cols[2]),
                     parse_label(cols[3], ln + 1) });
  }
  if (rows.empty())
    throw Error(ErrorKind::kValidation, file.string() + ": no complexes listed");
  return rows;
}

struct PreparedProtein {
  ProteinStructure protein;
  BindingSite site;
};

}  // namespace

void run_prep(const Config &config, std::ostream &log) {
  Reader r(config);
  check_known(config, r);
  const fs::path list = r.input("prep.complexes");
  const fs::path out = r.output("prep.out");
  const std::size_t n_poses = r.count("prep.poses", 4, 1);
  const double margin = r.number("prep.margin", 4.0, 0.0);
  GridSpec spec;
  spec.box_edge = r.number("grid.box_edge", 20.0, 1e-6);
  spec.spacing = r.number("grid.spacing", 1.0, 1e-6);
  PdbOptions pdb;
  pdb.ligand_residue = r.text("prep.ligand_residue", "LIG");
  pdb.keep_waters = r.flag("prep.keep_waters", false);
  pdb.keep_metals = r.flag("prep.keep_metals", true);
  FloodParams flood;
  flood.max_cells = r.count("prep.max_cells", flood.max_cells, 1);
  flood.min_buried_rays =
      static_cast<int>(r.count("prep.min_buried_rays", 4, 0));
  if (flood.min_buried_rays > 6)
    r.problem("prep.min_buried_rays: must be <= 6");
  flood.ray_length = r.number("prep.ray_length", flood.ray_length, 1e-6);
  PoseSamplerParams poses;
  poses.clash_distance = r.number("prep.clash_distance", poses.clash_distance, 0.0);
  poses.box_edge = spec.box_edge;
  const std::uint64_t seed = r.seed(false);
  const std::size_t threads = threads_of(r);
  r.finish();
  spec.validate();

  const auto rows = read_complex_list(list);

  std::map<fs::path, std::shared_ptr<const PreparedProtein>> proteins;
  struct Job {
    std::string id;
    std::shared_ptr<const PreparedProtein> protein;
    Molecule ligand;
    Label label;
  };
  std::vector<Job> jobs;
  std::set<std::string> seen;
  for (const ComplexRow &row: rows) {
    auto &prepared = proteins[row.protein];
    if (!prepared) {
      auto p = std::make_shared<PreparedProtein>();
      p->protein = parse_protein(read_file(row.protein), pdb);
      if (!p->protein.bound_ligand)
        throw Error(ErrorKind::kValidation, row.protein.string() + ": no "
                                                + pdb.ligand_residue
                                                + " residue to seed the site");
      const SiteGrid grid = build_site_grid(p->protein, margin);
      p->site = flood_site(grid, p->protein.bound_ligand->heavy_centroid(), flood);
      write_file(out / "sites" / (safe_name(row.protein.stem().string()) + ".site"),
                 write_site(p->site));
      log << "prep: " << row.protein.filename().string() << ": site of "
          << p->site.cells.size() << " cells\n";
      prepared = std::move(p);
    }
    auto mols = parse_ligands(read_file(row.ligands));
    if (mols.empty())
      throw Error(ErrorKind::kValidation, row.ligands.string() + ": no molecules");
    for (std::size_t m = 0; m < mols.size(); ++m) {
      std::string id = row.id;
      if (mols.size() > 1)
        id += ":" + (mols[m].name().empty() ? std::to_string(m) : mols[m].name());
      if (!seen.insert(id).second)
        throw Error(ErrorKind::kValidation, "duplicate complex id '" + id + "'");
      jobs.push_back({ id, prepared, std::move(mols[m]), row.label });
    }
  }

  std::vector<std::vector<ManifestEntry>> entries(jobs.size());
  std::vector<std::string> failures(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    const Job &job = jobs[j];
    try {
      ValidatedComplex vc = validate_complex(job.protein->protein, job.ligand);
      const CoComplex complex =
          recenter(std::move(vc.protein), std::move(vc.ligand), job.protein->site);
      const auto sampled = sample_poses(
          complex, n_poses, derive_seed(seed, "pose", fnv1a64(job.id)), poses);
      for (const Pose &pose: sampled) {
        VoxelGrid grid = rasterize(complex, pose, spec);
        grid.label = job.label;
        grid.complex_id = job.id;
        grid.pose_id = pose.pose_id;
        const std::string rel = "grids/" + safe_name(job.id) + "_p"
                                + std::to_string(pose.pose_id) + ".voxg";
        write_grid_file(out / rel, grid);
        entries[j].push_back({ rel, job.id, pose.pose_id, job.label });
      }
    } catch (const std::exception &e) {
      failures[j] = job.id + ": " + e.what();
    }
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!failures[j].empty())
      throw Error(ErrorKind::kValidation, "complex " + failures[j]);
  }

  std::vector<ManifestEntry> all;
  for (auto &e: entries)
    all.insert(all.end(), e.begin(), e.end());
  write_file(out / "manifest.tsv", write_manifest(all));
  log << "prep: " << jobs.size() << " complexes, " << all.size() << " grids\n";
}

namespace {

struct LoadedGrids {
  std::vector<ManifestEntry> entries;
  std::vector<std::vector<float>> values;
  std::uint32_t channels = 0;
  std::array<std::size_t, 3> dims {};
};

LoadedGrids load_grids(const fs::path &manifest) {
  LoadedGrids out;
  out.entries = read_manifest(read_file(manifest));
  if (out.entries.empty())
    throw Error(ErrorKind::kValidation, manifest.string() + ": empty manifest");
  for (const ManifestEntry &e: out.entries) {
    GridFile g = read_grid_file(manifest.parent_path() / e.path);
    if (out.values.empty()) {
      out.channels = g.channels;
      out.dims = { g.depth, g.height, g.width };
    } else if (g.channels != out.channels || g.depth != out.dims[0]
               || g.height != out.dims[1] || g.width != out.dims[2]) {
      throw Error(ErrorKind::kShape, e.path + ": grid shape differs from the first grid");
    }
    out.values.push_back(std::move(g.values));
  }
  return out;
}

nn::NetworkConfig network_for(Reader &r, std::size_t channels,
                              const std::array<std::size_t, 3> &dims) {
  if (auto layers = r.optional_text("network.layers")) {
    std::string text = *layers;
    if (text.find("input") == std::string::npos)
      text = "input " + std::to_string(channels) + ' ' + std::to_string(dims[0]) + ' '
             + std::to_string(dims[1]) + ' ' + std::to_string(dims[2]) + ";" + text;
    return nn::NetworkConfig::from_text(text);
  }
  if (dims[0] != dims[1] || dims[1] != dims[2])
    throw Error(ErrorKind::kShape, "network presets need cubic grids");
  return nn::preset(r.text("network.preset", "atomnet"), channels, dims[0]);
}

void check_input(const nn::NetworkConfig &cfg, std::size_t channels,
                 const std::array<std::size_t, 3> &dims) {
  if (cfg.in_channels != channels || cfg.in_dims != dims)
    throw Error(ErrorKind::kShape,
                "network input does not match grids (" + std::to_string(channels)
                    + " channels, " + std::to_string(dims[0]) + "x"
                    + std::to_string(dims[1]) + "x" + std::to_string(dims[2]) + ")");
}

}  // namespace

void run_train(const Config &config, std::ostream &log) {
  Reader r(config);
  check_known(config, r);
  const fs::path manifest = r.input("train.manifest");
  const fs::path ckpt = r.output("train.checkpoint");
  nn::TrainConfig tc;
  tc.epochs = r.count("train.epochs", 1);
  tc.batch_size = r.count("train.batch_size", tc.batch_size, 1);
  tc.shuffle = r.flag("train.shuffle", true);
  tc.seed = r.seed(true);
  tc.threads = threads_of(r);
  const double rho = r.number("train.rho", 0.95, 0.0, 1.0);
  const double eps = r.number("train.epsilon", 1e-6, 1e-300);
  if (r.optional_text("network.layers") && r.optional_text("network.preset"))
    r.problem("network: set either preset or layers, not both");
  r.finish();

  LoadedGrids grids = load_grids(manifest);
  nn::Dataset data;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < grids.entries.size(); ++i) {
    if (grids.entries[i].label == Label::kUnlabeled) {
      ++skipped;
      continue;
    }
    data.inputs.push_back(std::move(grids.values[i]));
    data.labels.push_back(grids.entries[i].label == Label::kActive ? 1 : 0);
  }
  if (skipped)
    log << "train: skipped " << skipped << " unlabeled grids\n";

  const nn::NetworkConfig cfg = network_for(r, grids.channels, grids.dims);
  check_input(cfg, grids.channels, grids.dims);
  nn::Network net(cfg);
  net.initialize(tc.seed);
  nn::AdaDeltaState state(net.parameter_count(), rho, eps);
  log << "train: " << data.size() << " examples, " << net.parameter_count()
      << " parameters\n";

  nn::TrainLog tl;
  if (tc.epochs > 0) {
    tl = nn::train(net, state, data, tc, 0, [&](std::size_t e, double loss) {
      log << "train: epoch " << e << " loss " << format("%.6f", loss) << '\n';
    });
  }
  nn::write_checkpoint(ckpt, net, state);
  write_file(fs::path(ckpt.string() + ".txt"),
             nn::write_train_manifest({ tc.seed, tc.epochs, tl.epoch_loss }));
}

void run_score(const Config &config, std::ostream &log) {
  Reader r(config);
  check_known(config, r);
  const fs::path ckpt = r.input("score.checkpoint");
  const fs::path manifest = r.input("score.manifest");
  const fs::path out = r.output("score.out");
  const std::size_t threads = threads_of(r);
  r.finish();

  const nn::Model model = nn::read_checkpoint(ckpt);
  LoadedGrids grids = load_grids(manifest);
  check_input(model.net.config(), grids.channels, grids.dims);

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> by_id;
  for (std::size_t i = 0; i < grids.entries.size(); ++i) {
    auto &v = by_id[grids.entries[i].complex_id];
    if (v.empty())
      order.push_back(grids.entries[i].complex_id);
    v.push_back(i);
  }

  std::vector<double> scores(order.size());
  parallel_for(order.size(), threads, [&](std::size_t c) {
    std::vector<std::vector<float>> poses;
    for (std::size_t i: by_id[order[c]])
      poses.push_back(grids.values[i]);
    scores[c] = nn::predict(model.net, poses);
  });

  std::string csv = "id,score,label\n";
  for (std::size_t c = 0; c < order.size(); ++c) {
    const auto &idx = by_id[order[c]];
    const Label label = grids.entries[idx.front()].label;
    for (std::size_t i: idx) {
      if (grids.entries[i].label != label)
        throw Error(ErrorKind::kValidation, order[c] + ": poses disagree on the label");
    }
    const char *l = label == Label::kActive ? "1" : label == Label::kInactive ? "0" : "NA";
    csv += order[c] + ',' + format("%.9g", scores[c]) + ',' + l + '\n';
  }
  write_file(out, csv);
  log << "score: " << order.size() << " complexes\n";
}

void run_eval(const Config &config, std::ostream &log) {
  Reader r(config);
  check_known(config, r);
  const auto files = r.inputs("eval.scores");
  const fs::path out = r.output("eval.out");
  std::optional<fs::path> roc_dir;
  if (config.has("eval.roc_dir"))
    roc_dir = config.resolve("eval.roc_dir");
  const double lambda = r.number("eval.lambda", kDefaultLogAucLambda, 1e-12, 1 - 1e-12);
  r.finish();

  std::vector<TargetMetrics> rows;
  std::set<std::string> targets;
  for (const fs::path &f: files) {
    const std::string target = f.stem().string();
    if (!targets.insert(target).second)
      throw Error(ErrorKind::kValidation, "two score files for target " + target);
    const RankedResults results = read_scores_csv(read_file(f));
    rows.push_back(evaluate(target, results, lambda));
    if (roc_dir)
      write_file(*roc_dir / (safe_name(target) + ".roc.tsv"),
                 write_roc_tsv(roc_curve(results)));
    log << "eval: " << target << " auc " << format("%.4f", rows.back().auc)
        << " adjusted_logauc " << format("%.4f", rows.back().adjusted_logauc) << '\n';
  }
  write_file(out, write_report_csv(rows));
}

namespace {
LigandLibrary load_library(const fs::path &sdf) {
  LigandLibrary lib;
  for (Molecule &m: parse_ligands(read_file(sdf))) {
    if (m.name().empty())
      throw Error(ErrorKind::kValidation, sdf.string() + ": molecule without a name");
    const std::string name = m.name();
    if (!lib.emplace(name, std::move(m)).second)
      throw Error(ErrorKind::kValidation, sdf.string() + ": duplicate molecule " + name);
  }
  return lib;
}
}  // namespace

void run_bench(const Config &config, std::ostream &log) {
  Reader r(config);
  check_known(config, r);
  const fs::path activities = r.input("bench.activities");
  const fs::path ligands = r.input("bench.ligands");
  const fs::path out = r.output("bench.out");
  BenchConfig bc;
  const std::string mode = r.text("bench.mode", "pmd");
  if (mode == "pmd")
    bc.mode = BenchMode::kPmd;
  else if (mode == "inactives")
    bc.mode = BenchMode::kInactives;
  else
    r.problem("bench.mode: must be pmd or inactives");
  fs::path pool;
  if (bc.mode == BenchMode::kPmd)
    pool = r.input("bench.decoy_pool");
  bc.cutoffs.active_um = r.number("bench.active_um", bc.cutoffs.active_um, 1e-300);
  bc.cutoffs.inactive_um = r.number("bench.inactive_um", bc.cutoffs.inactive_um, 1e-300);
  if (!(bc.cutoffs.active_um < bc.cutoffs.inactive_um))
    r.problem("bench.active_um: must be below bench.inactive_um");
  bc.cutoffs.min_actives = r.count("bench.min_actives", bc.cutoffs.min_actives);
  bc.clusters.min_exemplars = r.count("bench.min_exemplars", bc.clusters.min_exemplars);
  bc.clusters.max_exemplar_similarity = r.number(
      "bench.max_exemplar_similarity", bc.clusters.max_exemplar_similarity, 0.0, 1.0);
  bc.decoys_per_active = r.count("bench.decoys_per_active", bc.decoys_per_active, 1);
  bc.n_folds = r.count("bench.n_folds", 0);
  if (bc.n_folds == 1)
    r.problem("bench.n_folds: must be 0 (mode default) or >= 2");
  bc.min_clusters_for_validation =
      r.count("bench.min_clusters", bc.min_clusters_for_validation);
  bc.windows.mol_weight = r.number("bench.mw_window", bc.windows.mol_weight, 0.0);
  bc.windows.rot_bonds = static_cast<int>(r.count("bench.rot_window", 1));
  bc.windows.hbd = static_cast<int>(r.count("bench.hbd_window", 1));
  bc.windows.hba = static_cast<int>(r.count("bench.hba_window", 1));
  bc.windows.match_charge = r.flag("bench.match_charge", true);
  bc.windows.max_tanimoto = r.number("bench.max_tanimoto", bc.windows.max_tanimoto, 0.0, 1.0);
  bc.fingerprint.radius = static_cast<int>(r.count("bench.fp_radius", 2));
  bc.fingerprint.nbits = r.count("bench.fp_bits", 2048, 8);
  bc.seed = r.seed(true);
  r.finish();

  const auto records = read_activity_csv(read_file(activities));
  const LigandLibrary lib = load_library(ligands);
  const LigandLibrary decoys = bc.mode == BenchMode::kPmd ? load_library(pool) : LigandLibrary {};
  const BenchmarkSet set = build_benchmark(records, lib, decoys, bc);
  write_benchmark(set, lib, decoys, out);
  log << "bench: " << set.targets.size() << " targets written\n";
}

void run_probe(const Config &config, std::ostream &log) {
  Reader r(config);
  check_known(config, r);
  const fs::path ckpt = r.input("probe.checkpoint");
  const fs::path grid_path = r.input("probe.grid");
  const fs::path out = r.output("probe.out");
  const std::size_t layer = r.count("probe.layer", 0);
  const std::size_t filter = r.count("probe.filter", 0);
  const std::size_t top_k = r.count("probe.top_k", 10, 1);
  const double spacing = r.number("grid.spacing", 1.0, 1e-6);
  r.finish();

  const nn::Model model = nn::read_checkpoint(ckpt);
  const GridFile grid = read_grid_file(grid_path);
  check_input(model.net.config(), grid.channels, { grid.depth, grid.height, grid.width });
  const auto acts =
      nn::filter_activation_map(model.net, grid.values, layer, filter, top_k, spacing);

  std::string tsv = "rank\tactivation\tz\ty\tx\tpos_x\tpos_y\tpos_z\n";
  for (std::size_t i = 0; i < acts.size(); ++i) {
    const auto &a = acts[i];
    tsv += std::to_string(i + 1) + '\t' + format("%.9g", a.value) + '\t'
           + std::to_string(a.cell[0]) + '\t' + std::to_string(a.cell[1]) + '\t'
           + std::to_string(a.cell[2]) + '\t' + format("%.4f", a.position[0]) + '\t'
           + format("%.4f", a.position[1]) + '\t' + format("%.4f", a.position[2]) + '\n';
  }
  write_file(out, tsv);
  log << "probe: layer " << layer << " filter " << filter << ": " << acts.size()
      << " cells\n";
}

}  // namespace voxscreen::cli
