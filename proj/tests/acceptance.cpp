//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "bench_support.h"
#include "nn_support.h"
#include "pocket_support.h"
#include "test_support.h"
#include "voxscreen/bench.h"
#include "voxscreen/cli/commands.h"
#include "voxscreen/error.h"
#include "voxscreen/eval.h"
#include "voxscreen/nn/checkpoint.h"
#include "voxscreen/nn/network.h"
#include "voxscreen/nn/train.h"
#include "voxscreen/pocket.h"
#include "voxscreen/synthetic.h"
#include "voxscreen/util.h"
#include "voxscreen/voxel.h"

namespace fs = std::filesystem;
using namespace voxscreen;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

Outcome gradients() {
  Rng rng(101);
  double conv = 0;
  const int n_conv = 24;
  for (int i = 0; i < n_conv; ++i)
    conv = std::max(conv, testing::conv_gradient_error(rng, testing::random_conv_case(rng)));
  const double fc = testing::fc_gradient_error(rng, 3, 8, 5);
  const double relu = testing::relu_gradient_error(rng, 500);
  const double logistic = testing::logistic_gradient_error(rng, 16);
  const double worst = std::max({ conv, fc, relu, logistic });
  return { worst < 1e-4, std::to_string(n_conv) + " conv configs max rel err " + fmt("%.2e", conv)
                             + ", fc " + fmt("%.2e", fc) + ", relu " + fmt("%.2e", relu)
                             + ", logistic " + fmt("%.2e", logistic) };
}

Outcome conv_oracle() {
  Rng rng(102);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const auto c = testing::random_conv_case(rng);
    const nn::Tensor x = testing::random_tensor(
        rng, { c.batch, c.geometry.in_channels, c.edge, c.edge, c.edge });
    const auto w = testing::random_values(rng, c.geometry.weight_count());
    const auto b = testing::random_values(rng, c.geometry.n_filters);
    const nn::Tensor y = nn::conv3d_forward(x, c.geometry, w, b);
    const nn::Tensor ref = testing::naive_conv(x, c.geometry, w, b);
    if (y.dims() != ref.dims())
      return { false, "shape mismatch on config " + std::to_string(t) };
    for (std::size_t i = 0; i < y.size(); ++i)
      worst = std::max(worst, testing::relative_error(y[i], ref[i]));
  }
  return { worst <= 1e-6, "100 configs, max rel err " + fmt("%.2e", worst) };
}

Outcome auc_mann_whitney() {
  Rng rng(103);
  int mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t total = 2 + rng.below(199);
    const std::size_t n_act = 1 + rng.below(total - 1);
    const std::uint64_t levels = t % 2 ? 0 : 2 + rng.below(15);
    RankedResults r;
    for (std::size_t i = 0; i < total; ++i)
      r.push_back({ std::to_string(i),
                    levels ? static_cast<double>(rng.below(levels)) : rng.uniform(), i < n_act });
    std::uint64_t twice = 0;
    for (const auto &a: r)
      for (const auto &d: r)
        if (a.active && !d.active)
          twice += a.score > d.score ? 2 : a.score == d.score ? 1 : 0;
    const double oracle =
        static_cast<double>(twice) / (2.0 * static_cast<double>(n_act) * static_cast<double>(total - n_act));
    mismatches += auc(roc_curve(r)) != oracle;
  }
  return { mismatches == 0, "1000 instances, " + std::to_string(mismatches) + " inexact" };
}

Outcome logauc_calibration() {
  RankedResults tied;
  for (int i = 0; i < 40; ++i)
    tied.push_back({ std::to_string(i), 0.5, i < 10 });
  const double diag = adjusted_log_auc(tied);
  double sum = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(derive_seed(seed, "acceptance-logauc"));
    RankedResults r;
    for (int i = 0; i < 10500; ++i)
      r.push_back({ std::to_string(i), rng.uniform(), i < 500 });
    sum += adjusted_log_auc(r);
  }
  const double mean = sum / 20;
  RankedResults perfect { { "a", 1, true }, { "d", 0, false } };
  const RocCurve c = roc_curve(perfect);
  const double w1 = log10_weighted_area(c, 0.001, 0.01), w2 = log10_weighted_area(c, 0.01, 0.1);
  const bool ok = std::abs(diag) <= 1e-9 && std::abs(mean) <= 0.02 && std::abs(w1 - w2) <= 1e-9;
  return { ok, "diagonal " + fmt("%.1e", diag) + ", random mean " + fmt("%+.4f", mean)
                   + ", decade weights " + fmt("%.12f", w1) + " vs " + fmt("%.12f", w2)
                   + ", random constant " + fmt("%.5f", random_log_auc(0.001)) };
}

Outcome atomnet() {
  const nn::NetworkConfig cfg = nn::atomnet_preset();
  const auto shapes = cfg.validate();
  std::vector<std::size_t> chain { cfg.in_dims[0] };
  for (std::size_t i = 0; i < cfg.layers.size(); ++i)
    if (cfg.layers[i].kind == nn::LayerKind::kConv)
      chain.push_back(shapes[i].d);
  // Closed form from the layer list alone.
  std::size_t closed = 0, fan_in = 0, c = cfg.in_channels, e = cfg.in_dims[0];
  bool flat = false;
  for (const auto &l: cfg.layers) {
    if (l.kind == nn::LayerKind::kConv) {
      fan_in = c * l.filter_edge * l.filter_edge * l.filter_edge;
      closed += fan_in * l.units + l.units;
      c = l.units;
      e = e - l.filter_edge + 1;
    } else if (l.kind == nn::LayerKind::kFlatten) {
      c = c * e * e * e;
      flat = true;
    } else if (l.kind == nn::LayerKind::kFc) {
      closed += c * l.units + l.units;
      c = l.units;
    }
  }
  std::string chain_text;
  for (auto v: chain)
    chain_text += (chain_text.empty() ? "" : "->") + std::to_string(v);
  const bool ok = flat && chain == std::vector<std::size_t> { 20, 16, 14, 12, 10 }
                  && cfg.parameter_count() == closed;
  return { ok, "chain " + chain_text + ", " + std::to_string(cfg.parameter_count())
                   + " parameters (closed form " + std::to_string(closed) + ")" };
}

Outcome motif_learning() {
  const auto start = std::chrono::steady_clock::now();
  const nn::Dataset train = synthetic::motif_dataset(512, 2024);
  const nn::Dataset test = synthetic::motif_dataset(128, 2025);
  nn::Network net(synthetic::motif_network());
  net.initialize(2026);
  nn::AdaDeltaState state(net.parameter_count(), 0.95, 1e-6);
  nn::TrainConfig cfg;
  cfg.batch_size = 64;
  cfg.epochs = 1;
  cfg.seed = 2026;
  std::vector<double> losses;
  double best = 0;
  std::size_t reached = 0;
  for (std::size_t e = 0; e < 30; ++e) {
    losses.push_back(nn::train(net, state, train, cfg, e).epoch_loss.at(0));
    RankedResults r;
    for (std::size_t i = 0; i < test.size(); ++i)
      r.push_back({ std::to_string(i),
                    nn::predict(net, std::span<const std::vector<float>>(&test.inputs[i], 1)),
                    test.labels[i] == 1 });
    best = auc(roc_curve(r));
    if (best >= 0.95 && losses.size() >= 5) {
      reached = e + 1;
      break;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool decreasing = losses.size() >= 5;
  for (std::size_t i = 1; i < 5 && i < losses.size(); ++i)
    decreasing &= losses[i] < losses[i - 1];
  std::string first;
  for (std::size_t i = 0; i < 5 && i < losses.size(); ++i)
    first += (i ? " " : "") + fmt("%.4f", losses[i]);
  return { reached > 0 && decreasing && secs < 300,
           "test AUC " + fmt("%.4f", best) + " at epoch " + std::to_string(reached) + ", "
               + fmt("%.1f", secs) + " s, first losses " + first };
}

Outcome cavity() {
  const ProteinStructure box = synthetic::cavity_box(5);
  const SiteGrid g = build_site_grid(box, 3.0);
  const BindingSite site = flood_site(g, Vec3(2, 2, 2));
  const auto oracle = testing::reference_flood(g, g.nearest_cell(Vec3(2, 2, 2)), 4, 12);
  const std::set<GridIndex> cells(site.cells.begin(), site.cells.end());
  std::string escaped = "no error";
  try {
    const ProteinStructure plate = synthetic::open_plate();
    flood_site(build_site_grid(plate, 3.0), Vec3(0, 0, 2));
  } catch (const Error &e) {
    escaped = e.what();
  }
  const bool ok = site.cells.size() == 125 && cells == oracle
                  && escaped.find("site escaped") != std::string::npos;
  return { ok, std::to_string(site.cells.size()) + " cells (oracle "
                   + std::to_string(oracle.size()) + "), open fixture: " + escaped };
}

CoComplex random_complex(Rng &rng) {
  const Element pool[] = { Element::kC, Element::kN, Element::kO,  Element::kS,
                           Element::kP, Element::kF, Element::kMet, Element::kH };
  CoComplex c;
  const std::size_t n = 20 + rng.below(200);
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 p;
    for (int k = 0; k < 3; ++k)
      p[k] = rng.uniform() * 30 - 15;
    c.protein.atoms.push_back({ pool[rng.below(8)], p, 0 });
    c.protein.residue_tags.push_back({ 'A', "ALA", 1 });
  }
  std::vector<Atom> lig;
  for (std::size_t i = 0; i < 1 + rng.below(12); ++i) {
    Vec3 p;
    for (int k = 0; k < 3; ++k)
      p[k] = rng.uniform() * 8 - 4;
    lig.push_back({ pool[rng.below(8)], p, 0 });
  }
  lig[0].element = Element::kC;
  c.ligand = Molecule("lig", lig, {});
  c.site.cells = { GridIndex { 0, 0, 0 } };
  c.site.dims = { 1, 1, 1 };
  return c;
}

Outcome voxel_conservation() {
  Rng rng(108);
  const GridSpec spec;
  std::size_t bad_mass = 0, bad_rot = 0;
  // 90 degree turns about x, y and z as integer matrices.
  std::vector<Mat3> turns(3, Mat3::Zero());
  turns[0] << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  turns[1] << 0, 0, 1, 0, 1, 0, -1, 0, 0;
  turns[2] << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  for (int t = 0; t < 1000; ++t) {
    const CoComplex c = random_complex(rng);
    const VoxelGrid g = rasterize(c, Pose::identity(), spec);
    std::size_t expected = c.ligand.heavy_atom_count();
    for (const Atom &a: c.protein.atoms)
      expected += a.is_heavy() && (a.position.array() >= -10).all() && (a.position.array() < 10).all();
    const double total = std::accumulate(g.values.begin(), g.values.end(), 0.0);
    bad_mass += total != static_cast<double>(expected);

    const Mat3 &r = turns[t % 3];
    CoComplex turned = c;
    for (Atom &a: turned.protein.atoms)
      a.position = r * a.position;
    std::vector<Atom> lig = c.ligand.atoms();
    for (Atom &a: lig)
      a.position = r * a.position;
    turned.ligand = Molecule("lig", lig, {});
    const VoxelGrid h = rasterize(turned, Pose::identity(), spec);
    bool same = true;
    for (std::size_t ch = 0; ch < 16 && same; ++ch)
      for (std::size_t z = 0; z < 20; ++z)
        for (std::size_t y = 0; y < 20; ++y)
          for (std::size_t x = 0; x < 20; ++x) {
            const Vec3 center(x + 0.5 - 10, y + 0.5 - 10, z + 0.5 - 10);
            const Vec3 m = r * center;
            const auto cell = [](double v) { return static_cast<std::size_t>(std::floor(v + 10)); };
            same &= g.at(ch, z, y, x) == h.at(ch, cell(m.z()), cell(m.y()), cell(m.x()));
          }
    bad_rot += !same;
  }
  return { bad_mass == 0 && bad_rot == 0,
           "1000 complexes: " + std::to_string(bad_mass) + " occupancy mismatches, "
               + std::to_string(bad_rot) + " rotation mismatches" };
}

Outcome benchmark_invariants() {
  const auto sc = testing::make_bench_scenario(109, 30, 12000);
  BenchConfig cfg;
  cfg.seed = 109;
  std::ostringstream sink;
  auto *old = std::cerr.rdbuf(sink.rdbuf());
  const BenchmarkSet set = build_benchmark(sc.records, sc.library, sc.pool, cfg);
  std::cerr.rdbuf(old);
  std::size_t decoys = 0, violations = 0, straddles = 0, overlap = 0;
  bool narrow_ok = false, wide_ok = false;
  for (const TargetBenchmark &tb: set.targets) {
    std::set<std::string> actives;
    std::map<std::string, int> fold_of;
    auto fold = [&](const BenchLigand &l) {
      const int f = tb.folds.fold_of.at(l.cluster_key);
      auto [it, fresh] = fold_of.emplace(l.cluster_key, f);
      straddles += it->second != f;
    };
    for (const auto &a: tb.actives) {
      actives.insert(a.id);
      fold(a);
    }
    for (const auto &d: tb.decoys) {
      ++decoys;
      fold(d);
      overlap += actives.count(d.id);
      const Molecule &am = sc.library.at(d.paired_active), &dm = sc.pool.at(d.id);
      const DescriptorVector da = descriptors(am), dd = descriptors(dm);
      const double sim = tanimoto(ecfp_fingerprint(am), ecfp_fingerprint(dm));
      const bool ok = std::abs(da.mol_weight - dd.mol_weight) <= 25
                      && std::abs(da.rot_bonds - dd.rot_bonds) <= 1 && std::abs(da.hbd - dd.hbd) <= 1
                      && std::abs(da.hba - dd.hba) <= 1 && da.net_charge == dd.net_charge
                      && sim <= 0.35;
      violations += !ok;
    }
    if (tb.target_id == "narrow") {
      narrow_ok = tb.clusters.size() == 4 && tb.folds.train_only;
      for (const auto &[k, f]: tb.folds.fold_of)
        narrow_ok &= f == kTrainOnlyFold;
    } else {
      wide_ok = !tb.folds.train_only && tb.folds.n_folds == 5;
    }
  }
  const bool ok = decoys > 0 && violations == 0 && straddles == 0 && overlap == 0 && narrow_ok
                  && wide_ok;
  return { ok, std::to_string(decoys) + " decoys re-verified, " + std::to_string(violations)
                   + " window violations, " + std::to_string(straddles)
                   + " straddling clusters, 4-cluster target train-only: "
                   + (narrow_ok ? "yes" : "no") };
}

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  if (rc != 0)
    std::fprintf(stderr, "%s", err.str().c_str());
  return rc;
}

void pipeline_run(const fs::path &dir, const testing::BenchScenario &sc) {
  fs::copy(fs::path(VOXSCREEN_FIXTURE_DIR) / "pipeline", dir);
  auto at = [&](const std::string &s) { return (dir / s).string(); };
  const std::string cfg = at("run.cfg");
  bool ok = true;
  ok &= cli({ "prep", "--config", cfg, "--threads", "1", "--complexes", at("train.tsv"), "--out", at("prep_train") }) == 0;
  ok &= cli({ "prep", "--config", cfg, "--threads", "1", "--complexes", at("test.tsv"), "--out", at("prep_test") }) == 0;
  ok &= cli({ "train", "--config", cfg, "--threads", "1", "--manifest", at("prep_train/manifest.tsv"),
              "--checkpoint", at("model.vxnn") }) == 0;
  ok &= cli({ "score", "--config", cfg, "--threads", "1", "--checkpoint", at("model.vxnn"),
              "--manifest", at("prep_test/manifest.tsv"), "--out", at("scores.csv") }) == 0;

  std::string csv = "ligand_id,target_id,affinity_um,type\n", lib, pool;
  for (const auto &r: sc.records)
    csv += r.ligand_id + ',' + r.target_id + ',' + std::to_string(r.affinity_um) + ",IC50\n";
  for (const auto &[id, m]: sc.library)
    lib += write_sdf(m);
  for (const auto &[id, m]: sc.pool)
    pool += write_sdf(m);
  write_file(dir / "act.csv", csv);
  write_file(dir / "lib.sdf", lib);
  write_file(dir / "pool.sdf", pool);
  std::ostringstream sink;
  auto *old = std::cerr.rdbuf(sink.rdbuf());
  ok &= cli({ "bench", "--seed", "7", "--threads", "1", "--activities", at("act.csv"), "--ligands",
              at("lib.sdf"), "--decoy-pool", at("pool.sdf"), "--out", at("bench") }) == 0;
  std::cerr.rdbuf(old);
  if (!ok)
    throw Error(ErrorKind::kIo, "pipeline command failed in " + dir.string());
}

Outcome reproducibility() {
  testing::TempDir root("acceptance");
  const auto sc = testing::make_bench_scenario(110, 30, 3000);
  pipeline_run(root.path() / "a", sc);
  pipeline_run(root.path() / "b", sc);
  std::size_t compared = 0, differing = 0;
  std::string first_diff;
  for (const auto &e: fs::recursive_directory_iterator(root.path() / "a")) {
    if (!e.is_regular_file())
      continue;
    const fs::path rel = fs::relative(e.path(), root.path() / "a");
    const std::string s = rel.string();
    const bool wanted = s == "model.vxnn" || s == "model.vxnn.txt" || s == "scores.csv"
                        || rel.filename() == "manifest.tsv" || s.rfind("bench", 0) == 0
                        || rel.extension() == ".voxg";
    if (!wanted)
      continue;
    ++compared;
    if (read_file(e.path()) != read_file(root.path() / "b" / rel)) {
      ++differing;
      if (first_diff.empty())
        first_diff = s;
    }
  }
  return { compared > 10 && differing == 0,
           std::to_string(compared) + " files compared (checkpoint, loss log, scores, manifests, grids, "
               "benchmark), " + std::to_string(differing) + " differ"
               + (first_diff.empty() ? "" : " first " + first_diff) };
}

Outcome probe() {
  nn::Network net(nn::NetworkConfig::from_text(
      "input 2 12 12 12; conv 2 3; relu; flatten; fc 2; logistic"));
  Rng rng(111);
  const auto motif = testing::random_values(rng, 27);
  auto w = net.weights(0);
  // Filter 1 reads channel 1 only and carries the motif.
  for (std::size_t i = 0; i < 27; ++i)
    w[(1 * 2 + 1) * 27 + i] = motif[i];
  std::vector<float> grid(2 * 1728);
  for (float &v: grid)
    v = static_cast<float>(0.3 * rng.uniform());
  const std::size_t z0 = 7, y0 = 1, x0 = 4;
  for (std::size_t i = 0; i < 27; ++i)
    grid[1728 + ((z0 + i / 9) * 12 + y0 + i / 3 % 3) * 12 + x0 + i % 3] =
        static_cast<float>(2.0 * motif[i]);
  const auto top = nn::filter_activation_map(net, grid, 0, 1, 1);
  const auto &c = top.at(0).cell;
  const bool ok = c == std::array<std::size_t, 3> { z0, y0, x0 };
  return { ok, "top-1 cell (" + std::to_string(c[0]) + "," + std::to_string(c[1]) + ","
                   + std::to_string(c[2]) + "), planted (" + std::to_string(z0) + ","
                   + std::to_string(y0) + "," + std::to_string(x0) + ")" };
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria {
    { "gradient finite differences", gradients },
    { "convolution vs direct summation", conv_oracle },
    { "AUC equals Mann-Whitney", auc_mann_whitney },
    { "logAUC calibration", logauc_calibration },
    { "atomnet shapes and parameter count", atomnet },
    { "motif task learnability", motif_learning },
    { "enclosed cavity flood fill", cavity },
    { "voxel occupancy and rotation", voxel_conservation },
    { "benchmark decoys and folds", benchmark_invariants },
    { "pipeline reproducibility", reproducibility },
    { "probe finds planted motif", probe },
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = { false, std::string("exception: ") + e.what() };
    }
    failures += !o.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
