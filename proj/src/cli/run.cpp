//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "voxscreen/cli/commands.h"
#include "voxscreen/error.h"

namespace voxscreen::cli {

namespace {

struct FlagSpec {
  const char *command;
  const char *flag;
  const char *key;
  const char *help;
};

constexpr FlagSpec kFlags[] = {
  { "prep", "--complexes", "prep.complexes", "complex list TSV" },
  { "prep", "--out", "prep.out", "output directory" },
  { "prep", "--poses", "prep.poses", "poses per complex" },
  { "prep", "--margin", "prep.margin", "site grid margin (A)" },
  { "prep", "--box-edge", "grid.box_edge", "grid box edge (A)" },
  { "prep", "--spacing", "grid.spacing", "grid spacing (A)" },
  { "bench", "--activities", "bench.activities", "activity CSV" },
  { "bench", "--ligands", "bench.ligands", "ligand SDF" },
  { "bench", "--decoy-pool", "bench.decoy_pool", "decoy pool SDF" },
  { "bench", "--out", "bench.out", "output directory" },
  { "bench", "--mode", "bench.mode", "pmd or inactives" },
  { "train", "--manifest", "train.manifest", "grid manifest" },
  { "train", "--checkpoint", "train.checkpoint", "checkpoint to write" },
  { "train", "--epochs", "train.epochs", "epochs" },
  { "train", "--batch-size", "train.batch_size", "minibatch size" },
  { "train", "--preset", "network.preset", "network preset" },
  { "train", "--layers", "network.layers", "inline network layers" },
  { "score", "--checkpoint", "score.checkpoint", "trained checkpoint" },
  { "score", "--manifest", "score.manifest", "grid manifest" },
  { "score", "--out", "score.out", "score CSV to write" },
  { "eval", "--scores", "eval.scores", "comma-separated score CSVs" },
  { "eval", "--out", "eval.out", "report CSV to write" },
  { "eval", "--roc-dir", "eval.roc_dir", "directory for ROC TSVs" },
  { "eval", "--lambda", "eval.lambda", "logAUC lower fpr bound" },
  { "probe", "--checkpoint", "probe.checkpoint", "trained checkpoint" },
  { "probe", "--grid", "probe.grid", "grid file" },
  { "probe", "--layer", "probe.layer", "conv layer index" },
  { "probe", "--filter", "probe.filter", "filter index" },
  { "probe", "--top-k", "probe.top_k", "cells to report" },
  { "probe", "--out", "probe.out", "report TSV to write" },
};

const std::map<std::string, std::function<void(const Config &, std::ostream &)>> &
commands() {
  static const std::map<std::string, std::function<void(const Config &, std::ostream &)>>
      kCommands {
        { "prep", run_prep },   { "bench", run_bench }, { "train", run_train },
        { "score", run_score }, { "eval", run_eval },   { "probe", run_probe },
      };
  return kCommands;
}

const char *describe(const std::string &name) {
  if (name == "prep")
    return "structures -> binding sites -> pose grids and manifest";
  if (name == "bench")
    return "activity CSV and ligands -> benchmark directories";
  if (name == "train")
    return "grid manifest -> checkpoint and loss log";
  if (name == "score")
    return "checkpoint and grids -> score CSV";
  if (name == "eval")
    return "score CSVs -> metric report";
  return "checkpoint and grid -> filter activation report";
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app { "Structure-based virtual screening with 3D convolutional networks",
                 "voxscreen" };
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path, seed, threads;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--seed", seed, "run seed (all randomness derives from it)");
  app.add_option("--threads", threads, "worker threads (1 = fully deterministic)");
  app.add_option("--set", sets, "override a config key: section.key=value");

  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::App *> subs;
  for (const auto &[name, fn]: commands())
    subs[name] = app.add_subcommand(name, describe(name));
  for (const FlagSpec &f: kFlags)
    subs[f.command]->add_option(f.flag, flag_values[std::string(f.command) + f.flag], f.help);

  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string &a = args[i];
    if (a == "--config" || a == "--seed" || a == "--threads" || a == "--set") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-')
      continue;
    if (!commands().count(a)) {
      err << "error: category=usage message=unknown command '" << a << "'\n";
      return 2;
    }
    break;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    err << "error: category=usage message=" << one_line(e.what()) << '\n';
    return 2;
  }

  std::string command;
  for (const auto &[name, sub]: subs) {
    if (sub->parsed())
      command = name;
  }

  try {
    const std::filesystem::path cwd = std::filesystem::current_path();
    Config config;
    if (!config_path.empty())
      config = Config::load(std::filesystem::absolute(config_path));
    for (const std::string &s: sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorKind::kConfig, "--set expects section.key=value, got '" + s + "'");
      config.set(s.substr(0, eq), s.substr(eq + 1), cwd);
    }
    for (const FlagSpec &f: kFlags) {
      const std::string &v = flag_values[std::string(f.command) + f.flag];
      if (f.command == command && !v.empty())
        config.set(f.key, v, cwd);
    }
    if (!seed.empty())
      config.set("seed", seed, cwd);
    if (!threads.empty())
      config.set("threads", threads, cwd);

    commands().at(command)(config, err);
    return 0;
  } catch (const Error &e) {
    err << "error: category=" << to_string(e.kind()) << " message=" << one_line(e.what())
        << '\n';
    return 1;
  } catch (const std::exception &e) {
    err << "error: category=internal message=" << one_line(e.what()) << '\n';
    return 1;
  }
}

}  // namespace voxscreen::cli
