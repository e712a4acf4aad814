//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef VOXSCREEN_CLI_COMMANDS_H_
#define VOXSCREEN_CLI_COMMANDS_H_

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "voxscreen/cli/config.h"

namespace voxscreen::cli {

inline constexpr std::string_view kVersion = "0.3.0";

// Each command reads its settings from the merged config, writes artifacts
// to disk and logs to `log`. Errors are thrown as voxscreen::Error.
void run_prep(const Config &config, std::ostream &log);
void run_bench(const Config &config, std::ostream &log);
void run_train(const Config &config, std::ostream &log);
void run_score(const Config &config, std::ostream &log);
void run_eval(const Config &config, std::ostream &log);
void run_probe(const Config &config, std::ostream &log);

// Every key any command understands.
const std::vector<std::string> &known_keys();

// Entry point shared by the executable and the tests. args excludes the
// program name. Help and version go to out, everything else to err.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace voxscreen::cli

#endif  // VOXSCREEN_CLI_COMMANDS_H_
