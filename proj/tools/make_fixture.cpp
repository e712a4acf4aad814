//
// voxscreen - Copyright 2026 The voxscreen Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Regenerates the toy pipeline inputs: make_fixture <dir> [seed]

#include <cstdlib>
#include <iostream>

#include "voxscreen/error.h"
#include "voxscreen/synthetic.h"

int main(int argc, char **argv) {
  if (argc < 2 || argc > 3) {
    std::cerr << "usage: make_fixture <dir> [seed]\n";
    return 2;
  }
  voxscreen::synthetic::PipelineFixture f;
  if (argc == 3)
    f.seed = std::strtoull(argv[2], nullptr, 10);
  try {
    voxscreen::synthetic::write_pipeline_fixture(argv[1], f);
  } catch (const voxscreen::Error &e) {
    std::cerr << "error: category=" << voxscreen::to_string(e.kind())
              << " message=" << e.what() << '\n';
    return 1;
  }
  return 0;
}
