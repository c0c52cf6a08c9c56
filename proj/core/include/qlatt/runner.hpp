#pragma once

#include <iosfwd>

#include "qlatt/io.hpp"

namespace qlatt {

struct SuiteResult {
  std::string name;
  bool pass = false;
  double value = 0;  // suite-specific figure of merit (worst residual or margin)
  std::string note;
};

struct RunOutcome {
  int exit_code = 0;
  std::vector<Artifact> artifacts;
  std::vector<SuiteResult> suites;
  std::vector<std::string> notes;
};

// Executes the configured tasks and writes the artifacts plus manifest.json
// under config.out_dir. Exit code 0 on success, 3 on certificate failure
// without force, 4 on verification failure. Configuration problems throw
// ConfigError; the CLI maps those to exit 2.
//
// Volumes are independent work items distributed over config.threads
// workers; every artifact is assembled by the calling thread afterwards, so
// output bytes do not depend on the worker count.
RunOutcome run_tasks(const RunConfig& config);

// Prints Hilbert-space dimension, interaction norms, certificate margins and
// the admissible deviation window for a spec string such as
// "hubbard L=2 u=4". Returns 0, or 2 for a malformed spec or unknown preset.
int describe_model(const std::string& spec, std::ostream& out);

}  // namespace qlatt
