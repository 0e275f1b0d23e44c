#pragma once

#include "fhg/real.hpp"

#include <string>
#include <vector>

namespace fhg {

// One swept coordinate: t_{coord} runs over `steps` evenly spaced values in
// [start, stop] (steps = 1 pins it at start).
struct GridAxis {
  int coord = 0;  // 0-based index into ts
  Real start;
  Real stop;
  int steps = 1;
};

// Resolved run configuration (config file merged with CLI overrides).
struct RunConfig {
  std::vector<Real> ts;
  std::vector<Real> gammas;
  unsigned precision_bits = 256;
  Real quad_tol;
  int n_max = 12;
  std::string suite = "all";  // orthopoly | ladder | identities | dynamics | all
  std::string format = "json";
  std::string out_dir = ".";
  Real fd_step;
  int richardson = 1;
  Real iterate_tol;
  Real report_tol = -1;  // >= 0 overrides every verification report tolerance
  std::vector<GridAxis> grid;
  std::vector<std::string> warnings;
};

std::string version_string();

// Parses the key-value config file and applies overrides; sets the working
// precision as a side effect (numeric strings must be parsed at the target
// precision). Throws ConfigError subtypes on malformed input.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

// Entry point used by the fh-gauss tool and by tests. argv-style arguments
// without the program name, e.g. {"verify", "--config", "run.cfg"}.
// Returns the process exit code: 0 ok, 1 config error, 2 numerical failure
// (or failed verification), 3 I/O error.
int run_cli(const std::vector<std::string>& args);

}  // namespace fhg
