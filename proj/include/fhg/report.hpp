#pragma once

#include "fhg/complex.hpp"
#include "fhg/real.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fhg {

// One verified identity instance. `name` is a stable machine-readable id,
// `detail` says what the identity relates; `j` is reported 1-based to match
// the usual subscript convention for the singular points.
struct ResidualReport {
  std::string name;
  std::string detail;
  int n = -1;
  int j = -1;
  std::optional<Complex> z;
  Real residual = 0;
  Real tolerance = 0;
  bool pass = false;
  std::string note;
};

ResidualReport make_report(std::string name, std::string detail, int n, int j,
                           const Real& residual, const Real& tolerance, std::string note = "");

// Line-oriented record, one report per line (key=value pairs).
std::string to_line(const ResidualReport& rep);

bool all_pass(const std::vector<ResidualReport>& reps);

// Largest residual per identity name, insertion-ordered.
std::vector<std::pair<std::string, Real>> max_residual_by_name(
    const std::vector<ResidualReport>& reps);

}  // namespace fhg
