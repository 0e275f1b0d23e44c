#pragma once

#include "fhg/weight.hpp"

// Shared fixtures for the unit tests.
namespace testspec {

using fhg::Real;
using fhg::WeightSpec;

inline WeightSpec gaussian() {
  fhg::set_working_precision(256);
  return fhg::make_spec({Real(0)}, {Real(0)});
}

// N = 1 off-center singularity.
inline WeightSpec single() {
  fhg::set_working_precision(256);
  return fhg::make_spec({Real("0.5")}, {Real(1)});
}

// N = 2 test configuration used throughout.
inline WeightSpec pair() {
  fhg::set_working_precision(256);
  return fhg::make_spec({Real("-0.6"), Real("0.8")}, {Real("0.5"), Real("1.5")});
}

// Symmetric about the origin.
inline WeightSpec symmetric() {
  fhg::set_working_precision(256);
  return fhg::make_spec({Real(0)}, {Real(1)});
}

}  // namespace testspec
