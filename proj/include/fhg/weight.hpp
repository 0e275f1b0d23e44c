#pragma once

#include "fhg/real.hpp"

#include <string>
#include <vector>

namespace fhg {

// Gaussian weight with root-type algebraic singularities:
//   w(x) = exp(-x^2) * prod_j |x - t_j|^{g_j},   g_j > -1,  t_1 < ... < t_N.
// Immutable after validation; all operations on it are pure.
struct WeightSpec {
  Vec ts;               // singular points, strictly increasing
  Vec gammas;           // exponents, each > -1
  unsigned precision_bits = 256;
  Real quad_tol = Real("1e-30");

  int num_singularities() const { return static_cast<int>(ts.size()); }
};

WeightSpec make_spec(const std::vector<Real>& ts, const std::vector<Real>& gammas,
                     unsigned precision_bits = 256, const Real& quad_tol = Real("1e-30"));

// Throws ExponentOutOfRange / DuplicateSingularity / BadConfig.
void validate(const WeightSpec& spec);

// Non-fatal conditions worth surfacing in reports (e.g. nearly coincident
// singular points, which degrade conditioning).
std::vector<std::string> validate_warnings(const WeightSpec& spec);

// w(x). Computed in log space so large |x| underflows gracefully rather than
// overflowing intermediate factors. Exact 0 when x hits a singularity with
// positive exponent; throws SingularEvaluation when the exponent is negative.
Real eval_weight(const WeightSpec& spec, const Real& x);

// prod over k != skip of |x - t_k|^{g_k} times exp(-x^2); skip < 0 keeps all
// factors. Used by quadrature, which absorbs singular factors into the rule.
Real eval_weight_skipping(const WeightSpec& spec, const Real& x, int skip_a, int skip_b = -1);

}  // namespace fhg
