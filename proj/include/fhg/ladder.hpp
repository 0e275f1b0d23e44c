#pragma once

#include "fhg/identities.hpp"

namespace fhg {

// A_n(z), B_n(z) at a complex point (Im z != 0):
//   A_n = 2 + sum_j [ R_{n,j} + (g_j/h_n) int P_n^2 w / (z - y) ] / (z - t_j)
//   B_n =     sum_j [ r_{n,j} + (g_j/h_{n-1}) int P_n P_{n-1} w / (z - y) ] / (z - t_j)
// with B_0 = 0. A_n -> 2 and B_n -> 0 as |z| -> infinity.
struct LadderPair {
  int n = 0;
  Complex z;
  Complex A;
  Complex B;
};

LadderPair eval_ladder(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z);

// All pairs for degrees 0..n_hi at one point; the compatibility sum rule
// consumes every lower degree, so batch evaluation avoids re-integration.
struct LadderSet {
  Complex z;
  std::vector<LadderPair> pairs;  // index = degree
};
LadderSet eval_ladder_range(const OrthoSystem& sys, const AuxQuantities& aux, int n_hi,
                            const Complex& z);

// Normalized residuals of the ladder relations and compatibility conditions.
// On the Gaussian base weight, v0'(z) = 2z throughout.
Real lowering_residual(const OrthoSystem& sys, const LadderSet& set, int n);  // n >= 1
Real raising_residual(const OrthoSystem& sys, const LadderSet& set, int n);   // n >= 1
Real s1_residual(const OrthoSystem& sys, const LadderSet& set, int n);        // needs n+1
Real s2_residual(const OrthoSystem& sys, const LadderSet& set, int n);        // needs n+1
Real s2prime_residual(const OrthoSystem& sys, const LadderSet& set, int n);   // n >= 1

// Convenience single-shot forms (build a minimal LadderSet internally).
Real lowering_residual(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z);
Real raising_residual(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z);
Real s1_residual(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z);
Real s2_residual(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z);
Real s2prime_residual(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z);

}  // namespace fhg
