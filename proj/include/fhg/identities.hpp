#pragma once

#include "fhg/cauchy.hpp"
#include "fhg/report.hpp"

namespace fhg {

// The 2N auxiliary quantities per degree:
//   R_{n,j} = (g_j / h_n)     PV int P_n^2     w / (y - t_j),
//   r_{n,j} = (g_j / h_{n-1}) PV int P_n P_{n-1} w / (y - t_j),  r_{0,j} = 0.
// Sum rules: sum_j R_{n,j} = 2 alpha_n and sum_j r_{n,j} = 2 beta_n - n.
struct AuxQuantities {
  enum class Provenance { quadrature, iterated };
  int n_max = 0;
  Mat R;  // (n_max + 1) x N
  Mat r;
  Provenance provenance = Provenance::quadrature;
};

// Polynomial-reduction path for every degree up to sys.n_max.
AuxQuantities compute_aux(const OrthoSystem& sys, const PVConstants& pv);

// Independent path: direct odd-part-extraction quadrature of the full
// singular integrand (cross-validation only; slower).
AuxQuantities compute_aux_direct(const OrthoSystem& sys);

// Residuals of the degree-difference identities connecting levels n-1, n,
// n+1: the two sum rules, the per-j three-term relations, the first-order
// beta difference, the product identity r(r-g) = beta R R, the recurrence
// coefficients expressed through the auxiliaries, and the two aggregate
// (summed over j) forms. Requires 1 <= n <= n_max - 1.
std::vector<ResidualReport> verify_section3(const OrthoSystem& sys, const AuxQuantities& aux,
                                            int n, const Real& tol);

// Residual of the closed form of the subleading coefficient,
//   p(n) = sum t_j r_{n,j} - (n + sum r)(sum R)/2 - sum (r^2 - g r)/R.
// Throws DegenerateR when some |R_{n,j}| is too small to divide by.
ResidualReport verify_p_expression(const OrthoSystem& sys, const AuxQuantities& aux, int n,
                                   const Real& tol);

// One step of the difference system, iterated in n:
//   r_{n+1,j} = (t_j - sum_k R_{n,k}/2) R_{n,j} + g_j - r_{n,j},
//   R_{n+1,1} = 2 r(r - g_1) / ((n+1 + sum r) R_{n,1})        at level n+1,
//   R_{n+1,j} = [r(r-g_j)/(r1(r1-g_1))] R_{n+1,1} R_{n,1} / R_{n,j}, j >= 2.
// Seeded with R at degrees 0 and 1 from quadrature (the written system
// consumes two consecutive R levels). Internally the singularities are
// relabeled so that index 1 carries the largest |gamma| (the pivot of the
// divisions); columns with gamma_j = 0 stay identically zero.
struct IterationResult {
  AuxQuantities aux;   // provenance = iterated
  int completed_n;     // rows 0..completed_n are valid
  std::string halt;    // empty, or the division-breakdown description
};
IterationResult iterate_difference_system(const WeightSpec& spec, int n_max, const Vec& seed_R0,
                                          const Vec& seed_R1);

}  // namespace fhg
