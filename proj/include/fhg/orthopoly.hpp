#pragma once

#include "fhg/complex.hpp"
#include "fhg/quadrature.hpp"
#include "fhg/weight.hpp"

namespace fhg {

// Monic orthogonal polynomial system for a WeightSpec:
//   x P_n = P_{n+1} + alpha_n P_n + beta_n P_{n-1},  P_0 = 1, beta_0 P_{-1} = 0,
//   h_n = integral of P_n^2 w,  beta_n = h_n / h_{n-1},
//   P_n = x^n + p(n) x^{n-1} + ...
// Built once, then immutable and freely shareable.
struct OrthoSystem {
  WeightSpec spec;
  int n_max = 0;
  Vec h;          // h_0 .. h_{n_max}, all positive
  Vec alpha;      // alpha_0 .. alpha_{n_max}
  Vec beta;       // beta_0 := 0, beta_1 .. beta_{n_max}
  Vec p_coeff;    // p(0) := 0 .. p(n_max), subleading coefficients
  Mat coeffs;     // row n holds the monic coefficients of P_n (column k = x^k)
  Vec moments;    // mu_0 .. mu_{2 n_max + 1} (empty when with_moments is off)
  Vec ortho_residual;  // per-degree orthogonality defect, a digit-loss proxy
};

struct BuildOptions {
  bool validate_orthogonality = true;  // check all pairs m < n <= n_max
  bool with_moments = true;            // also compute the moment table
};

// mu_k = integral of x^k w(x) dx for k = 0..k_max.
Vec compute_moments(const WeightSpec& spec, int k_max);

// Stieltjes procedure: inner products by weighted quadrature with P_n
// evaluated through the recurrence (no coefficient cancellation). Throws
// PrecisionExhausted when a squared norm degenerates.
OrthoSystem build_system(const WeightSpec& spec, int n_max, const BuildOptions& opts = {});

// D_n = product of h_0..h_{n-1} (D_0 = 1). For n <= 8 (and when the moment
// table exists) also evaluates the Hankel moment determinant directly and
// requires agreement to 1e3 * quad_tol relative.
Real hankel_det(const OrthoSystem& sys, int n);

// Hankel determinant of a raw moment table (cross-check path).
Real hankel_det_from_moments(const Vec& moments, int n);

// Recurrence data recovered from moments via Hankel determinants; only
// sensible for small n (the moment matrix is exponentially ill-conditioned).
struct MomentRecurrence {
  Vec alpha;
  Vec beta;  // beta[0] = 0
  Vec p;     // p[0] = 0
};
MomentRecurrence recurrence_from_moments(const Vec& moments, int n_small);

namespace detail {
template <class S>
S eval_recurrence(const Vec& alpha, const Vec& beta, int n, const S& x) {
  if (n < 0) return S{};
  S prev{};          // P_{-1}
  S cur = S{} + Real(1);  // P_0
  for (int k = 0; k < n; ++k) {
    S next = (x - alpha[k]) * cur - beta[k] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}
}  // namespace detail

template <class S>
S eval_P(const OrthoSystem& sys, int n, const S& x) {
  return detail::eval_recurrence(sys.alpha, sys.beta, n, x);
}

// P_n(x) and P_n'(x) by simultaneous forward recurrence.
template <class S>
void eval_P_and_prime(const OrthoSystem& sys, int n, const S& x, S& p, S& dp) {
  S prev{}, dprev{};
  p = S{} + Real(1);
  dp = S{};
  for (int k = 0; k < n; ++k) {
    S next = (x - sys.alpha[k]) * p - sys.beta[k] * prev;
    S dnext = p + (x - sys.alpha[k]) * dp - sys.beta[k] * dprev;
    prev = p;
    p = next;
    dprev = dp;
    dp = dnext;
  }
}

template <class S>
S eval_P_prime(const OrthoSystem& sys, int n, const S& x) {
  S p, dp;
  eval_P_and_prime(sys, n, x, p, dp);
  return dp;
}

// Horner evaluation from the coefficient table; the second path used by
// cross-checks against the recurrence evaluation.
template <class S>
S eval_P_from_coeffs(const OrthoSystem& sys, int n, const S& x) {
  S acc = S{} + sys.coeffs(n, n);
  for (int k = n - 1; k >= 0; --k) acc = acc * x + sys.coeffs(n, k);
  return acc;
}

// Normalized defect of the Christoffel-Darboux identity at (x, y), x != y.
Real christoffel_darboux_residual(const OrthoSystem& sys, int n, const Real& x, const Real& y);

}  // namespace fhg
