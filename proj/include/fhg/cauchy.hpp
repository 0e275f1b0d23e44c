#pragma once

#include "fhg/orthopoly.hpp"

namespace fhg {

// Principal-value constants pv_j = PV integral of w(y)/(y - t_j) dy, one per
// singular point. Finite for every gamma_j > -1; computed once per spec.
struct PVConstants {
  Vec pv;
  Vec delta;  // window half-widths used around each t_j
};

// PV transform of the bare weight at t_j. The singular window is handled by
// odd-part extraction: on [t_j - d, t_j + d], with g = w / |y - t_j|^{g_j}
// smooth there,
//   PV int |u|^{g_j} g(t_j + u) / u du
//     = int_0^d u^{g_j} * (g(t_j + u) - g(t_j - u)) / u du,
// and the u^{g_j} factor is absorbed exactly by a Gauss-Jacobi rule. Outside
// the window the integrand is regular and handled by the standard plan.
Real pv_weight_transform(const WeightSpec& spec, int j);

PVConstants compute_pv_constants(const WeightSpec& spec);

// integral of f(y) w(y) / (z - y) dy for Im z != 0 (smooth on the real line).
Complex cauchy_complex(const WeightSpec& spec, const ComplexFn& f, const Complex& z);
Complex cauchy_complex(const WeightSpec& spec, const RealFn& f, const Complex& z);

enum class AuxKind { R, r };

// Auxiliary quantity R_{n,j} = (g_j / h_n) PV int P_n^2(y) w(y) / (y - t_j) dy
// (kind R), or the same with P_n P_{n-1} and h_{n-1} (kind r).
//
// Primary path: exact polynomial reduction. With F the polynomial numerator,
//   F(y) = Q(y) (y - t_j) + F(t_j),
// so the integral splits into a regular weighted moment of Q plus
// F(t_j) * pv_j. Division is synthetic, at working precision.
Real aux_integral(const OrthoSystem& sys, const PVConstants& pv, int n, int j, AuxKind kind);

// Cross-validation path: no polynomial reduction; odd-part extraction applied
// to the full singular integrand (with the numerator evaluated through the
// recurrence rather than coefficient tables).
Real aux_integral_direct(const OrthoSystem& sys, int n, int j, AuxKind kind);

}  // namespace fhg
