#pragma once

#include "fhg/complex.hpp"
#include "fhg/real.hpp"
#include "fhg/weight.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace fhg {

using RealFn = std::function<Real(const Real&)>;
using ComplexFn = std::function<Complex(const Real&)>;

// Nodes/weights on (-1,1) for the Jacobi weight (1-x)^alpha (1+x)^beta.
struct QuadRule {
  Vec nodes;
  Vec weights;
  Real alpha;
  Real beta;
  Real mass;  // integral of the bare Jacobi weight over (-1,1)
};

// Cached per (order, alpha, beta, working precision). Nodes are seeded by a
// double-precision Golub-Welsch solve and polished by Newton iteration on the
// monic Jacobi recurrence at working precision. Thread-safe.
std::shared_ptr<const QuadRule> jacobi_rule(int order, const Real& alpha, const Real& beta);

// One bounded integration piece [a,b]; left_sing/right_sing are indices into
// spec.ts when an endpoint carries an algebraic singularity, else -1.
struct Piece {
  Real a;
  Real b;
  int left_sing = -1;
  int right_sing = -1;
};

// Where to cut the real line: bounded pieces between (and around) the t_j,
// plus tail segments of doubling width beyond [core_lo, core_hi].
// Invariant: every t_j is a piece endpoint, so no quadrature node ever
// coincides with a singular point.
struct PartitionPlan {
  std::vector<Piece> core;
  Real core_lo;
  Real core_hi;
  Real tail_width = 2;       // width of the first tail segment on each side
  int max_tail_segments = 16;
};

PartitionPlan plan_partition(const WeightSpec& spec);

// Same, but with extra breakpoints at t_j +- delta and the window
// (t_j - delta, t_j + delta) removed. Requires delta < distance to the
// neighbouring singularities.
PartitionPlan plan_partition_excluding(const WeightSpec& spec, int j, const Real& delta);

// integral over R of f(x) w(x) dx to relative accuracy spec.quad_tol,
// measured against the sum of piece magnitudes. Rule orders are doubled until
// two successive refinements agree; throws NoConvergence past the cap.
Real integrate_weighted(const WeightSpec& spec, const RealFn& f);
Complex integrate_weighted_complex(const WeightSpec& spec, const ComplexFn& f);

// integral of f(x) w(x) over R minus the excluded window around t_j.
Real integrate_weighted_excluding(const WeightSpec& spec, const RealFn& f, int j,
                                  const Real& delta);

// As integrate_weighted but with a caller-supplied plan (used by tests and by
// the principal-value machinery).
Real integrate_weighted_plan(const WeightSpec& spec, const PartitionPlan& plan, const RealFn& f);
Complex integrate_weighted_complex_plan(const WeightSpec& spec, const PartitionPlan& plan,
                                        const ComplexFn& f);

// integral of u^gamma_exp q(u) du over (0, delta) with q smooth; the
// algebraic factor is absorbed by the rule, so gamma_exp in (-1,0] is fine.
Real integrate_power_segment(const Real& delta, const Real& gamma_exp, const RealFn& q,
                             const Real& rel_tol);

}  // namespace fhg
