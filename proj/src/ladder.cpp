#include "fhg/ladder.hpp"

#include "fhg/errors.hpp"
#include "fhg/poly.hpp"

namespace fhg {

namespace {

Real term_scale(std::initializer_list<Complex> terms) {
  Real s = 1;
  for (const Complex& t : terms) s = max(s, abs(t));
  return s;
}

}  // namespace

LadderPair eval_ladder(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z) {
  if (z.im == 0) throw RealAxisPole("ladder coefficients need Im z != 0");
  if (n < 0 || n > sys.n_max || n > aux.n_max) throw BadConfig("degree out of range");
  const WeightSpec& spec = sys.spec;

  LadderPair out;
  out.n = n;
  out.z = z;
  out.A = Complex(Real(2));
  out.B = Complex();

  bool any_singular = false;
  for (int j = 0; j < spec.num_singularities(); ++j)
    if (spec.gammas[j] != 0) any_singular = true;
  if (!any_singular) return out;  // pure Gaussian: A = 2, B = 0 exactly

  const Vec cn = sys.coeffs.row(n).head(n + 1);
  const Vec pn2 = poly_mul(cn, cn);
  const Complex IA = cauchy_complex(
      spec, RealFn([&](const Real& y) { return poly_eval(pn2, y); }), z);
  for (int j = 0; j < spec.num_singularities(); ++j) {
    if (spec.gammas[j] == 0) continue;
    out.A += (aux.R(n, j) + (spec.gammas[j] / sys.h[n]) * IA) / (z - spec.ts[j]);
  }

  if (n >= 1) {
    const Vec pnm = poly_mul(cn, Vec(sys.coeffs.row(n - 1).head(n)));
    const Complex IB = cauchy_complex(
        spec, RealFn([&](const Real& y) { return poly_eval(pnm, y); }), z);
    for (int j = 0; j < spec.num_singularities(); ++j) {
      if (spec.gammas[j] == 0) continue;
      out.B += (aux.r(n, j) + (spec.gammas[j] / sys.h[n - 1]) * IB) / (z - spec.ts[j]);
    }
  }
  return out;
}

LadderSet eval_ladder_range(const OrthoSystem& sys, const AuxQuantities& aux, int n_hi,
                            const Complex& z) {
  LadderSet set;
  set.z = z;
  set.pairs.reserve(n_hi + 1);
  for (int k = 0; k <= n_hi; ++k) set.pairs.push_back(eval_ladder(sys, aux, k, z));
  return set;
}

Real lowering_residual(const OrthoSystem& sys, const LadderSet& set, int n) {
  if (n < 1) throw BadConfig("lowering relation needs n >= 1");
  const Complex& z = set.z;
  Complex pn, dpn;
  eval_P_and_prime(sys, n, z, pn, dpn);
  const Complex pm = eval_P(sys, n - 1, z);
  const Complex t1 = dpn;
  const Complex t2 = set.pairs[n].B * pn;
  const Complex t3 = sys.beta[n] * set.pairs[n].A * pm;
  return abs(t1 + t2 - t3) / term_scale({t1, t2, t3});
}

Real raising_residual(const OrthoSystem& sys, const LadderSet& set, int n) {
  if (n < 1) throw BadConfig("raising relation needs n >= 1");
  const Complex& z = set.z;
  Complex pm, dpm;
  eval_P_and_prime(sys, n - 1, z, pm, dpm);
  const Complex pn = eval_P(sys, n, z);
  const Complex t1 = dpm;
  const Complex t2 = (set.pairs[n].B + Real(2) * z) * pm;
  const Complex t3 = set.pairs[n - 1].A * pn;
  return abs(t1 - t2 + t3) / term_scale({t1, t2, t3});
}

Real s1_residual(const OrthoSystem& sys, const LadderSet& set, int n) {
  if (n + 1 >= static_cast<int>(set.pairs.size())) throw BadConfig("ladder set too short for S1");
  const Complex& z = set.z;
  const Complex lhs = set.pairs[n + 1].B + set.pairs[n].B;
  const Complex rhs = (z - sys.alpha[n]) * set.pairs[n].A - Real(2) * z;
  return abs(lhs - rhs) / term_scale({lhs, (z - sys.alpha[n]) * set.pairs[n].A, Real(2) * z});
}

Real s2_residual(const OrthoSystem& sys, const LadderSet& set, int n) {
  if (n + 1 >= static_cast<int>(set.pairs.size())) throw BadConfig("ladder set too short for S2");
  const Complex& z = set.z;
  const Complex t1 = Complex(Real(1));
  const Complex t2 = (z - sys.alpha[n]) * (set.pairs[n + 1].B - set.pairs[n].B);
  const Complex t3 = sys.beta[n + 1] * set.pairs[n + 1].A;
  const Complex t4 = (n >= 1) ? Complex(sys.beta[n]) * set.pairs[n - 1].A : Complex();
  return abs(t1 + t2 - t3 + t4) / term_scale({t1, t2, t3, t4});
}

Real s2prime_residual(const OrthoSystem& sys, const LadderSet& set, int n) {
  if (n < 1) throw BadConfig("compatibility sum rule needs n >= 1");
  const Complex& z = set.z;
  const Complex bn = set.pairs[n].B;
  Complex asum;
  for (int k = 0; k < n; ++k) asum += set.pairs[k].A;
  const Complex t1 = bn * bn;
  const Complex t2 = Real(2) * z * bn;
  const Complex t3 = asum;
  const Complex t4 = sys.beta[n] * set.pairs[n].A * set.pairs[n - 1].A;
  return abs(t1 + t2 + t3 - t4) / term_scale({t1, t2, t3, t4});
}

namespace {

LadderSet minimal_set(const OrthoSystem& sys, const AuxQuantities& aux, int n_hi,
                      const Complex& z) {
  return eval_ladder_range(sys, aux, n_hi, z);
}

}  // namespace

Real lowering_residual(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z) {
  return lowering_residual(sys, minimal_set(sys, aux, n, z), n);
}
Real raising_residual(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z) {
  return raising_residual(sys, minimal_set(sys, aux, n, z), n);
}
Real s1_residual(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z) {
  return s1_residual(sys, minimal_set(sys, aux, n + 1, z), n);
}
Real s2_residual(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z) {
  return s2_residual(sys, minimal_set(sys, aux, n + 1, z), n);
}
Real s2prime_residual(const OrthoSystem& sys, const AuxQuantities& aux, int n, const Complex& z) {
  return s2prime_residual(sys, minimal_set(sys, aux, n, z), n);
}

}  // namespace fhg
