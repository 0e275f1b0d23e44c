#include "fhg/cauchy.hpp"

#include "fhg/errors.hpp"
#include "fhg/poly.hpp"

namespace fhg {

namespace {

Real window_half_width(const WeightSpec& spec, int j) {
  Real delta = 1;
  for (int k = 0; k < spec.num_singularities(); ++k) {
    if (k == j) continue;
    delta = min(delta, abs(spec.ts[k] - spec.ts[j]) / 2);
  }
  return delta;
}

// PV of smooth(y) * w(y) / (y - t_j) over the window plus the regular rest.
// `smooth` must be well-behaved on the whole line (polynomial growth).
Real pv_transform_general(const WeightSpec& spec, int j, const RealFn& smooth) {
  const Real tj = spec.ts[j];
  const Real delta = window_half_width(spec, j);

  auto g = [&](const Real& y) { return smooth(y) * eval_weight_skipping(spec, y, j); };
  auto odd_quotient = [&](const Real& u) { return (g(tj + u) - g(tj - u)) / u; };
  const Real window =
      integrate_power_segment(delta, spec.gammas[j], odd_quotient, spec.quad_tol);

  const Real outside = integrate_weighted_excluding(
      spec, [&](const Real& y) { return smooth(y) / (y - tj); }, j, delta);

  return window + outside;
}

}  // namespace

Real pv_weight_transform(const WeightSpec& spec, int j) {
  if (j < 0 || j >= spec.num_singularities()) throw BadConfig("singularity index out of range");
  return pv_transform_general(spec, j, [](const Real&) { return Real(1); });
}

PVConstants compute_pv_constants(const WeightSpec& spec) {
  PVConstants out;
  const int n = spec.num_singularities();
  out.pv.resize(n);
  out.delta.resize(n);
  for (int j = 0; j < n; ++j) {
    out.pv[j] = pv_weight_transform(spec, j);
    out.delta[j] = window_half_width(spec, j);
  }
  return out;
}

Complex cauchy_complex(const WeightSpec& spec, const ComplexFn& f, const Complex& z) {
  if (z.im == 0) throw RealAxisPole("Cauchy transform needs Im z != 0");
  return integrate_weighted_complex(spec, [&](const Real& y) { return f(y) / (z - y); });
}

Complex cauchy_complex(const WeightSpec& spec, const RealFn& f, const Complex& z) {
  return cauchy_complex(spec, ComplexFn([&](const Real& y) { return Complex(f(y)); }), z);
}

Real aux_integral(const OrthoSystem& sys, const PVConstants& pv, int n, int j, AuxKind kind) {
  const WeightSpec& spec = sys.spec;
  if (n < 0 || n > sys.n_max) throw BadConfig("degree out of range");
  if (j < 0 || j >= spec.num_singularities()) throw BadConfig("singularity index out of range");
  if (spec.gammas[j] == 0) return Real(0);
  if (kind == AuxKind::r && n == 0) return Real(0);  // P_{-1} = 0

  const Vec cn = sys.coeffs.row(n).head(n + 1);
  const Vec cm = (kind == AuxKind::R) ? cn : Vec(sys.coeffs.row(n - 1).head(n));
  const Vec prod = poly_mul(cn, cm);

  Real value_at_t;
  const Vec quotient = synthetic_divide(prod, spec.ts[j], value_at_t);

  const Real regular = integrate_weighted(
      spec, [&](const Real& y) { return poly_eval(quotient, y); });

  const Real h_den = (kind == AuxKind::R) ? sys.h[n] : sys.h[n - 1];
  if (!(h_den > 0)) throw PrecisionExhausted("nonpositive norm in auxiliary integral");
  return spec.gammas[j] / h_den * (regular + value_at_t * pv.pv[j]);
}

Real aux_integral_direct(const OrthoSystem& sys, int n, int j, AuxKind kind) {
  const WeightSpec& spec = sys.spec;
  if (n < 0 || n > sys.n_max) throw BadConfig("degree out of range");
  if (j < 0 || j >= spec.num_singularities()) throw BadConfig("singularity index out of range");
  if (spec.gammas[j] == 0) return Real(0);
  if (kind == AuxKind::r && n == 0) return Real(0);

  auto numerator = [&](const Real& y) {
    const Real a = eval_P(sys, n, y);
    return (kind == AuxKind::R) ? a * a : a * eval_P(sys, n - 1, y);
  };
  const Real full = pv_transform_general(spec, j, numerator);
  const Real h_den = (kind == AuxKind::R) ? sys.h[n] : sys.h[n - 1];
  return spec.gammas[j] / h_den * full;
}

}  // namespace fhg
