#include "fhg/orthopoly.hpp"

#include "fhg/errors.hpp"

namespace fhg {

Vec compute_moments(const WeightSpec& spec, int k_max) {
  const PartitionPlan plan = plan_partition(spec);
  Vec mu(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    mu[k] = integrate_weighted_plan(spec, plan,
                                    [k](const Real& x) { return pow(x, k); });
  }
  return mu;
}

OrthoSystem build_system(const WeightSpec& spec, int n_max, const BuildOptions& opts) {
  validate(spec);
  if (n_max < 0) throw BadConfig("n_max must be nonnegative");

  OrthoSystem sys;
  sys.spec = spec;
  sys.n_max = n_max;
  sys.h.resize(n_max + 1);
  sys.alpha.resize(n_max + 1);
  sys.beta = Vec::Zero(n_max + 1);
  sys.p_coeff = Vec::Zero(n_max + 1);
  sys.coeffs = Mat::Zero(n_max + 1, n_max + 1);
  sys.ortho_residual = Vec::Zero(n_max + 1);

  const PartitionPlan plan = plan_partition(spec);

  sys.coeffs(0, 0) = 1;
  sys.h[0] = integrate_weighted_plan(spec, plan, [](const Real&) { return Real(1); });
  if (!(sys.h[0] > 0)) throw PrecisionExhausted("h_0 is not positive");
  sys.alpha[0] = integrate_weighted_plan(spec, plan, [](const Real& x) { return x; }) / sys.h[0];

  for (int n = 1; n <= n_max; ++n) {
    // coefficients of P_n from the recurrence
    for (int k = 0; k <= n; ++k) {
      Real c = (k > 0 ? sys.coeffs(n - 1, k - 1) : Real(0)) - sys.alpha[n - 1] * sys.coeffs(n - 1, k);
      if (n >= 2) c -= sys.beta[n - 1] * sys.coeffs(n - 2, k);
      sys.coeffs(n, k) = c;
    }
    sys.p_coeff[n] = sys.coeffs(n, n - 1);

    auto pn = [&](const Real& x) { return detail::eval_recurrence(sys.alpha, sys.beta, n, x); };
    sys.h[n] = integrate_weighted_plan(spec, plan, [&](const Real& x) {
      const Real v = pn(x);
      return v * v;
    });
    if (!(sys.h[n] > 0))
      throw PrecisionExhausted("h_" + std::to_string(n) +
                               " lost all significant bits; raise precision_bits");
    sys.beta[n] = sys.h[n] / sys.h[n - 1];
    sys.alpha[n] = integrate_weighted_plan(spec, plan, [&](const Real& x) {
      const Real v = pn(x);
      return x * v * v;
    }) / sys.h[n];
  }

  // p(n) must also equal -sum_{j<n} alpha_j
  Real alpha_sum = 0;
  for (int n = 1; n <= n_max; ++n) {
    alpha_sum += sys.alpha[n - 1];
    const Real defect = abs(sys.p_coeff[n] + alpha_sum);
    const Real scale = max(abs(sys.p_coeff[n]), Real(1));
    if (defect > 1000 * spec.quad_tol * scale)
      throw PrecisionExhausted("subleading coefficient disagrees with the alpha sum at n = " +
                               std::to_string(n));
  }

  if (opts.validate_orthogonality) {
    for (int n = 1; n <= n_max; ++n) {
      Real worst = 0;
      for (int m = 0; m < n; ++m) {
        const Real cross = integrate_weighted_plan(spec, plan, [&](const Real& x) {
          return detail::eval_recurrence(sys.alpha, sys.beta, n, x) *
                 detail::eval_recurrence(sys.alpha, sys.beta, m, x);
        });
        worst = max(worst, abs(cross) / sqrt(sys.h[n] * sys.h[m]));
      }
      sys.ortho_residual[n] = worst;
      if (worst > spec.quad_tol)
        throw PrecisionExhausted("orthogonality defect " + to_string(worst, 8) + " at degree " +
                                 std::to_string(n));
    }
  }

  if (opts.with_moments) sys.moments = compute_moments(spec, 2 * n_max + 1);
  return sys;
}

Real hankel_det_from_moments(const Vec& moments, int n) {
  if (n == 0) return Real(1);
  if (moments.size() < 2 * n - 1) throw BadConfig("moment table too short for Hankel determinant");
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = moments[i + j];
  return Eigen::FullPivLU<Mat>(m).determinant();
}

Real hankel_det(const OrthoSystem& sys, int n) {
  if (n < 0 || n > sys.n_max + 1) throw BadConfig("hankel_det degree out of range");
  Real d = 1;
  for (int j = 0; j < n; ++j) d *= sys.h[j];
  if (n > 0 && n <= 8 && sys.moments.size() > 0) {
    const Real direct = hankel_det_from_moments(sys.moments, n);
    if (abs(direct - d) > 1000 * sys.spec.quad_tol * abs(d))
      throw PrecisionExhausted("Hankel determinant cross-check failed at n = " + std::to_string(n));
  }
  return d;
}

namespace {

// det of the Hankel matrix with its last column advanced by one moment; the
// numerator of the subleading coefficient p(n) = -Dt_n / D_n.
Real hankel_det_shifted(const Vec& moments, int n) {
  if (n == 0) return Real(0);
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) m(i, j) = moments[i + j];
    m(i, n - 1) = moments[i + n];
  }
  return Eigen::FullPivLU<Mat>(m).determinant();
}

}  // namespace

MomentRecurrence recurrence_from_moments(const Vec& moments, int n_small) {
  MomentRecurrence rec;
  rec.alpha.resize(n_small + 1);
  rec.beta = Vec::Zero(n_small + 1);
  rec.p = Vec::Zero(n_small + 2);
  Vec d(n_small + 3), dt(n_small + 3);
  for (int n = 0; n <= n_small + 2; ++n) {
    d[n] = hankel_det_from_moments(moments, n);
    dt[n] = hankel_det_shifted(moments, n);
  }
  for (int n = 0; n <= n_small + 1; ++n) rec.p[n] = -dt[n] / d[n];
  for (int n = 0; n <= n_small; ++n) rec.alpha[n] = rec.p[n] - rec.p[n + 1];
  for (int n = 1; n <= n_small; ++n) rec.beta[n] = d[n + 1] * d[n - 1] / (d[n] * d[n]);
  return rec;
}

Real christoffel_darboux_residual(const OrthoSystem& sys, int n, const Real& x, const Real& y) {
  if (x == y) throw BadConfig("Christoffel-Darboux residual needs x != y");
  if (n < 1 || n > sys.n_max) throw BadConfig("degree out of range");
  Real lhs = 0, scale = 0;
  for (int k = 0; k < n; ++k) {
    const Real term = eval_P(sys, k, x) * eval_P(sys, k, y) / sys.h[k];
    lhs += term;
    scale = max(scale, abs(term));
  }
  const Real rhs = (eval_P(sys, n, x) * eval_P(sys, n - 1, y) -
                    eval_P(sys, n, y) * eval_P(sys, n - 1, x)) /
                   (sys.h[n - 1] * (x - y));
  scale = max(scale, abs(rhs));
  if (scale == 0) return Real(0);
  return abs(lhs - rhs) / scale;
}

}  // namespace fhg
