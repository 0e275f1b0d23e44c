#include "fhg/identities.hpp"

#include "fhg/errors.hpp"

#include <numeric>

namespace fhg {

namespace {

Real scale_of(std::initializer_list<Real> magnitudes) {
  Real s = 1;
  for (const Real& m : magnitudes) s = max(s, abs(m));
  return s;
}

// Quantities are only resolved to ~quad_tol relative accuracy, so anything
// smaller is indistinguishable from zero and unsafe to divide by.
Real breakdown_threshold(const WeightSpec& spec) {
  return max(pow(Real(10), -static_cast<int>(spec.precision_bits) / 2), spec.quad_tol);
}

}  // namespace

AuxQuantities compute_aux(const OrthoSystem& sys, const PVConstants& pv) {
  AuxQuantities aux;
  aux.n_max = sys.n_max;
  const int nsing = sys.spec.num_singularities();
  aux.R.resize(sys.n_max + 1, nsing);
  aux.r.resize(sys.n_max + 1, nsing);
  for (int n = 0; n <= sys.n_max; ++n) {
    for (int j = 0; j < nsing; ++j) {
      aux.R(n, j) = aux_integral(sys, pv, n, j, AuxKind::R);
      aux.r(n, j) = aux_integral(sys, pv, n, j, AuxKind::r);
    }
  }
  return aux;
}

AuxQuantities compute_aux_direct(const OrthoSystem& sys) {
  AuxQuantities aux;
  aux.n_max = sys.n_max;
  const int nsing = sys.spec.num_singularities();
  aux.R.resize(sys.n_max + 1, nsing);
  aux.r.resize(sys.n_max + 1, nsing);
  for (int n = 0; n <= sys.n_max; ++n) {
    for (int j = 0; j < nsing; ++j) {
      aux.R(n, j) = aux_integral_direct(sys, n, j, AuxKind::R);
      aux.r(n, j) = aux_integral_direct(sys, n, j, AuxKind::r);
    }
  }
  return aux;
}

std::vector<ResidualReport> verify_section3(const OrthoSystem& sys, const AuxQuantities& aux,
                                            int n, const Real& tol) {
  if (n < 1 || n + 1 > aux.n_max || n + 1 > sys.n_max)
    throw BadConfig("verify_section3 needs auxiliary data at degrees n-1, n, n+1");
  const int nsing = sys.spec.num_singularities();
  const Real alpha_n = sys.alpha[n];
  const Real beta_n = sys.beta[n];
  const Real beta_n1 = sys.beta[n + 1];

  std::vector<ResidualReport> reps;
  const Real sumR = aux.R.row(n).sum();
  const Real sumr = aux.r.row(n).sum();

  reps.push_back(make_report("alpha-sum-rule", "2 alpha_n = sum_j R_{n,j}", n, -1,
                             abs(2 * alpha_n - sumR) / scale_of({2 * alpha_n, sumR}), tol));
  reps.push_back(make_report("beta-sum-rule", "n + sum_j r_{n,j} = 2 beta_n", n, -1,
                             abs(Real(n) + sumr - 2 * beta_n) / scale_of({Real(n), sumr, 2 * beta_n}),
                             tol));
  reps.push_back(make_report("alpha-from-aux", "alpha_n = sum_j R_{n,j} / 2", n, -1,
                             abs(alpha_n - sumR / 2) / scale_of({alpha_n, sumR / 2}), tol));
  reps.push_back(make_report("beta-from-aux", "beta_n = n/2 + sum_j r_{n,j} / 2", n, -1,
                             abs(beta_n - Real(n) / 2 - sumr / 2) /
                                 scale_of({beta_n, Real(n) / 2, sumr / 2}),
                             tol));

  Real agg_lhs1 = 0, agg_rhs1 = 0, agg_lhs2 = 0, agg_rhs2 = 0, agg_scale1 = 1, agg_scale2 = 1;
  for (int j = 0; j < nsing; ++j) {
    const Real tj = sys.spec.ts[j];
    const Real gj = sys.spec.gammas[j];
    const Real Rm = aux.R(n - 1, j), Rn = aux.R(n, j), Rp = aux.R(n + 1, j);
    const Real rn = aux.r(n, j), rp = aux.r(n + 1, j);

    {
      const Real lhs = rp + rn;
      const Real rhs = (tj - alpha_n) * Rn + gj;
      reps.push_back(make_report("r-recurrence",
                                 "r_{n+1,j} + r_{n,j} = (t_j - alpha_n) R_{n,j} + gamma_j", n,
                                 j + 1, abs(lhs - rhs) / scale_of({lhs, rhs}), tol));
      agg_lhs1 += lhs;
      agg_rhs1 += rhs;
      agg_scale1 = max(agg_scale1, max(abs(lhs), abs(rhs)));
    }
    {
      const Real lhs = (tj - alpha_n) * (rp - rn);
      const Real rhs = beta_n1 * Rp - beta_n * Rm;
      reps.push_back(make_report(
          "R-three-term",
          "(t_j - alpha_n)(r_{n+1,j} - r_{n,j}) = beta_{n+1} R_{n+1,j} - beta_n R_{n-1,j}", n,
          j + 1, abs(lhs - rhs) / scale_of({lhs, rhs, beta_n1 * Rp, beta_n * Rm}), tol));
      agg_lhs2 += lhs;
      agg_rhs2 += rhs;
      agg_scale2 = max(agg_scale2, max(abs(lhs), abs(rhs)));
    }
    {
      const Real lhs = rn * rn - gj * rn;
      const Real rhs = beta_n * Rn * Rm;
      reps.push_back(make_report("rr-product",
                                 "r_{n,j}^2 - gamma_j r_{n,j} = beta_n R_{n,j} R_{n-1,j}", n,
                                 j + 1, abs(lhs - rhs) / scale_of({lhs, rhs}), tol));
    }
  }

  {
    const Real lhs = 1 + (aux.r.row(n + 1).sum() - sumr);
    const Real rhs = 2 * (beta_n1 - beta_n);
    reps.push_back(make_report("beta-difference",
                               "1 + sum_j (r_{n+1,j} - r_{n,j}) = 2 (beta_{n+1} - beta_n)", n, -1,
                               abs(lhs - rhs) / scale_of({lhs, rhs}), tol));
  }
  reps.push_back(make_report("r-recurrence-aggregate", "summed over j", n, -1,
                             abs(agg_lhs1 - agg_rhs1) / agg_scale1, tol));
  reps.push_back(make_report("R-three-term-aggregate", "summed over j", n, -1,
                             abs(agg_lhs2 - agg_rhs2) / agg_scale2, tol));
  return reps;
}

ResidualReport verify_p_expression(const OrthoSystem& sys, const AuxQuantities& aux, int n,
                                   const Real& tol) {
  if (n < 0 || n > aux.n_max || n > sys.n_max) throw BadConfig("degree out of range");
  const int nsing = sys.spec.num_singularities();
  const Real thr = breakdown_threshold(sys.spec);
  Real sum_t_r = 0, sum_ratio = 0;
  for (int j = 0; j < nsing; ++j) {
    const Real gj = sys.spec.gammas[j];
    if (gj == 0) continue;  // column is identically zero and drops out
    const Real Rn = aux.R(n, j);
    const Real rn = aux.r(n, j);
    // At symmetric points R and r(r - gamma) both degenerate to quadrature
    // noise and their ratio is meaningless; the identity cannot be checked in
    // this form there.
    if (abs(Rn) < thr)
      throw DegenerateR("R_{n,j} too small to divide by in the p(n) expression (n = " +
                        std::to_string(n) + ", j = " + std::to_string(j + 1) + ")");
    sum_t_r += sys.spec.ts[j] * rn;
    sum_ratio += (rn * rn - gj * rn) / Rn;
  }
  const Real sumR = aux.R.row(n).sum();
  const Real sumr = aux.r.row(n).sum();
  const Real rhs = sum_t_r - (Real(n) + sumr) * sumR / 2 - sum_ratio;
  const Real lhs = sys.p_coeff[n];
  const Real res = abs(lhs - rhs) / scale_of({lhs, sum_t_r, (Real(n) + sumr) * sumR / 2, sum_ratio});
  return make_report("p-from-aux",
                     "p(n) = sum t_j r - (n + sum r)(sum R)/2 - sum (r^2 - g r)/R", n, -1, res,
                     tol);
}

IterationResult iterate_difference_system(const WeightSpec& spec, int n_max, const Vec& seed_R0,
                                          const Vec& seed_R1) {
  validate(spec);
  const int nsing = spec.num_singularities();
  if (seed_R0.size() != nsing || seed_R1.size() != nsing)
    throw BadConfig("seed rows must have one entry per singularity");
  if (n_max < 1) throw BadConfig("n_max must be at least 1");

  IterationResult out;
  out.aux.n_max = n_max;
  out.aux.provenance = AuxQuantities::Provenance::iterated;
  out.aux.R = Mat::Zero(n_max + 1, nsing);
  out.aux.r = Mat::Zero(n_max + 1, nsing);
  out.completed_n = n_max;

  // Relabel so the division pivot (index 0 here) carries the largest |gamma|.
  std::vector<int> perm(nsing);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    return abs(spec.gammas[a]) > abs(spec.gammas[b]);
  });
  std::vector<int> active;  // relabeled indices with gamma != 0
  for (int k = 0; k < nsing; ++k)
    if (spec.gammas[perm[k]] != 0) active.push_back(k);

  if (active.empty()) return out;  // all-zero fixed point

  Mat R = Mat::Zero(n_max + 1, nsing), r = Mat::Zero(n_max + 1, nsing);
  Vec t(nsing), g(nsing);
  for (int k = 0; k < nsing; ++k) {
    t[k] = spec.ts[perm[k]];
    g[k] = spec.gammas[perm[k]];
    R(0, k) = seed_R0[perm[k]];
    R(1, k) = seed_R1[perm[k]];
  }

  const Real thr = breakdown_threshold(spec);
  const int pivot = active[0];

  // r_{1,j} from the first difference step (r_{0,j} = 0)
  {
    const Real alpha0 = R.row(0).sum() / 2;
    for (int k : active) r(1, k) = (t[k] - alpha0) * R(0, k) + g[k];
  }

  for (int n = 1; n < n_max; ++n) {
    const Real alpha_n = R.row(n).sum() / 2;
    for (int k : active) r(n + 1, k) = (t[k] - alpha_n) * R(n, k) + g[k] - r(n, k);

    const Real pivot_num = r(n + 1, pivot) * (r(n + 1, pivot) - g[pivot]);
    const Real pivot_den = (Real(n + 1) + r.row(n + 1).sum()) * R(n, pivot);
    if (abs(pivot_den) < thr) {
      out.completed_n = n;
      out.halt = "division breakdown at level " + std::to_string(n + 1) +
                 ": (n + sum r) R_{n,1} below threshold";
      break;
    }
    R(n + 1, pivot) = 2 * pivot_num / pivot_den;

    bool broke = false;
    for (int k : active) {
      if (k == pivot) continue;
      const Real den = pivot_num * R(n, k);
      if (abs(den) < thr) {
        out.completed_n = n;
        out.halt = "division breakdown at level " + std::to_string(n + 1) +
                   ": r_{n,1}(r_{n,1} - gamma_1) R_{n-1,j} below threshold";
        broke = true;
        break;
      }
      R(n + 1, k) = r(n + 1, k) * (r(n + 1, k) - g[k]) * R(n + 1, pivot) * R(n, pivot) / den;
    }
    if (broke) break;
  }

  // Undo the relabeling; zero out anything past the completed level.
  for (int n = 0; n <= out.completed_n; ++n) {
    for (int k = 0; k < nsing; ++k) {
      out.aux.R(n, perm[k]) = R(n, k);
      out.aux.r(n, perm[k]) = r(n, k);
    }
  }
  return out;
}

}  // namespace fhg
