#include "fhg/dynamics.hpp"

#include "fhg/errors.hpp"
#include "fhg/parallel.hpp"

namespace fhg {

namespace {

Real scale_of(std::initializer_list<Real> magnitudes) {
  Real s = 1;
  for (const Real& m : magnitudes) s = max(s, abs(m));
  return s;
}

// Common quantity accessors.
BundleFn q_log_h(int n) {
  return [n](const Bundle& b) { return log(b.sys.h[n]); };
}
BundleFn q_p(int n) {
  return [n](const Bundle& b) { return b.sys.p_coeff[n]; };
}
BundleFn q_alpha(int n) {
  return [n](const Bundle& b) { return b.sys.alpha[n]; };
}
BundleFn q_log_beta(int n) {
  return [n](const Bundle& b) { return log(b.sys.beta[n]); };
}
BundleFn q_R(int n, int j) {
  return [n, j](const Bundle& b) { return b.aux.R(n, j); };
}
BundleFn q_r(int n, int j) {
  return [n, j](const Bundle& b) { return b.aux.r(n, j); };
}
BundleFn q_sigma(int n) {
  return [n](const Bundle& b) { return 2 * b.sys.p_coeff[n]; };
}
BundleFn q_log_D(int n) {
  return [n](const Bundle& b) {
    Real s = 0;
    for (int k = 0; k < n; ++k) s += log(b.sys.h[k]);
    return s;
  };
}

}  // namespace

DeformationFrame::DeformationFrame(WeightSpec spec, int n_max, DerivativeStencil stencil)
    : spec_(std::move(spec)), n_max_(n_max), stencil_(std::move(stencil)) {
  validate(spec_);
  if (!(stencil_.step > 0)) throw BadConfig("stencil step must be positive");
  if (stencil_.richardson < 0 || stencil_.richardson > 1)
    throw BadConfig("richardson level must be 0 or 1");
}

std::shared_ptr<const Bundle> DeformationFrame::build(const std::vector<int>& halfsteps) const {
  WeightSpec shifted = spec_;
  const Real half = stencil_.step / 2;
  for (int k = 0; k < spec_.num_singularities(); ++k)
    shifted.ts[k] += half * halfsteps[k];
  for (int k = 0; k + 1 < spec_.num_singularities(); ++k) {
    if (!(shifted.ts[k] < shifted.ts[k + 1]))
      throw StepCollision("stencil shift crosses a neighbouring singularity");
  }
  auto bundle = std::make_shared<Bundle>();
  BuildOptions opts;
  opts.validate_orthogonality = false;  // interior rebuild; the center system is validated
  opts.with_moments = false;
  bundle->sys = build_system(shifted, n_max_, opts);
  bundle->pv = compute_pv_constants(shifted);
  bundle->aux = compute_aux(bundle->sys, bundle->pv);
  return bundle;
}

const Bundle& DeformationFrame::at(const std::vector<int>& halfsteps) {
  if (static_cast<int>(halfsteps.size()) != spec_.num_singularities())
    throw BadConfig("halfstep vector has wrong length");
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(halfsteps);
    if (it != cache_.end()) return *it->second;
  }
  auto bundle = build(halfsteps);
  std::lock_guard lock(mutex_);
  return *cache_.emplace(halfsteps, std::move(bundle)).first->second;
}

void DeformationFrame::warm_up(bool with_mixed) {
  const int nsing = spec_.num_singularities();
  std::vector<std::vector<int>> keys;
  auto add = [&](std::vector<int> k) { keys.push_back(std::move(k)); };

  add(std::vector<int>(nsing, 0));
  for (int s : {-2, 2, -1, 1}) {
    if ((s == -1 || s == 1) && stencil_.richardson == 0) continue;
    add(std::vector<int>(nsing, s));  // diagonal
    for (int j = 0; j < nsing; ++j) {
      std::vector<int> k(nsing, 0);
      k[j] = s;
      add(k);
    }
  }
  if (with_mixed) {
    for (int j = 0; j < nsing; ++j) {
      for (int sd : {-2, 2}) {
        for (int sj : {-2, 2}) {
          std::vector<int> k(nsing, sd);
          k[j] += sj;
          add(k);
        }
      }
    }
  }

  std::vector<std::vector<int>> missing;
  {
    std::lock_guard lock(mutex_);
    for (auto& k : keys)
      if (!cache_.count(k)) missing.push_back(k);
  }
  std::vector<std::shared_ptr<const Bundle>> built(missing.size());
  parallel_for(static_cast<int>(missing.size()),
               [&](int i) { built[i] = build(missing[i]); });
  std::lock_guard lock(mutex_);
  for (size_t i = 0; i < missing.size(); ++i)
    cache_.emplace(missing[i], std::move(built[i]));
}

namespace {

std::vector<int> offset(int nsing, int diag_halfsteps, int coord = -1, int coord_halfsteps = 0) {
  std::vector<int> k(nsing, diag_halfsteps);
  if (coord >= 0) k[coord] += coord_halfsteps;
  return k;
}

}  // namespace

Real DeformationFrame::d_coord(const BundleFn& f, int j) {
  const int nsing = spec_.num_singularities();
  const Real h = stencil_.step;
  const Real d1 =
      (f(at(offset(nsing, 0, j, 2))) - f(at(offset(nsing, 0, j, -2)))) / (2 * h);
  if (stencil_.richardson == 0) return d1;
  const Real d2 = (f(at(offset(nsing, 0, j, 1))) - f(at(offset(nsing, 0, j, -1)))) / h;
  return (4 * d2 - d1) / 3;
}

Real DeformationFrame::d_diag(const BundleFn& f) {
  const int nsing = spec_.num_singularities();
  const Real h = stencil_.step;
  const Real d1 = (f(at(offset(nsing, 2))) - f(at(offset(nsing, -2)))) / (2 * h);
  if (stencil_.richardson == 0) return d1;
  const Real d2 = (f(at(offset(nsing, 1))) - f(at(offset(nsing, -1)))) / h;
  return (4 * d2 - d1) / 3;
}

Real DeformationFrame::d2_diag(const BundleFn& f) {
  const int nsing = spec_.num_singularities();
  const Real h = stencil_.step;
  const Real f0 = f(center());
  const Real s1 = (f(at(offset(nsing, 2))) - 2 * f0 + f(at(offset(nsing, -2)))) / (h * h);
  if (stencil_.richardson == 0) return s1;
  const Real s2 =
      (f(at(offset(nsing, 1))) - 2 * f0 + f(at(offset(nsing, -1)))) / (h * h / 4);
  return (4 * s2 - s1) / 3;
}

Real DeformationFrame::d_mixed_diag_coord(const BundleFn& f, int j) {
  const int nsing = spec_.num_singularities();
  const Real h = stencil_.step;
  const Real pp = f(at(offset(nsing, 2, j, 2)));
  const Real pm = f(at(offset(nsing, 2, j, -2)));
  const Real mp = f(at(offset(nsing, -2, j, 2)));
  const Real mm = f(at(offset(nsing, -2, j, -2)));
  return (pp - pm - mp + mm) / (4 * h * h);
}

Real t_derivative(const WeightSpec& spec, int n_max, const BundleFn& quantity, int coord,
                  const DerivativeStencil& stencil) {
  DeformationFrame frame(spec, n_max, stencil);
  return coord < 0 ? frame.d_diag(quantity) : frame.d_coord(quantity, coord);
}

Real compute_sigma(const OrthoSystem& sys, int n) {
  if (n < 0 || n > sys.n_max) throw BadConfig("degree out of range");
  return 2 * sys.p_coeff[n];
}

std::vector<ResidualReport> verify_lemma41(DeformationFrame& frame, int n, const Real& tol) {
  const Bundle& c = frame.center();
  const int nsing = frame.spec().num_singularities();
  std::vector<ResidualReport> reps;
  for (int j = 0; j < nsing; ++j) {
    {
      const Real lhs = frame.d_coord(q_log_h(n), j);
      const Real rhs = -c.aux.R(n, j);
      reps.push_back(make_report("dlog-h", "d log h_n / d t_j = -R_{n,j}", n, j + 1,
                                 abs(lhs - rhs) / scale_of({lhs, rhs}), tol));
    }
    {
      const Real lhs = frame.d_coord(q_p(n), j);
      const Real rhs = c.aux.r(n, j);
      reps.push_back(make_report("dp-subleading", "d p(n) / d t_j = r_{n,j}", n, j + 1,
                                 abs(lhs - rhs) / scale_of({lhs, rhs}), tol));
    }
    if (n >= 1) {
      const Real lhs = frame.d_coord(q_log_beta(n), j);
      const Real rhs = c.aux.R(n - 1, j) - c.aux.R(n, j);
      reps.push_back(make_report("dlog-beta", "d log beta_n / d t_j = R_{n-1,j} - R_{n,j}", n,
                                 j + 1, abs(lhs - rhs) / scale_of({lhs, rhs}), tol));
    }
    if (n + 1 <= frame.n_max()) {
      const Real lhs = frame.d_coord(q_alpha(n), j);
      const Real rhs = c.aux.r(n, j) - c.aux.r(n + 1, j);
      reps.push_back(make_report("dalpha", "d alpha_n / d t_j = r_{n,j} - r_{n+1,j}", n, j + 1,
                                 abs(lhs - rhs) / scale_of({lhs, rhs}), tol));
    }
  }
  return reps;
}

std::vector<ResidualReport> verify_cross_partials(DeformationFrame& frame, int n,
                                                  const Real& tol) {
  const int nsing = frame.spec().num_singularities();
  std::vector<ResidualReport> reps;
  for (int j = 0; j < nsing; ++j) {
    for (int k = j + 1; k < nsing; ++k) {
      {
        const Real a = frame.d_coord(q_R(n, k), j);
        const Real b = frame.d_coord(q_R(n, j), k);
        reps.push_back(make_report("cross-partial-R", "d R_{n,k} / d t_j = d R_{n,j} / d t_k", n,
                                   j + 1, abs(a - b) / scale_of({a, b}), tol,
                                   "pair (" + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                                       ")"));
      }
      {
        const Real a = frame.d_coord(q_r(n, k), j);
        const Real b = frame.d_coord(q_r(n, j), k);
        reps.push_back(make_report("cross-partial-r", "d r_{n,k} / d t_j = d r_{n,j} / d t_k", n,
                                   j + 1, abs(a - b) / scale_of({a, b}), tol,
                                   "pair (" + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                                       ")"));
      }
    }
  }
  return reps;
}

std::vector<ResidualReport> verify_toda(DeformationFrame& frame, int n, const Real& tol) {
  const Bundle& c = frame.center();
  std::vector<ResidualReport> reps;
  if (n >= 1) {
    const Real lhs = frame.d_diag(q_log_beta(n));
    const Real rhs = 2 * (c.sys.alpha[n - 1] - c.sys.alpha[n]);
    reps.push_back(make_report("toda-beta", "delta log beta_n = 2 (alpha_{n-1} - alpha_n)", n, -1,
                               abs(lhs - rhs) / scale_of({lhs, rhs}), tol));
  }
  if (n + 1 <= frame.n_max()) {
    const Real lhs = frame.d_diag(q_alpha(n));
    const Real rhs = 1 + 2 * (c.sys.beta[n] - c.sys.beta[n + 1]);
    reps.push_back(make_report("toda-alpha", "delta alpha_n = 1 + 2 (beta_n - beta_{n+1})", n, -1,
                               abs(lhs - rhs) / scale_of({lhs, rhs}), tol));
  }
  return reps;
}

namespace {

Real degenerate_R_threshold(const WeightSpec& spec) {
  // below the quadrature resolution a value is indistinguishable from zero
  return max(pow(Real(10), -static_cast<int>(spec.precision_bits) / 2), spec.quad_tol);
}

}  // namespace

std::vector<ResidualReport> verify_riccati(DeformationFrame& frame, int n, const Real& tol) {
  const Bundle& c = frame.center();
  const WeightSpec& spec = frame.spec();
  const int nsing = spec.num_singularities();
  const Real sumR = c.aux.R.row(n).sum();
  const Real sumr = c.aux.r.row(n).sum();
  std::vector<ResidualReport> reps;
  for (int j = 0; j < nsing; ++j) {
    const Real R = c.aux.R(n, j);
    const Real r = c.aux.r(n, j);
    const Real g = spec.gammas[j];
    const Real t = spec.ts[j];
    {
      const Real lhs = frame.d_diag(q_R(n, j));
      const Real rhs = 4 * r - (2 * t - sumR) * R - 2 * g;
      reps.push_back(make_report(
          "riccati-R", "delta R = 4 r - (2 t_j - sum R) R - 2 gamma_j", n, j + 1,
          abs(lhs - rhs) / scale_of({lhs, 4 * r, (2 * t - sumR) * R, 2 * g}), tol));
    }
    {
      if (g != 0 && abs(R) < degenerate_R_threshold(spec))
        throw DegenerateR("R_{n,j} too small for the r flow at n = " + std::to_string(n));
      if (g == 0) continue;  // column identically zero; the flow is trivial
      const Real lhs = frame.d_diag(q_r(n, j));
      const Real rhs = 2 * r * (r - g) / R - (Real(n) + sumr) * R;
      reps.push_back(make_report(
          "riccati-r", "delta r = 2 r (r - gamma_j) / R - (n + sum r) R", n, j + 1,
          abs(lhs - rhs) / scale_of({lhs, 2 * r * (r - g) / R, (Real(n) + sumr) * R}), tol));
    }
  }
  return reps;
}

std::vector<ResidualReport> verify_quadratic_root(DeformationFrame& frame, int n,
                                                  const Real& tol) {
  const Bundle& c = frame.center();
  const WeightSpec& spec = frame.spec();
  const Real sumr = c.aux.r.row(n).sum();
  std::vector<ResidualReport> reps;
  for (int j = 0; j < spec.num_singularities(); ++j) {
    if (spec.gammas[j] == 0) continue;
    const Real R = c.aux.R(n, j);
    const Real r = c.aux.r(n, j);
    const Real dr = frame.d_diag(q_r(n, j));
    const Real t1 = (Real(n) + sumr) * R * R;
    const Real t2 = dr * R;
    const Real t3 = 2 * r * (r - spec.gammas[j]);
    reps.push_back(make_report("R-quadratic-root",
                               "(n + sum r) R^2 + (delta r) R - 2 r (r - gamma_j) = 0", n, j + 1,
                               abs(t1 + t2 - t3) / scale_of({t1, t2, t3}), tol));
  }
  return reps;
}

std::vector<ResidualReport> verify_pde_R(DeformationFrame& frame, int n, const Real& tol) {
  const Bundle& c = frame.center();
  const WeightSpec& spec = frame.spec();
  const int nsing = spec.num_singularities();
  const Real sumR = c.aux.R.row(n).sum();
  std::vector<ResidualReport> reps;

  Real coupling = 0;  // sum_k ((t_k - sum R / 2) R_k + gamma_k)
  for (int k = 0; k < nsing; ++k)
    coupling += (spec.ts[k] - sumR / 2) * c.aux.R(n, k) + spec.gammas[k];

  for (int j = 0; j < nsing; ++j) {
    if (spec.gammas[j] == 0) {
      reps.push_back(make_report("R-pde", "second-order flow of R_{n,j}", n, j + 1, Real(0), tol,
                                 "skipped: gamma_j = 0 makes R identically zero"));
      continue;
    }
    const Real R = c.aux.R(n, j);
    if (abs(R) < degenerate_R_threshold(spec))
      throw DegenerateR("R_{n,j} too small for the second-order flow");
    const Real dR = frame.d_diag(q_R(n, j));
    const Real d2R = frame.d2_diag(q_R(n, j));
    const Real tj_term = spec.ts[j] - sumR / 2;
    const Real lhs = d2R / 2;
    const Real t1 = dR * dR / (4 * R);
    const Real t2 = coupling * R;
    const Real t3 = tj_term * tj_term * R;
    const Real t4 = (2 * n + 1) * R;
    const Real t5 = spec.gammas[j] * spec.gammas[j] / R;
    const Real rhs = t1 - t2 + t3 - t4 - t5;
    reps.push_back(make_report("R-pde", "second-order flow of R_{n,j}", n, j + 1,
                               abs(lhs - rhs) / scale_of({lhs, t1, t2, t3, t4, t5}), tol));
  }
  return reps;
}

std::vector<ResidualReport> verify_painleve_reduction(DeformationFrame& frame, int n,
                                                      const Real& tol) {
  const WeightSpec& spec = frame.spec();
  if (spec.num_singularities() != 1)
    throw BadConfig("the single-singularity reduction needs N = 1");
  const Bundle& c = frame.center();
  const Real g = spec.gammas[0];
  const Real t1 = spec.ts[0];
  const Real R = c.aux.R(n, 0);
  if (g == 0 || abs(R) < degenerate_R_threshold(spec))
    throw DegenerateR("R_{n,1} degenerate in the single-singularity reduction");
  const Real dR = frame.d_diag(q_R(n, 0));
  const Real d2R = frame.d2_diag(q_R(n, 0));

  std::vector<ResidualReport> reps;
  {
    // R'' = R'^2/(2R) - ((2 t - R) R + 2 g) R + 2 (t - R/2)^2 R - 2(2n+1) R - 2 g^2 / R
    const Real a1 = dR * dR / (2 * R);
    const Real a2 = ((2 * t1 - R) * R + 2 * g) * R;
    const Real a3 = 2 * (t1 - R / 2) * (t1 - R / 2) * R;
    const Real a4 = 2 * (2 * n + 1) * R;
    const Real a5 = 2 * g * g / R;
    const Real rhs = a1 - a2 + a3 - a4 - a5;
    reps.push_back(make_report("R-ode-single-t", "second-order ODE for R_{n,1}(t_1)", n, 1,
                               abs(d2R - rhs) / scale_of({d2R, a1, a2, a3, a4, a5}), tol));
  }
  {
    // After t -> -t_1: Rq'' = Rq'^2/(2Rq) + 3/2 Rq^3 + 4 t Rq^2
    //                        + 2 (t^2 - 2n - 1 - g) Rq - 2 g^2 / Rq
    const Real t = -t1;
    const Real Rq = R;
    const Real dRq = -dR;
    const Real d2Rq = d2R;
    const Real b1 = dRq * dRq / (2 * Rq);
    const Real b2 = Real(3) / 2 * Rq * Rq * Rq;
    const Real b3 = 4 * t * Rq * Rq;
    const Real b4 = 2 * (t * t - 2 * n - 1 - g) * Rq;
    const Real b5 = 2 * g * g / Rq;
    const Real rhs = b1 + b2 + b3 + b4 - b5;
    reps.push_back(make_report("painleve4-R", "Painleve IV normal form after t -> -t", n, 1,
                               abs(d2Rq - rhs) / scale_of({d2Rq, b1, b2, b3, b4, b5}), tol));
  }
  return reps;
}

std::vector<ResidualReport> verify_sigma_suite(DeformationFrame& frame, int n, const Real& tol_fd,
                                               const Real& tol_alg) {
  const Bundle& c = frame.center();
  const WeightSpec& spec = frame.spec();
  const int nsing = spec.num_singularities();
  std::vector<ResidualReport> reps;

  const Real sigma = compute_sigma(c.sys, n);

  if (n >= 1) {
    const Real sigma_det = frame.d_diag(q_log_D(n));
    reps.push_back(make_report("sigma-via-det", "delta log D_n matches 2 p(n)", n, -1,
                               abs(sigma_det - sigma) / scale_of({sigma_det, sigma}), tol_fd));
  }

  // sigma through the auxiliaries
  {
    bool degenerate = false;
    Real sum_t_r = 0, sum_ratio = 0;
    for (int j = 0; j < nsing; ++j) {
      if (spec.gammas[j] == 0) continue;
      if (abs(c.aux.R(n, j)) < degenerate_R_threshold(spec)) {
        degenerate = true;
        break;
      }
      const Real r = c.aux.r(n, j);
      sum_t_r += spec.ts[j] * r;
      sum_ratio += (r * r - spec.gammas[j] * r) / c.aux.R(n, j);
    }
    if (degenerate) {
      reps.push_back(make_report("sigma-via-aux", "sigma from the auxiliaries", n, -1, Real(0),
                                 tol_alg, "skipped: degenerate R"));
    } else {
      const Real sumR = c.aux.R.row(n).sum();
      const Real sumr = c.aux.r.row(n).sum();
      const Real sigma_aux = 2 * sum_t_r - (Real(n) + sumr) * sumR - 2 * sum_ratio;
      reps.push_back(make_report("sigma-via-aux", "sigma from the auxiliaries", n, -1,
                                 abs(sigma_aux - sigma) / scale_of({sigma_aux, sigma}), tol_alg));
    }
  }

  const Real delta_sigma = frame.d_diag(q_sigma(n));
  const Real denom = 2 * n + delta_sigma;
  if (abs(denom) < Real("1e-8") * scale_of({Real(2 * n), delta_sigma}))
    throw DegenerateDenominator("2n + delta sigma_n vanishes; R cannot be reconstructed");

  Real sqrt_sum = 0;       // sum_j sgn_j sqrt(Delta_j)
  Real t_grad_sum = 0;     // sum_j t_j dsigma/dt_j
  bool sgn_degenerate = false;

  for (int j = 0; j < nsing; ++j) {
    const Real ds_j = frame.d_coord(q_sigma(n), j);
    t_grad_sum += spec.ts[j] * ds_j;

    reps.push_back(make_report("sigma-gradient", "r_{n,j} = (d sigma / d t_j) / 2", n, j + 1,
                               abs(2 * c.aux.r(n, j) - ds_j) /
                                   scale_of({2 * c.aux.r(n, j), ds_j}),
                               tol_fd));

    const Real M_j = frame.d_mixed_diag_coord(q_sigma(n), j);
    const Real Delta_j = M_j * M_j + 4 * denom * ds_j * (ds_j - 2 * spec.gammas[j]);
    reps.push_back(make_report("sigma-discriminant", "Delta_j >= 0", n, j + 1,
                               max(Real(0), -Delta_j), Real("1e-20")));

    const Real root = sqrt(max(Delta_j, Real(0)));
    const Real sign_basis = (n >= 1) ? Real(c.aux.R(n, j) + c.aux.R(n - 1, j)) : c.aux.R(n, j);
    Real sgn = sign_basis > 0 ? Real(1) : (sign_basis < 0 ? Real(-1) : Real(0));
    std::string note;
    const Real rec_scale = scale_of({c.aux.R(n, j), M_j / (2 * denom)});
    if (abs(sign_basis) < Real("1e-15") * scale_of({c.aux.R(n, j)})) {
      // ambiguous sign convention; try both and keep the better branch
      const Real rec_plus = (-M_j + root) / (2 * denom);
      const Real rec_minus = (-M_j - root) / (2 * denom);
      sgn = (abs(rec_plus - c.aux.R(n, j)) <= abs(rec_minus - c.aux.R(n, j))) ? Real(1) : Real(-1);
      note = "sign degenerate: |R_n + R_{n-1}| below tolerance, better branch reported";
      sgn_degenerate = true;
    }
    const Real rec = (-M_j + sgn * root) / (2 * denom);
    reps.push_back(make_report("sigma-R-reconstruction",
                               "R_{n,j} from sigma derivatives and the sign convention", n, j + 1,
                               abs(rec - c.aux.R(n, j)) / rec_scale, tol_fd + tol_alg, note));
    sqrt_sum += sgn * root;
  }

  {
    const Real rhs = t_grad_sum - sqrt_sum / 2;
    reps.push_back(make_report(
        "sigma-pde", "sigma = sum t_j (d sigma / d t_j) - sum sgn_j sqrt(Delta_j) / 2", n, -1,
        abs(sigma - rhs) / scale_of({sigma, t_grad_sum, sqrt_sum / 2}), tol_fd,
        sgn_degenerate ? "sign degenerate at some j" : ""));
  }
  return reps;
}

std::vector<ResidualReport> verify_sigma_form_n1(DeformationFrame& frame, int n, const Real& tol) {
  const WeightSpec& spec = frame.spec();
  if (spec.num_singularities() != 1)
    throw BadConfig("the sigma normal form needs N = 1");
  const Bundle& c = frame.center();
  const Real sigma = compute_sigma(c.sys, n);
  const Real ds = frame.d_diag(q_sigma(n));
  const Real d2s = frame.d2_diag(q_sigma(n));
  const Real t1 = spec.ts[0];
  const Real g = spec.gammas[0];

  const Real lhs = d2s * d2s;
  const Real m1 = 4 * (t1 * ds - sigma) * (t1 * ds - sigma);
  const Real m2 = 4 * ds * (ds - 2 * g) * (ds + 2 * n);
  std::vector<ResidualReport> reps;
  reps.push_back(make_report(
      "sigma-form-single-t",
      "(sigma'')^2 = 4 (t_1 sigma' - sigma)^2 - 4 sigma' (sigma' - 2 gamma_1)(sigma' + 2n)", n, 1,
      abs(lhs - m1 + m2) / scale_of({lhs, m1, m2}), tol));
  return reps;
}

std::vector<OrderMeasurement> measure_convergence_orders(const WeightSpec& spec, int n_probe,
                                                         const Real& h_big, int richardson) {
  const int n_max = n_probe + 1;
  DerivativeStencil coarse{h_big, richardson};
  DerivativeStencil fine{h_big / 2, richardson};
  DeformationFrame frame_h(spec, n_max, coarse);
  DeformationFrame frame_h2(spec, n_max, fine);
  frame_h.warm_up(false);
  frame_h2.warm_up(false);

  auto residual_of = [&](DeformationFrame& f, const std::string& which) -> Real {
    if (which == "dlog-h") return verify_lemma41(f, n_probe, Real(1)).front().residual;
    if (which == "toda-beta") return verify_toda(f, n_probe, Real(1)).front().residual;
    if (which == "riccati-R") return verify_riccati(f, n_probe, Real(1)).front().residual;
    if (which == "cross-partial-R")
      return verify_cross_partials(f, n_probe, Real(1)).front().residual;
    throw BadConfig("unknown order probe " + which);
  };

  std::vector<std::string> probes = {"dlog-h", "toda-beta", "riccati-R"};
  if (spec.num_singularities() >= 2) probes.push_back("cross-partial-R");

  std::vector<OrderMeasurement> out;
  for (const auto& name : probes) {
    const Real res_h = residual_of(frame_h, name);
    const Real res_h2 = residual_of(frame_h2, name);
    double order = 0;
    if (res_h > 0 && res_h2 > 0)
      order = (log(res_h) - log(res_h2)).convert_to<double>() / std::log(2.0);
    out.push_back({name, order});
  }
  return out;
}

}  // namespace fhg
