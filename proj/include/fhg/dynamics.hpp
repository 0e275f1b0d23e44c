#pragma once

#include "fhg/identities.hpp"
#include "fhg/report.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace fhg {

// Central-difference stencil in the singular points. With richardson = 1 a
// single extrapolation level upgrades first and second diagonal/coordinate
// derivatives from O(h^2) to O(h^4); mixed derivatives stay O(h^2).
struct DerivativeStencil {
  Real step = Real("1e-8");
  int richardson = 1;
};

// Everything recomputed from one (possibly shifted) spec.
struct Bundle {
  OrthoSystem sys;
  PVConstants pv;
  AuxQuantities aux;
};

using BundleFn = std::function<Real(const Bundle&)>;

// Cache of perturbed rebuilds keyed by per-coordinate offsets in units of
// step/2. All deformation derivatives read from this cache, so a whole suite
// shares a handful of expensive rebuilds. Bundles are immutable once built.
class DeformationFrame {
 public:
  DeformationFrame(WeightSpec spec, int n_max, DerivativeStencil stencil);

  const WeightSpec& spec() const { return spec_; }
  int n_max() const { return n_max_; }
  const DerivativeStencil& stencil() const { return stencil_; }

  const Bundle& center() { return at(std::vector<int>(spec_.num_singularities(), 0)); }
  const Bundle& at(const std::vector<int>& halfsteps);

  Real d_coord(const BundleFn& f, int j);             // d/dt_j
  Real d_diag(const BundleFn& f);                     // delta = sum_j d/dt_j
  Real d2_diag(const BundleFn& f);                    // delta^2
  Real d_mixed_diag_coord(const BundleFn& f, int j);  // delta (d/dt_j .)

  // Builds every bundle the verification suites touch, in parallel
  // (FH_GAUSS_THREADS caps the pool).
  void warm_up(bool with_mixed);

 private:
  std::shared_ptr<const Bundle> build(const std::vector<int>& halfsteps) const;

  WeightSpec spec_;
  int n_max_;
  DerivativeStencil stencil_;
  std::map<std::vector<int>, std::shared_ptr<const Bundle>> cache_;
  std::mutex mutex_;
};

// Generic numerical t-derivative of a scalar quantity of the spec.
// coord >= 0 selects d/dt_coord; coord = -1 the aggregate direction delta.
Real t_derivative(const WeightSpec& spec, int n_max, const BundleFn& quantity, int coord,
                  const DerivativeStencil& stencil);

// sigma_n = delta log D_n, reported through its cheap algebraic form 2 p(n).
Real compute_sigma(const OrthoSystem& sys, int n);

// Derivative relations d log h_n = -R, d p = r, d log beta = R_- - R,
// d alpha = r - r_+ (per coordinate).
std::vector<ResidualReport> verify_lemma41(DeformationFrame& frame, int n, const Real& tol);

// Equality of mixed partials of R and r across coordinate pairs.
std::vector<ResidualReport> verify_cross_partials(DeformationFrame& frame, int n, const Real& tol);

// Toda equations for the recurrence coefficients under the aggregate flow.
std::vector<ResidualReport> verify_toda(DeformationFrame& frame, int n, const Real& tol);

// First-order (Riccati) flow of R_{n,j} and r_{n,j}.
std::vector<ResidualReport> verify_riccati(DeformationFrame& frame, int n, const Real& tol);

// Quadratic-in-R identity implied by the r flow.
std::vector<ResidualReport> verify_quadratic_root(DeformationFrame& frame, int n, const Real& tol);

// Second-order flow of R_{n,j}.
std::vector<ResidualReport> verify_pde_R(DeformationFrame& frame, int n, const Real& tol);

// Single-singularity reductions of the R flow: the second-order ODE in t_1
// and, after t -> -t, the Painleve IV normal form.
std::vector<ResidualReport> verify_painleve_reduction(DeformationFrame& frame, int n,
                                                      const Real& tol);

// The sigma suite: pairwise agreement of the three sigma computations,
// gradient relation r = (d sigma / d t_j) / 2, discriminant nonnegativity,
// reconstruction of R from sigma derivatives, and the second-order sigma PDE.
// tol_fd bounds finite-difference residuals, tol_alg purely algebraic ones.
std::vector<ResidualReport> verify_sigma_suite(DeformationFrame& frame, int n, const Real& tol_fd,
                                               const Real& tol_alg);

// Single-singularity sigma form:
// (sigma'')^2 = 4 (t_1 sigma' - sigma)^2 - 4 sigma' (sigma' - 2 gamma_1)(sigma' + 2n).
std::vector<ResidualReport> verify_sigma_form_n1(DeformationFrame& frame, int n, const Real& tol);

// Measured convergence order of representative residuals under step halving.
struct OrderMeasurement {
  std::string name;
  double order;
};
std::vector<OrderMeasurement> measure_convergence_orders(const WeightSpec& spec, int n_probe,
                                                         const Real& h_big, int richardson);

}  // namespace fhg
