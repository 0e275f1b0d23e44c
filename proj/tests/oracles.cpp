#include "oracles.hpp"

#include "fhg/poly.hpp"
#include "fhg/quadrature.hpp"

namespace oracles {

using namespace fhg;

Real gauss_moment(int k) {
  if (k % 2 == 1) return Real(0);
  // sqrt(pi) * (k-1)!! / 2^{k/2}
  Real acc = sqrt_pi();
  for (int m = k - 1; m >= 1; m -= 2) acc *= m;
  return acc / pow(Real(2), k / 2);
}

Vec even_exponent_moments(const std::vector<Real>& ts, const std::vector<int>& exponents,
                          int k_max) {
  Vec poly(1);
  poly[0] = 1;
  for (size_t j = 0; j < ts.size(); ++j) {
    Vec factor(2);
    factor[0] = -ts[j];
    factor[1] = 1;
    for (int rep = 0; rep < exponents[j]; ++rep) poly = poly_mul(poly, factor);
  }
  Vec mu(k_max + 1);
  for (int k = 0; k <= k_max; ++k) {
    Real acc = 0;
    for (Eigen::Index m = 0; m < poly.size(); ++m) acc += poly[m] * gauss_moment(static_cast<int>(m) + k);
    mu[k] = acc;
  }
  return mu;
}

Real hermite_h(int n) {
  Real fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  return sqrt_pi() * fact / pow(Real(2), n);
}

Real hermite_beta(int n) { return Real(n) / 2; }

Real gaussian_hankel(int n) {
  Real prod = 1;
  for (int j = 1; j < n; ++j) {
    Real fact = 1;
    for (int k = 2; k <= j; ++k) fact *= k;
    prod *= fact;
  }
  return pow(2 * pi(), Real(n) / 2) * pow(Real(2), -Real(n) * n / 2) * prod;
}

Real monic_hermite(int n, const Real& x) {
  Real prev = 0, cur = 1;
  for (int k = 0; k < n; ++k) {
    const Real next = x * cur - Real(k) / 2 * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Real det3(const Real m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Complex faddeeva_cf(const Complex& z, int terms) {
  // w(z) = (1/sqrt(pi)) / (zeta + (1/2)/(zeta + 1/(zeta + (3/2)/(zeta + ...))))
  // with zeta = -i z (Laplace continued fraction for erfc).
  const Complex zeta{z.im, -z.re};
  Complex tail{};
  for (int k = terms; k >= 1; --k) {
    tail = (Real(k) / 2) / (zeta + tail);
  }
  return Real(1) / (sqrt_pi() * (zeta + tail));
}

namespace {

// integral over [a, b] (0 < a < b) of u^{g-1} s(u) du with s smooth, via
// geometrically graded Gauss-Legendre panels.
Real graded_panels(const Real& a, const Real& b, const Real& g,
                   const std::function<Real(const Real&)>& s) {
  const auto rule = jacobi_rule(96, Real(0), Real(0));
  Real total = 0;
  Real lo = a;
  while (lo < b) {
    const Real hi = min(2 * lo, b);
    const Real c = (lo + hi) / 2, half = (hi - lo) / 2;
    Real acc = 0;
    for (Eigen::Index i = 0; i < rule->nodes.size(); ++i) {
      const Real u = c + half * rule->nodes[i];
      acc += rule->weights[i] * pow(u, g - 1) * s(u);
    }
    total += acc * half;
    lo = hi;
  }
  return total;
}

}  // namespace

Real pv_excision(const WeightSpec& spec, int j) {
  const Real tj = spec.ts[j];
  const Real g = spec.gammas[j];
  Real delta = 1;
  for (int k = 0; k < spec.num_singularities(); ++k)
    if (k != j) delta = min(delta, abs(spec.ts[k] - tj) / 2);

  const Real outside = integrate_weighted_excluding(
      spec, [&](const Real& y) { return 1 / (y - tj); }, j, delta);

  auto smooth = [&](const Real& y) { return eval_weight_skipping(spec, y, j); };

  // E(eps) = outside + ring(eps); extrapolate the known eps^{g+1}, eps^{g+3},
  // eps^{g+5} excision error away.
  const int k_lo = 8, k_hi = 22;
  std::vector<Real> E;
  Real ring = 0;
  Real hi = delta;
  for (int k = 1; k <= k_hi; ++k) {
    const Real lo = delta / pow(Real(2), k);
    ring += graded_panels(lo, hi, g, [&](const Real& u) { return smooth(tj + u); });
    ring -= graded_panels(lo, hi, g, [&](const Real& u) { return smooth(tj - u); });
    hi = lo;
    if (k >= k_lo) E.push_back(outside + ring);
  }
  for (int level = 0; level < 3; ++level) {
    const Real fac = pow(Real(2), g + 1 + 2 * level) - 1;
    std::vector<Real> next;
    for (size_t i = 0; i + 1 < E.size(); ++i)
      next.push_back(E[i + 1] + (E[i + 1] - E[i]) / fac);
    E = std::move(next);
  }
  return E.back();
}

namespace {

Complex gauss15_segment(const std::function<Complex(const Real&)>& f, const Real& a,
                        const Real& b) {
  const auto rule = jacobi_rule(15, Real(0), Real(0));
  const Real c = (a + b) / 2, half = (b - a) / 2;
  Complex acc{};
  for (Eigen::Index i = 0; i < rule->nodes.size(); ++i) {
    const Real y = c + half * rule->nodes[i];
    acc += f(y) * (rule->weights[i] * exp(-y * y));
  }
  return acc * half;
}

Complex bisect(const std::function<Complex(const Real&)>& f, const Real& a, const Real& b,
               const Complex& whole, const Real& abs_tol, int depth) {
  const Real mid = (a + b) / 2;
  const Complex left = gauss15_segment(f, a, mid);
  const Complex right = gauss15_segment(f, mid, b);
  const Complex sum = left + right;
  if (depth > 60 || abs(sum - whole) <= abs_tol) return sum;
  return bisect(f, a, mid, left, abs_tol / 2, depth + 1) +
         bisect(f, mid, b, right, abs_tol / 2, depth + 1);
}

}  // namespace

Complex bisection_gauss_transform(const std::function<Complex(const Real&)>& f, const Real& lim,
                                  const Real& rel_tol) {
  const Complex whole = gauss15_segment(f, -lim, lim);
  const Real abs_tol = rel_tol * max(abs(whole), Real(1));
  return bisect(f, -lim, lim, whole, abs_tol, 0);
}

Real rel_err(const Real& a, const Real& b, const Real& floor) {
  return abs(a - b) / max(abs(b), floor);
}

Real rel_err(const Complex& a, const Complex& b, const Real& floor) {
  return abs(a - b) / max(abs(b), floor);
}

}  // namespace oracles
