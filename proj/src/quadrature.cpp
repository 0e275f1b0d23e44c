#include "fhg/quadrature.hpp"

#include "fhg/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

namespace fhg {

namespace {

constexpr int kStartOrder = 32;
constexpr int kMaxOrderDoublings = 12;
constexpr int kMaxOrder = 2048;
constexpr double kMaxPieceLength = 1.5;

// Monic Jacobi recurrence p_{k+1} = (x - a_k) p_k - b_k p_{k-1} for the
// weight (1-x)^alpha (1+x)^beta on (-1,1). b_0 is the total mass.
struct JacobiRecurrence {
  Vec a;
  Vec b;
};

JacobiRecurrence jacobi_recurrence(int m, const Real& alpha, const Real& beta) {
  JacobiRecurrence rec;
  rec.a.resize(m);
  rec.b.resize(m);
  const Real s = alpha + beta;
  rec.a[0] = (beta - alpha) / (s + 2);
  rec.b[0] = pow(Real(2), s + 1) * tgamma(alpha + 1) * tgamma(beta + 1) / tgamma(s + 2);
  for (int k = 1; k < m; ++k) {
    const Real two_k_s = 2 * k + s;
    rec.a[k] = (beta * beta - alpha * alpha) / (two_k_s * (two_k_s + 2));
    if (k == 1) {
      // the (1+alpha+beta) factor cancels; the raw formula is 0/0 at s = -1
      rec.b[1] = 4 * (1 + alpha) * (1 + beta) / ((s + 2) * (s + 2) * (s + 3));
    } else {
      rec.b[k] = 4 * Real(k) * (k + alpha) * (k + beta) * (k + s) /
                 (two_k_s * two_k_s * (two_k_s + 1) * (two_k_s - 1));
    }
  }
  return rec;
}

// p_m(x) and p_m'(x) by forward recurrence.
void eval_monic_jacobi(const JacobiRecurrence& rec, int m, const Real& x, Real& p, Real& dp,
                       Real& p_prev) {
  Real pk = 1, pk1 = 0;    // p_k, p_{k-1}
  Real dk = 0, dk1 = 0;
  for (int k = 0; k < m; ++k) {
    const Real pn = (x - rec.a[k]) * pk - (k > 0 ? rec.b[k] * pk1 : Real(0));
    const Real dn = pk + (x - rec.a[k]) * dk - (k > 0 ? rec.b[k] * dk1 : Real(0));
    pk1 = pk;
    pk = pn;
    dk1 = dk;
    dk = dn;
  }
  p = pk;
  dp = dk;
  p_prev = pk1;
}

QuadRule make_jacobi_rule(int m, const Real& alpha, const Real& beta) {
  const JacobiRecurrence rec = jacobi_recurrence(m, alpha, beta);

  // Double-precision Golub-Welsch for initial node guesses.
  Eigen::VectorXd diag(m), sub(m > 1 ? m - 1 : 1);
  for (int k = 0; k < m; ++k) diag[k] = rec.a[k].convert_to<double>();
  for (int k = 1; k < m; ++k) sub[k - 1] = std::sqrt(rec.b[k].convert_to<double>());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NoConvergence("Golub-Welsch eigen solve failed");

  QuadRule rule;
  rule.alpha = alpha;
  rule.beta = beta;
  rule.mass = rec.b[0];
  rule.nodes.resize(m);
  rule.weights.resize(m);

  const Real tol = ldexp(Real(1), -static_cast<long>(working_precision_bits()) + 6);
  Vec h(m);  // monic norms
  h[0] = rec.b[0];
  for (int k = 1; k < m; ++k) h[k] = h[k - 1] * rec.b[k];

  for (int i = 0; i < m; ++i) {
    Real x = Real(es.eigenvalues()[i]);
    Real p, dp, p_prev;
    bool converged = false;
    for (int it = 0; it < 80; ++it) {
      eval_monic_jacobi(rec, m, x, p, dp, p_prev);
      if (dp == 0) break;
      const Real step = p / dp;
      x -= step;
      if (abs(step) <= tol * (1 + abs(x))) {
        converged = true;
        // one more polish so the weight formula sees a fully settled node
        eval_monic_jacobi(rec, m, x, p, dp, p_prev);
        x -= p / dp;
        break;
      }
    }
    if (!converged) throw NoConvergence("Newton iteration for Jacobi node failed");
    eval_monic_jacobi(rec, m, x, p, dp, p_prev);
    rule.nodes[i] = x;
    rule.weights[i] = h[m - 1] / (dp * p_prev);
  }

  for (int i = 0; i < m; ++i) {
    if (!(rule.weights[i] > 0) || !(rule.nodes[i] > -1) || !(rule.nodes[i] < 1) ||
        (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1])))
      throw NoConvergence("invalid Gauss-Jacobi rule (order " + std::to_string(m) + ")");
  }
  return rule;
}

struct RuleCache {
  std::shared_mutex mutex;
  std::map<std::tuple<int, unsigned, std::string>, std::shared_ptr<const QuadRule>> rules;
};

RuleCache& rule_cache() {
  static RuleCache cache;
  return cache;
}

std::string exponent_key(const Real& alpha, const Real& beta) {
  const unsigned digits = working_precision_bits() / 3 + 4;
  return to_string(alpha, digits) + "|" + to_string(beta, digits);
}

}  // namespace

std::shared_ptr<const QuadRule> jacobi_rule(int order, const Real& alpha, const Real& beta) {
  auto key = std::make_tuple(order, working_precision_bits(), exponent_key(alpha, beta));
  auto& cache = rule_cache();
  {
    std::shared_lock lock(cache.mutex);
    auto it = cache.rules.find(key);
    if (it != cache.rules.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadRule>(make_jacobi_rule(order, alpha, beta));
  std::unique_lock lock(cache.mutex);
  return cache.rules.emplace(std::move(key), std::move(rule)).first->second;
}

PartitionPlan plan_partition(const WeightSpec& spec) {
  PartitionPlan plan;
  const int n = spec.num_singularities();
  const Real margin = 1;
  plan.core_lo = spec.ts[0] - margin;
  plan.core_hi = spec.ts[n - 1] + margin;

  std::vector<Real> breaks;
  breaks.push_back(plan.core_lo);
  for (int j = 0; j < n; ++j) breaks.push_back(spec.ts[j]);
  breaks.push_back(plan.core_hi);

  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Real a = breaks[i], b = breaks[i + 1];
    int left = (i == 0) ? -1 : static_cast<int>(i) - 1;
    int right = (i + 2 == breaks.size()) ? -1 : static_cast<int>(i);
    const int parts = std::max(1, static_cast<int>(
        std::ceil((b - a).convert_to<double>() / kMaxPieceLength)));
    for (int s = 0; s < parts; ++s) {
      Piece piece;
      piece.a = a + (b - a) * s / parts;
      piece.b = a + (b - a) * (s + 1) / parts;
      piece.left_sing = (s == 0) ? left : -1;
      piece.right_sing = (s == parts - 1) ? right : -1;
      plan.core.push_back(piece);
    }
  }
  return plan;
}

PartitionPlan plan_partition_excluding(const WeightSpec& spec, int j, const Real& delta) {
  const int n = spec.num_singularities();
  if (j < 0 || j >= n) throw BadConfig("singularity index out of range");
  if (!(delta > 0)) throw BadConfig("exclusion window must have positive width");
  if (j > 0 && !(spec.ts[j] - delta > spec.ts[j - 1]))
    throw BadConfig("exclusion window touches the previous singularity");
  if (j + 1 < n && !(spec.ts[j] + delta < spec.ts[j + 1]))
    throw BadConfig("exclusion window touches the next singularity");

  PartitionPlan plan;
  const Real margin = 1;
  plan.core_lo = spec.ts[0] - margin;
  if (j == 0) plan.core_lo = min(plan.core_lo, spec.ts[0] - delta - margin);
  plan.core_hi = spec.ts[n - 1] + margin;
  if (j == n - 1) plan.core_hi = max(plan.core_hi, spec.ts[n - 1] + delta + margin);

  struct Break {
    Real x;
    int sing;  // index if this break sits at a t_k, else -1
  };
  std::vector<Break> breaks;
  breaks.push_back({plan.core_lo, -1});
  for (int k = 0; k < n; ++k) {
    if (k == j) {
      breaks.push_back({spec.ts[j] - delta, -1});
      breaks.push_back({spec.ts[j] + delta, -1});
    } else {
      breaks.push_back({spec.ts[k], k});
    }
  }
  breaks.push_back({plan.core_hi, -1});
  std::sort(breaks.begin(), breaks.end(), [](const Break& u, const Break& v) { return u.x < v.x; });

  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Real a = breaks[i].x, b = breaks[i + 1].x;
    const Real mid = (a + b) / 2;
    if (abs(mid - spec.ts[j]) < delta) continue;  // the excluded window
    const int parts = std::max(1, static_cast<int>(
        std::ceil((b - a).convert_to<double>() / kMaxPieceLength)));
    for (int s = 0; s < parts; ++s) {
      Piece piece;
      piece.a = a + (b - a) * s / parts;
      piece.b = a + (b - a) * (s + 1) / parts;
      piece.left_sing = (s == 0) ? breaks[i].sing : -1;
      piece.right_sing = (s == parts - 1) ? breaks[i + 1].sing : -1;
      plan.core.push_back(piece);
    }
  }
  return plan;
}

namespace {

// scale accumulates the node-level absolute mass sum |w_i f(x_i) w(x_i)|, so
// the convergence test stays relative even for integrands that cancel.
template <class V, class Fn>
V eval_piece(const WeightSpec& spec, const Piece& piece, const Fn& f, int order, Real& scale) {
  const Real gl = piece.left_sing >= 0 ? Real(spec.gammas[piece.left_sing]) : Real(0);
  const Real gr = piece.right_sing >= 0 ? Real(spec.gammas[piece.right_sing]) : Real(0);
  const auto rule = jacobi_rule(order, gr, gl);
  const Real c = (piece.a + piece.b) / 2;
  const Real s = (piece.b - piece.a) / 2;
  const Real jac = pow(s, 1 + gl + gr);
  V acc{};
  Real abs_acc = 0;
  for (Eigen::Index i = 0; i < rule->nodes.size(); ++i) {
    const Real x = c + s * rule->nodes[i];
    const Real w_smooth = eval_weight_skipping(spec, x, piece.left_sing, piece.right_sing);
    const V term = f(x) * (rule->weights[i] * w_smooth);
    acc += term;
    abs_acc += magnitude(term);
  }
  scale += abs_acc * jac;
  return acc * jac;
}

// Integrates one tail direction: segments of doubling width starting at the
// core edge, moving outward, until a segment is negligible against `scale`.
template <class V, class Fn>
V eval_tail(const WeightSpec& spec, const PartitionPlan& plan, const Fn& f, int order,
            bool rightward, Real& scale) {
  const auto rule = jacobi_rule(order, Real(0), Real(0));
  V total{};
  Real width = plan.tail_width;
  Real pos = rightward ? plan.core_hi : plan.core_lo;
  for (int seg = 0; seg < plan.max_tail_segments; ++seg) {
    const Real a = rightward ? pos : pos - width;
    const Real b = rightward ? pos + width : pos;
    const Real c = (a + b) / 2;
    const Real s = (b - a) / 2;
    V acc{};
    Real abs_acc = 0;
    for (Eigen::Index i = 0; i < rule->nodes.size(); ++i) {
      const Real x = c + s * rule->nodes[i];
      const V term = f(x) * (rule->weights[i] * eval_weight(spec, x));
      acc += term;
      abs_acc += magnitude(term);
    }
    total += acc * s;
    scale += abs_acc * s;
    pos = rightward ? b : a;
    if (seg >= 1 && abs_acc * s <= spec.quad_tol * scale / 100) return total;
    width *= 2;
  }
  throw NoConvergence("weighted tail did not decay within the segment cap");
}

template <class V, class Fn>
V eval_plan(const WeightSpec& spec, const PartitionPlan& plan, const Fn& f, int order,
            Real& scale) {
  V total{};
  scale = 0;
  for (const Piece& piece : plan.core) total += eval_piece<V>(spec, piece, f, order, scale);
  total += eval_tail<V>(spec, plan, f, order, true, scale);
  total += eval_tail<V>(spec, plan, f, order, false, scale);
  return total;
}

template <class V, class Fn>
V integrate_adaptive(const WeightSpec& spec, const PartitionPlan& plan, const Fn& f) {
  int order = kStartOrder;
  Real scale_prev;
  V prev = eval_plan<V>(spec, plan, f, order, scale_prev);
  for (int k = 0; k < kMaxOrderDoublings && order <= kMaxOrder; ++k) {
    order *= 2;
    Real scale;
    const V cur = eval_plan<V>(spec, plan, f, order, scale);
    if (scale == 0) return cur;  // integrand identically zero on all nodes
    if (magnitude(cur - prev) <= spec.quad_tol * scale) return cur;
    prev = cur;
  }
  throw NoConvergence("weighted quadrature did not stabilize under order doubling");
}

}  // namespace

Real integrate_weighted_plan(const WeightSpec& spec, const PartitionPlan& plan, const RealFn& f) {
  return integrate_adaptive<Real>(spec, plan, f);
}

Complex integrate_weighted_complex_plan(const WeightSpec& spec, const PartitionPlan& plan,
                                        const ComplexFn& f) {
  return integrate_adaptive<Complex>(spec, plan, f);
}

Real integrate_weighted(const WeightSpec& spec, const RealFn& f) {
  return integrate_adaptive<Real>(spec, plan_partition(spec), f);
}

Complex integrate_weighted_complex(const WeightSpec& spec, const ComplexFn& f) {
  return integrate_adaptive<Complex>(spec, plan_partition(spec), f);
}

Real integrate_weighted_excluding(const WeightSpec& spec, const RealFn& f, int j,
                                  const Real& delta) {
  return integrate_adaptive<Real>(spec, plan_partition_excluding(spec, j, delta), f);
}

Real integrate_power_segment(const Real& delta, const Real& gamma_exp, const RealFn& q,
                             const Real& rel_tol) {
  if (!(delta > 0)) throw BadConfig("power segment must have positive width");
  const Real half = delta / 2;
  const Real scale_factor = pow(half, 1 + gamma_exp);
  auto eval_at = [&](int order, Real& scale) {
    const auto rule = jacobi_rule(order, Real(0), gamma_exp);
    Real acc = 0;
    scale = 0;
    for (Eigen::Index i = 0; i < rule->nodes.size(); ++i) {
      const Real u = half * (1 + rule->nodes[i]);
      const Real term = rule->weights[i] * q(u);
      acc += term;
      scale += abs(term);
    }
    scale *= abs(scale_factor);
    return acc * scale_factor;
  };
  int order = kStartOrder;
  Real scale_prev;
  Real prev = eval_at(order, scale_prev);
  for (int k = 0; k < kMaxOrderDoublings && order <= kMaxOrder; ++k) {
    order *= 2;
    Real scale;
    const Real cur = eval_at(order, scale);
    if (scale == 0) return cur;
    if (abs(cur - prev) <= rel_tol * scale) return cur;
    prev = cur;
  }
  throw NoConvergence("singular window quadrature did not stabilize");
}

}  // namespace fhg
