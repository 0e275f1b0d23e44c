#include "fhg/weight.hpp"

#include "fhg/errors.hpp"

namespace fhg {

WeightSpec make_spec(const std::vector<Real>& ts, const std::vector<Real>& gammas,
                     unsigned precision_bits, const Real& quad_tol) {
  WeightSpec spec;
  spec.ts = Eigen::Map<const Vec>(ts.data(), static_cast<Eigen::Index>(ts.size()));
  spec.gammas = Eigen::Map<const Vec>(gammas.data(), static_cast<Eigen::Index>(gammas.size()));
  spec.precision_bits = precision_bits;
  spec.quad_tol = quad_tol;
  validate(spec);
  return spec;
}

void validate(const WeightSpec& spec) {
  const int n = spec.num_singularities();
  if (n < 1) throw BadConfig("at least one singularity (t_j, gamma_j) is required");
  if (spec.gammas.size() != spec.ts.size())
    throw BadConfig("ts and gammas must have the same length");
  for (int j = 0; j < n; ++j) {
    if (!(spec.gammas[j] > Real(-1)))
      throw ExponentOutOfRange("gamma[" + std::to_string(j) + "] must exceed -1");
  }
  for (int j = 0; j + 1 < n; ++j) {
    if (!(spec.ts[j] < spec.ts[j + 1]))
      throw DuplicateSingularity("singular points must be strictly increasing");
  }
  if (spec.precision_bits < 64) throw BadConfig("precision_bits must be at least 64");
  if (!(spec.quad_tol > 0)) throw BadConfig("quad_tol must be positive");
}

std::vector<std::string> validate_warnings(const WeightSpec& spec) {
  std::vector<std::string> warnings;
  const Real near = Real("1e-6");
  for (int j = 0; j + 1 < spec.num_singularities(); ++j) {
    if (spec.ts[j + 1] - spec.ts[j] < near)
      warnings.push_back("singular points t[" + std::to_string(j) + "] and t[" +
                         std::to_string(j + 1) + "] are closer than 1e-6; conditioning degrades");
  }
  return warnings;
}

Real eval_weight_skipping(const WeightSpec& spec, const Real& x, int skip_a, int skip_b) {
  Real log_w = -x * x;
  for (int j = 0; j < spec.num_singularities(); ++j) {
    if (j == skip_a || j == skip_b) continue;
    if (spec.gammas[j] == 0) continue;  // exact no-op factor
    const Real d = abs(x - spec.ts[j]);
    if (d == 0) {
      if (spec.gammas[j] > 0) return Real(0);
      throw SingularEvaluation("weight evaluated at singular point with negative exponent");
    }
    log_w += spec.gammas[j] * log(d);
  }
  return exp(log_w);
}

Real eval_weight(const WeightSpec& spec, const Real& x) {
  return eval_weight_skipping(spec, x, -1, -1);
}

}  // namespace fhg
