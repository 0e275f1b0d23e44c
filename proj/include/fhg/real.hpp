#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <string>

namespace fhg {

// Arbitrary-precision binary float. Plain value semantics (no expression
// templates) so it composes with Eigen and with our own generic code.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

using std::max;
using std::min;

// Sets the working binary precision for all subsequently constructed Real
// values. The setting is process-global; call it once before any numeric
// work (and before spawning workers). Guaranteed to give at least `bits`.
void set_working_precision(unsigned bits);

// Actual binary precision of freshly constructed Reals.
unsigned working_precision_bits();

// 2^(1 - precision), the unit roundoff at the current working precision.
Real machine_epsilon();

Real pi();
Real sqrt_pi();

// Decimal string with `digits` significant digits, deterministic for a given
// value and precision (used for report files and cache keys).
std::string to_string(const Real& x, unsigned digits = 40);

// Parses at current working precision; throws BadConfig on garbage.
Real real_from_string(const std::string& s);

}  // namespace fhg
