#include "fhg/real.hpp"

#include "fhg/errors.hpp"

#include <boost/math/constants/constants.hpp>

namespace fhg {

void set_working_precision(unsigned bits) {
  if (bits < 2) throw BadConfig("precision_bits must be at least 2");
  // Boost's knob is in decimal digits; round up until the mpfr precision
  // actually reaches the requested bit count.
  unsigned digits10 = static_cast<unsigned>((static_cast<unsigned long>(bits) * 301u + 999u) / 1000u);
  for (int guard = 0; guard < 8; ++guard) {
    Real::default_precision(digits10);
    if (working_precision_bits() >= bits) return;
    ++digits10;
  }
  throw BadConfig("failed to reach requested precision");
}

unsigned working_precision_bits() {
  Real probe = 0;
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

Real machine_epsilon() {
  Real eps = 1;
  mpfr_div_2ui(eps.backend().data(), eps.backend().data(), working_precision_bits() - 1, MPFR_RNDN);
  return eps;
}

Real pi() {
  return boost::math::constants::pi<Real>();
}

Real sqrt_pi() {
  return sqrt(pi());
}

std::string to_string(const Real& x, unsigned digits) {
  return x.str(digits, std::ios_base::scientific);
}

Real real_from_string(const std::string& s) {
  try {
    return Real(s);
  } catch (const std::exception&) {
    throw BadConfig("cannot parse real number: '" + s + "'");
  }
}

}  // namespace fhg
