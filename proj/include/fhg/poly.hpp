#pragma once

#include "fhg/real.hpp"

namespace fhg {

// Dense polynomial helpers; coefficient k is the x^k coefficient.

inline Vec poly_mul(const Vec& a, const Vec& b) {
  Vec c = Vec::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

template <class S>
S poly_eval(const Vec& c, const S& x) {
  S acc = S{} + c[c.size() - 1];
  for (Eigen::Index k = c.size() - 2; k >= 0; --k) acc = acc * x + c[k];
  return acc;
}

// c(y) = q(y) (y - t) + rem, by synthetic division.
inline Vec synthetic_divide(const Vec& c, const Real& t, Real& rem) {
  const Eigen::Index d = c.size() - 1;
  Vec q = Vec::Zero(d > 0 ? d : 1);
  Real carry = c[d];
  for (Eigen::Index k = d - 1; k >= 0; --k) {
    q[k] = carry;
    carry = c[k] + t * carry;
  }
  rem = carry;
  if (d == 0) q[0] = 0;
  return q;
}

}  // namespace fhg
