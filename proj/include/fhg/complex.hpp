#pragma once

#include "fhg/real.hpp"

namespace fhg {

// Minimal complex value over an arbitrary scalar. std::complex is only
// specified for the builtin floating types, so we keep our own; the mpfr
// exponent range is wide enough that the naive division formula is safe.
template <class T>
struct Cx {
  T re{};
  T im{};

  Cx() = default;
  Cx(T r) : re(std::move(r)) {}
  Cx(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cx& operator-=(const Cx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Cx& operator*=(const Cx& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Cx& operator/=(const Cx& o) {
    T d = o.re * o.re + o.im * o.im;
    T r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = r;
    return *this;
  }
};

template <class T> Cx<T> operator+(Cx<T> a, const Cx<T>& b) { return a += b; }
template <class T> Cx<T> operator-(Cx<T> a, const Cx<T>& b) { return a -= b; }
template <class T> Cx<T> operator*(Cx<T> a, const Cx<T>& b) { return a *= b; }
template <class T> Cx<T> operator/(Cx<T> a, const Cx<T>& b) { return a /= b; }

template <class T> Cx<T> operator+(Cx<T> a, const T& b) { return a += Cx<T>(b); }
template <class T> Cx<T> operator-(Cx<T> a, const T& b) { return a -= Cx<T>(b); }
template <class T> Cx<T> operator*(Cx<T> a, const T& b) { a.re *= b; a.im *= b; return a; }
template <class T> Cx<T> operator/(Cx<T> a, const T& b) { a.re /= b; a.im /= b; return a; }
template <class T> Cx<T> operator+(const T& a, Cx<T> b) { return b += Cx<T>(a); }
template <class T> Cx<T> operator-(const T& a, const Cx<T>& b) { return Cx<T>(a) - b; }
template <class T> Cx<T> operator*(const T& a, Cx<T> b) { b.re *= a; b.im *= a; return b; }
template <class T> Cx<T> operator/(const T& a, const Cx<T>& b) { return Cx<T>(a) / b; }

template <class T> Cx<T> operator-(Cx<T> a) {
  a.re = -a.re;
  a.im = -a.im;
  return a;
}

template <class T> bool operator==(const Cx<T>& a, const Cx<T>& b) { return a.re == b.re && a.im == b.im; }

template <class T> Cx<T> conj(Cx<T> a) {
  a.im = -a.im;
  return a;
}

template <class T> T norm(const Cx<T>& a) { return a.re * a.re + a.im * a.im; }

template <class T> T abs(const Cx<T>& a) {
  using std::sqrt;
  return sqrt(norm(a));
}

using Complex = Cx<Real>;

// Magnitude helper usable uniformly on Real and Complex residual terms.
inline Real magnitude(const Real& x) { return abs(x); }
inline Real magnitude(const Complex& z) { return abs(z); }

}  // namespace fhg
