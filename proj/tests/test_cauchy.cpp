#include "fhg/cauchy.hpp"
#include "fhg/errors.hpp"

#include "common.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace fhg;
using oracles::rel_err;

TEST_CASE("pv transform") {
  SUBCASE("odd integrand vanishes at a symmetric point") {
    auto spec = testspec::symmetric();
    CHECK(abs(pv_weight_transform(spec, 0)) < Real("1e-40"));
  }
  SUBCASE("even integer exponent reduces to a polynomial moment") {
    set_working_precision(256);
    // (y-1/2)^2/(y-1/2) = y-1/2, so pv = -sqrt(pi)/2 exactly
    auto spec = make_spec({Real("0.5")}, {Real(2)});
    CHECK(rel_err(pv_weight_transform(spec, 0), -sqrt_pi() / 2) < Real("1e-40"));
  }
  SUBCASE("frozen multiprecision references for the two-singularity spec") {
    auto spec = testspec::pair();
    CHECK(rel_err(pv_weight_transform(spec, 0),
                  Real("0.0448359399126672547870718037727374230596524")) < Real("1e-38"));
    CHECK(rel_err(pv_weight_transform(spec, 1),
                  Real("-0.789456113228168309563260389868572719693614")) < Real("1e-38"));
  }
  SUBCASE("excision-extrapolation oracle") {
    auto spec = testspec::pair();
    CHECK(rel_err(pv_weight_transform(spec, 0), oracles::pv_excision(spec, 0)) < Real("1e-25"));
    CHECK(rel_err(pv_weight_transform(spec, 1), oracles::pv_excision(spec, 1)) < Real("1e-25"));
  }
  SUBCASE("negative exponent regime") {
    set_working_precision(256);
    auto spec = make_spec({Real("-0.6"), Real("0.8")}, {Real("-0.5"), Real("1.5")});
    CHECK(rel_err(pv_weight_transform(spec, 0), oracles::pv_excision(spec, 0)) < Real("1e-25"));
  }
  SUBCASE("reflection antisymmetry") {
    set_working_precision(256);
    auto spec = make_spec({Real("-0.6"), Real("0.8")}, {Real("0.5"), Real("1.5")});
    auto mirror = make_spec({Real("-0.8"), Real("0.6")}, {Real("1.5"), Real("0.5")});
    const PVConstants pv = compute_pv_constants(spec);
    const PVConstants pvm = compute_pv_constants(mirror);
    CHECK(abs(pv.pv[0] + pvm.pv[1]) < Real("1e-38") * max(abs(pv.pv[0]), Real(1)));
    CHECK(abs(pv.pv[1] + pvm.pv[0]) < Real("1e-38") * max(abs(pv.pv[1]), Real(1)));
  }
}

TEST_CASE("complex cauchy transform") {
  auto spec = testspec::gaussian();
  SUBCASE("frozen value and continued-fraction oracle at z = i") {
    const Complex v = cauchy_complex(spec, RealFn([](const Real&) { return Real(1); }),
                                     Complex{Real(0), Real(1)});
    const Complex frozen{Real(0), Real("-1.34329342164673517043712359441058977832283")};
    CHECK(abs(v - frozen) < Real("1e-40"));
    // low-precision continued-fraction route: -i pi w(z)
    const Complex w = oracles::faddeeva_cf(Complex{Real(0), Real(1)}, 120);
    const Complex cf = Complex{Real(0), -pi()} * w;
    CHECK(abs(v - cf) < Real("1e-10"));
  }
  SUBCASE("frozen value at an off-axis point") {
    const Complex z{Real("0.3"), Real("1.1")};
    const Complex v = cauchy_complex(spec, RealFn([](const Real&) { return Real(1); }), z);
    const Complex frozen{Real("0.225025974858353125785779812102344737623762"),
                         Real("-1.22530955573240788839955734673672963382668")};
    CHECK(abs(v - frozen) < Real("1e-40"));
    const Complex cf = Complex{Real(0), -pi()} * oracles::faddeeva_cf(z, 160);
    CHECK(abs(v - cf) < Real("1e-9"));
  }
  SUBCASE("schwarz reflection") {
    auto two = testspec::pair();
    const Complex z{Real("0.4"), Real("0.9")};
    const RealFn f = [](const Real& y) { return y * y; };
    const Complex up = cauchy_complex(two, f, z);
    const Complex down = cauchy_complex(two, f, conj(z));
    CHECK(abs(up - conj(down)) < Real("1e-60") * abs(up));
  }
  SUBCASE("large z asymptotics") {
    const Complex far{Real(0), Real("1e6")};
    const Complex v = cauchy_complex(spec, RealFn([](const Real&) { return Real(1); }), far);
    const Complex leading = sqrt_pi() / far;
    CHECK(abs(v - leading) < Real("1e-11") * abs(leading));
  }
  SUBCASE("real axis pole rejected") {
    CHECK_THROWS_AS(cauchy_complex(spec, RealFn([](const Real&) { return Real(1); }),
                                   Complex{Real("0.3"), Real(0)}),
                    RealAxisPole);
  }
}

TEST_CASE("auxiliary integrals") {
  SUBCASE("r at degree zero vanishes by convention") {
    auto spec = testspec::pair();
    const OrthoSystem sys = build_system(spec, 3);
    const PVConstants pv = compute_pv_constants(spec);
    for (int j = 0; j < 2; ++j) {
      CHECK(aux_integral(sys, pv, 0, j, AuxKind::r) == 0);
      CHECK(aux_integral_direct(sys, 0, j, AuxKind::r) == 0);
    }
  }
  SUBCASE("symmetric spec forces the R sum rule to zero") {
    auto spec = testspec::symmetric();
    const OrthoSystem sys = build_system(spec, 6);
    const PVConstants pv = compute_pv_constants(spec);
    for (int n = 0; n <= 6; ++n)
      CHECK(abs(aux_integral(sys, pv, n, 0, AuxKind::R)) < Real("1e-40"));
  }
  SUBCASE("degree zero R reduces to the weight transform") {
    auto spec = testspec::pair();
    const OrthoSystem sys = build_system(spec, 2);
    const PVConstants pv = compute_pv_constants(spec);
    for (int j = 0; j < 2; ++j) {
      const Real expected = spec.gammas[j] / sys.h[0] * pv.pv[j];
      CHECK(rel_err(aux_integral(sys, pv, 0, j, AuxKind::R), expected) < Real("1e-60"));
    }
  }
  SUBCASE("reduction path agrees with direct singular quadrature") {
    auto spec = testspec::pair();
    const OrthoSystem sys = build_system(spec, 6);
    const PVConstants pv = compute_pv_constants(spec);
    for (int n : {1, 3, 5}) {
      for (int j = 0; j < 2; ++j) {
        for (AuxKind kind : {AuxKind::R, AuxKind::r}) {
          const Real a = aux_integral(sys, pv, n, j, kind);
          const Real b = aux_integral_direct(sys, n, j, kind);
          CHECK(abs(a - b) <= 1000 * spec.quad_tol * max(abs(a), Real(1)));
        }
      }
    }
  }
  SUBCASE("gamma zero column is exactly zero") {
    set_working_precision(256);
    auto spec = make_spec({Real("-0.3"), Real("0.4")}, {Real(0), Real(2)});
    const OrthoSystem sys = build_system(spec, 4);
    const PVConstants pv = compute_pv_constants(spec);
    CHECK(aux_integral(sys, pv, 3, 0, AuxKind::R) == 0);
    CHECK(aux_integral_direct(sys, 3, 0, AuxKind::R) == 0);
  }
}
