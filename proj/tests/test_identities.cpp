#include "fhg/errors.hpp"
#include "fhg/identities.hpp"

#include "common.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace fhg;

namespace {

struct Fixture {
  OrthoSystem sys;
  PVConstants pv;
  AuxQuantities aux;
  Fixture(const WeightSpec& spec, int n_max) {
    BuildOptions fast;
    fast.with_moments = false;
    sys = build_system(spec, n_max, fast);
    pv = compute_pv_constants(spec);
    aux = compute_aux(sys, pv);
  }
};

}  // namespace

TEST_CASE("gaussian limit: identities degenerate to the Hermite recurrence") {
  auto spec = testspec::gaussian();
  Fixture fx(spec, 6);
  // every auxiliary vanishes identically
  CHECK(fx.aux.R.cwiseAbs().maxCoeff() == 0);
  CHECK(fx.aux.r.cwiseAbs().maxCoeff() == 0);
  const auto reps = verify_section3(fx.sys, fx.aux, 3, 1000 * spec.quad_tol);
  for (const auto& rep : reps) {
    CAPTURE(rep.name);
    CHECK(rep.pass);
  }
  // the beta sum rule pins beta_n = n/2 here
  CHECK(oracles::rel_err(fx.sys.beta[3], Real("1.5")) < Real("1e-60"));
}

TEST_CASE("difference identities on the test specs") {
  SUBCASE("single singularity at n = 4") {
    auto spec = testspec::single();
    Fixture fx(spec, 6);
    for (const auto& rep : verify_section3(fx.sys, fx.aux, 4, 1000 * spec.quad_tol)) {
      CAPTURE(rep.name);
      CAPTURE(to_string(rep.residual, 6));
      CHECK(rep.pass);
    }
    CHECK(verify_p_expression(fx.sys, fx.aux, 3, 1000 * spec.quad_tol).pass);
  }
  SUBCASE("two singularities at n = 9") {
    auto spec = testspec::pair();
    Fixture fx(spec, 10);
    for (const auto& rep : verify_section3(fx.sys, fx.aux, 9, 1000 * spec.quad_tol)) {
      CAPTURE(rep.name);
      CHECK(rep.pass);
    }
    CHECK(verify_p_expression(fx.sys, fx.aux, 6, 1000 * spec.quad_tol).pass);
  }
}

TEST_CASE("p expression degenerates at a symmetric point") {
  auto spec = testspec::symmetric();
  Fixture fx(spec, 4);
  // R sits at quadrature-noise level, the ratio r(r-g)/R is meaningless,
  // and the trivial content of the identity is p(n) = 0
  CHECK_THROWS_AS(verify_p_expression(fx.sys, fx.aux, 3, 1000 * spec.quad_tol), DegenerateR);
  CHECK(abs(fx.sys.p_coeff[3]) < Real("1e-50"));
}

TEST_CASE("difference-system iteration") {
  SUBCASE("all-zero fixed point for the gaussian weight") {
    set_working_precision(256);
    auto spec = make_spec({Real("-0.3"), Real("0.7")}, {Real(0), Real(0)});
    const Vec zero = Vec::Zero(2);
    const IterationResult it = iterate_difference_system(spec, 6, zero, zero);
    CHECK(it.completed_n == 6);
    CHECK(it.halt.empty());
    CHECK(it.aux.R.cwiseAbs().maxCoeff() == 0);
    CHECK(it.aux.r.cwiseAbs().maxCoeff() == 0);
  }
  SUBCASE("matches quadrature for the single-singularity spec") {
    auto spec = testspec::single();
    Fixture fx(spec, 10);
    const IterationResult it =
        iterate_difference_system(spec, 10, fx.aux.R.row(0), fx.aux.R.row(1));
    REQUIRE(it.completed_n == 10);
    CHECK(it.aux.provenance == AuxQuantities::Provenance::iterated);
    for (int n = 0; n <= 10; ++n) {
      CHECK(oracles::rel_err(it.aux.R(n, 0), fx.aux.R(n, 0), Real(1)) < Real("1e-12"));
      CHECK(oracles::rel_err(it.aux.r(n, 0), fx.aux.r(n, 0), Real(1)) < Real("1e-12"));
    }
  }
  SUBCASE("matches quadrature for the two-singularity spec") {
    auto spec = testspec::pair();
    Fixture fx(spec, 10);
    const IterationResult it =
        iterate_difference_system(spec, 10, fx.aux.R.row(0), fx.aux.R.row(1));
    REQUIRE(it.completed_n == 10);
    for (int n = 0; n <= 10; ++n) {
      for (int j = 0; j < 2; ++j) {
        CAPTURE(n);
        CAPTURE(j);
        CHECK(oracles::rel_err(it.aux.R(n, j), fx.aux.R(n, j), Real(1)) < Real("1e-12"));
        CHECK(oracles::rel_err(it.aux.r(n, j), fx.aux.r(n, j), Real(1)) < Real("1e-12"));
      }
    }
  }
  SUBCASE("division breakdown halts with partial results") {
    auto spec = testspec::symmetric();
    Fixture fx(spec, 6);
    const IterationResult it =
        iterate_difference_system(spec, 6, fx.aux.R.row(0), fx.aux.R.row(1));
    CHECK(!it.halt.empty());
    CHECK(it.completed_n < 6);
  }
  SUBCASE("gamma-zero columns stay identically zero") {
    set_working_precision(256);
    auto spec = make_spec({Real("-0.3"), Real("0.5")}, {Real(0), Real("1.5")});
    BuildOptions fast;
    fast.with_moments = false;
    const OrthoSystem sys = build_system(spec, 8, fast);
    const PVConstants pv = compute_pv_constants(spec);
    const AuxQuantities aux = compute_aux(sys, pv);
    const IterationResult it = iterate_difference_system(spec, 8, aux.R.row(0), aux.R.row(1));
    REQUIRE(it.completed_n == 8);
    for (int n = 0; n <= 8; ++n) {
      CHECK(it.aux.R(n, 0) == 0);
      CHECK(oracles::rel_err(it.aux.R(n, 1), aux.R(n, 1), Real(1)) < Real("1e-12"));
    }
  }
}

TEST_CASE("report plumbing") {
  set_working_precision(256);
  ResidualReport rep = make_report("alpha-sum-rule", "sum rule", 3, 1, Real("1e-30"), Real("1e-27"));
  CHECK(rep.pass);
  const std::string line = to_line(rep);
  CHECK(line.find("name=alpha-sum-rule") != std::string::npos);
  CHECK(line.find("n=3") != std::string::npos);
  CHECK(line.find("pass=1") != std::string::npos);
  std::vector<ResidualReport> reps = {rep,
                                      make_report("alpha-sum-rule", "", 4, 1, Real("1e-20"), Real("1e-27"))};
  CHECK(!all_pass(reps));
  const auto worst = max_residual_by_name(reps);
  REQUIRE(worst.size() == 1);
  CHECK(worst[0].second == Real("1e-20"));
}
