#include "fhg/dynamics.hpp"
#include "fhg/errors.hpp"

#include "common.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace fhg;

namespace {

void check_all(const std::vector<ResidualReport>& reps) {
  for (const auto& rep : reps) {
    CAPTURE(rep.name);
    CAPTURE(rep.n);
    CAPTURE(rep.j);
    CAPTURE(to_string(rep.residual, 6));
    CHECK(rep.pass);
  }
}

const Real kFdTol = Real("1e-13");  // 1e3 * h^2 at the default h = 1e-8

}  // namespace

TEST_CASE("derivative plumbing") {
  auto spec = testspec::single();
  const DerivativeStencil st{Real("1e-8"), 1};
  SUBCASE("constant quantity has zero derivative") {
    const Real d = t_derivative(spec, 1, [](const Bundle&) { return Real(3); }, 0, st);
    CHECK(d == 0);
  }
  SUBCASE("gamma = 0 makes every weight quantity t-independent") {
    auto flat = testspec::gaussian();
    const Real d =
        t_derivative(flat, 2, [](const Bundle& b) { return log(b.sys.h[2]); }, 0, st);
    CHECK(abs(d) < Real("1e-40"));
  }
  SUBCASE("step collisions are refused") {
    set_working_precision(256);
    auto tight = make_spec({Real(0), Real("4e-9")}, {Real(1), Real(1)});
    DeformationFrame frame(tight, 1, st);
    CHECK_THROWS_AS(frame.d_coord([](const Bundle& b) { return b.sys.h[0]; }, 0),
                    StepCollision);
  }
}

TEST_CASE("derivative relations for the recurrence data") {
  SUBCASE("two singularities") {
    auto spec = testspec::pair();
    DeformationFrame frame(spec, 4, DerivativeStencil{Real("1e-8"), 1});
    check_all(verify_lemma41(frame, 3, kFdTol));
    check_all(verify_cross_partials(frame, 3, kFdTol));
  }
  SUBCASE("symmetric point, derivative of the subleading coefficient") {
    auto spec = testspec::symmetric();
    DeformationFrame frame(spec, 3, DerivativeStencil{Real("1e-8"), 1});
    check_all(verify_lemma41(frame, 2, kFdTol));
  }
}

TEST_CASE("toda flow") {
  SUBCASE("gaussian limit is exact") {
    auto spec = testspec::gaussian();
    DeformationFrame frame(spec, 3, DerivativeStencil{Real("1e-8"), 1});
    const auto reps = verify_toda(frame, 2, Real("1e-40"));
    check_all(reps);
  }
  SUBCASE("both test specs") {
    auto one = testspec::single();
    DeformationFrame f1(one, 4, DerivativeStencil{Real("1e-8"), 1});
    check_all(verify_toda(f1, 3, kFdTol));
    auto two = testspec::pair();
    DeformationFrame f2(two, 4, DerivativeStencil{Real("1e-8"), 1});
    check_all(verify_toda(f2, 3, kFdTol));
  }
}

TEST_CASE("riccati flow and the quadratic root identity") {
  auto spec = testspec::single();
  DeformationFrame frame(spec, 5, DerivativeStencil{Real("1e-8"), 1});
  check_all(verify_riccati(frame, 4, kFdTol));
  check_all(verify_quadratic_root(frame, 4, kFdTol));
}

TEST_CASE("second-order flow of R and the single-singularity reductions") {
  auto spec = testspec::single();
  DeformationFrame frame(spec, 4, DerivativeStencil{Real("1e-8"), 1});
  check_all(verify_pde_R(frame, 3, kFdTol));
  check_all(verify_painleve_reduction(frame, 3, kFdTol));
  auto two = testspec::pair();
  DeformationFrame f2(two, 4, DerivativeStencil{Real("1e-8"), 1});
  check_all(verify_pde_R(f2, 3, kFdTol));
}

TEST_CASE("sigma suite") {
  SUBCASE("gaussian limit: sigma vanishes identically") {
    auto spec = testspec::gaussian();
    DeformationFrame frame(spec, 3, DerivativeStencil{Real("1e-8"), 1});
    CHECK(compute_sigma(frame.center().sys, 2) == frame.center().sys.p_coeff[2] * 2);
    CHECK(abs(compute_sigma(frame.center().sys, 2)) < Real("1e-60"));
    const auto reps = verify_sigma_suite(frame, 2, kFdTol, Real("1e-27"));
    check_all(reps);
  }
  SUBCASE("two singularities") {
    auto spec = testspec::pair();
    DeformationFrame frame(spec, 4, DerivativeStencil{Real("1e-8"), 1});
    const auto reps = verify_sigma_suite(frame, 3, kFdTol, Real("1e-27"));
    check_all(reps);
    bool saw_pde = false, saw_disc = false, saw_rec = false;
    for (const auto& rep : reps) {
      if (rep.name == "sigma-pde") saw_pde = true;
      if (rep.name == "sigma-discriminant") saw_disc = true;
      if (rep.name == "sigma-R-reconstruction") saw_rec = true;
    }
    CHECK(saw_pde);
    CHECK(saw_disc);
    CHECK(saw_rec);
  }
  SUBCASE("single-singularity normal form") {
    auto spec = testspec::single();
    DeformationFrame frame(spec, 4, DerivativeStencil{Real("1e-8"), 1});
    check_all(verify_sigma_suite(frame, 3, kFdTol, Real("1e-27")));
    check_all(verify_sigma_form_n1(frame, 3, kFdTol));
  }
}

TEST_CASE("finite differences converge at the expected order") {
  auto spec = testspec::single();
  // plain central differences: order ~ 2
  for (const auto& m : measure_convergence_orders(spec, 2, Real("1e-4"), 0)) {
    CAPTURE(m.name);
    CHECK(m.order > 1.7);
    CHECK(m.order < 2.3);
  }
  // one richardson level: order ~ 4
  for (const auto& m : measure_convergence_orders(spec, 2, Real("1e-3"), 1)) {
    CAPTURE(m.name);
    CHECK(m.order > 3.7);
    CHECK(m.order < 4.3);
  }
}
