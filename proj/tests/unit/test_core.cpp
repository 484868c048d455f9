#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "doctest.h"
#include "pdm/core.hpp"

using namespace pdm;
using doctest::Approx;

TEST_CASE("mass catalog values and derivatives") {
  const auto inv = make_mass_profile("inverse_square", {{"m0", 1.0}, {"a", 1.0}});
  CHECK(inv.value(2.0) == Approx(0.25).epsilon(1e-15));
  CHECK(inv.d1(2.0) == Approx(-0.25).epsilon(1e-15));
  CHECK(inv.d2(2.0) == Approx(0.375).epsilon(1e-15));

  const auto flat = make_mass_profile("constant", {{"m0", 1.0}});
  for (double q : {-3.0, 0.0, 7.5}) {
    CHECK(flat.value(q) == 1.0);
    CHECK(flat.d1(q) == 0.0);
    CHECK(flat.d2(q) == 0.0);
  }

  const auto pow2 = make_mass_profile("power_law", {{"rho", 2.0}, {"tau", 1.0}});
  CHECK(pow2.value(3.0) == Approx(9.0));
  CHECK(pow2.d1(3.0) == Approx(6.0));
  CHECK(pow2.d2(3.0) == Approx(2.0));
}

TEST_CASE("analytic derivatives agree with central differences") {
  const auto m = make_mass_profile("power_law", {{"rho", 1.5}, {"tau", 1.2}});
  const auto fd = m.with_finite_differences();
  CHECK(fd.mode() == DerivativeMode::FiniteDifference);
  for (double q : {0.7, 1.3, 2.9}) {
    CHECK(fd.d1(q) == Approx(m.d1(q)).epsilon(1e-8));
    CHECK(fd.d2(q) == Approx(m.d2(q)).epsilon(1e-5));
  }
}

TEST_CASE("catalog rejects unknown kinds and bad parameters") {
  CHECK_THROWS_AS(make_mass_profile("gaussian", {}), std::invalid_argument);
  CHECK_THROWS_AS(make_potential("morse", {}), std::invalid_argument);
  CHECK_THROWS(make_mass_profile("constant", {{"m0", -1.0}}));
  CHECK_THROWS(make_mass_profile("inverse_square", {{"m0", 1.0}, {"a", 0.0}}));
}

TEST_CASE("three-point stencils") {
  const auto sq = finite_difference_derivatives([](double q) { return q * q; }, 1.0, 1e-4);
  CHECK(std::abs(sq.d1 - 2.0) <= 1e-7);
  CHECK(std::abs(sq.d2 - 2.0) <= 1e-4);

  const auto c = finite_difference_derivatives([](double) { return 3.25; }, 0.4, 1e-3);
  CHECK(c.d1 == 0.0);
  CHECK(c.d2 == 0.0);

  const auto inv = finite_difference_derivatives([](double q) { return 1.0 / (q * q); }, 2.0, 1e-3);
  CHECK(inv.d1 == Approx(-0.25).epsilon(1e-5));
  CHECK(inv.d2 == Approx(0.375).epsilon(1e-5));
}

TEST_CASE("default step scales with |q| and honours the environment") {
  CHECK(default_fd_step_first(10.0) == Approx(10.0 * default_fd_step_first(0.5)));
  CHECK(default_fd_step_second(-4.0) == Approx(4.0 * default_fd_step_second(1.0)));
  CHECK(default_fd_step_second(1.0) > default_fd_step_first(1.0));

  setenv("PDM_LAB_FD_STEP", "2.5e-3", 1);
  CHECK(default_fd_step_first(7.0) == 2.5e-3);
  CHECK(default_fd_step_second(7.0) == 2.5e-3);
  setenv("PDM_LAB_FD_STEP", "not-a-number", 1);
  CHECK_THROWS(default_fd_step_first(1.0));
  unsetenv("PDM_LAB_FD_STEP");
}

TEST_CASE("ordering presets") {
  const auto lk = OrderingPreset::li_kuhn();
  CHECK(lk.params.alpha() == -0.5);
  CHECK(lk.params.gamma() == 0.0);
  CHECK(lk.params.beta() == -0.5);
  const auto zk = OrderingPreset::from_name("zk");
  CHECK(zk.name == OrderingName::ZhuKroemer);
  CHECK(zk.params.alpha() == -0.5);
  CHECK(zk.params.gamma() == -0.5);
  CHECK(OrderingPreset::from_name("bdd").params.beta() == -1.0);
  CHECK_THROWS_AS(OrderingPreset::from_name("weyl"), std::invalid_argument);
}

TEST_CASE("theta range and the symmetric combination") {
  CHECK_THROWS(Discretization(-0.1));
  CHECK_THROWS(Discretization(1.5));
  for (double t : {0.0, 0.2, 0.5, 0.9}) {
    CHECK(Discretization(t).quadratic() == Approx(Discretization(1.0 - t).quadratic()));
  }
  CHECK(Discretization::midpoint().quadratic() == -0.5);
}

TEST_CASE("grid geometry and singular points") {
  const Grid1D g(0.5, 4.0, 8);
  CHECK(g.spacing() == Approx(0.5));
  CHECK(g[7] == Approx(4.0));
  CHECK(g.nodes().size() == 8);
  CHECK_THROWS(Grid1D(1.0, 1.0, 10));
  CHECK_THROWS(Grid1D(0.0, 1.0, 2));
  CHECK_THROWS(Grid1D(-1.0, 1.0, 11).require_excludes({0.0}));
  CHECK_NOTHROW(g.require_excludes({0.0}));
}

TEST_CASE("checked mass rejects non-positive values") {
  const auto m = ScalarField1D("test", [](double q) { return q; }, [](double) { return 1.0; },
                               [](double) { return 0.0; });
  CHECK(checked_mass(m, 2.0) == 2.0);
  CHECK_THROWS_AS(checked_mass(m, -1.0), std::domain_error);
  CHECK_THROWS_AS(checked_mass(m, 0.0), std::domain_error);
}
