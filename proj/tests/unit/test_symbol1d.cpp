#include <cmath>
#include <complex>

#include "doctest.h"
#include "pdm/core.hpp"
#include "pdm/symbol1d.hpp"

using namespace pdm;
using doctest::Approx;

namespace {

const auto kInvSq = make_mass_profile("inverse_square", {{"m0", 1.0}, {"a", 1.0}});
const auto kZero = make_potential("zero", {});

}  // namespace

TEST_CASE("quantum potential vanishes for Li-Kuhn at the midpoint") {
  const auto m = make_mass_profile("power_law", {{"rho", 3.0}, {"tau", 0.7}});
  for (double q : {0.4, 1.0, 2.5}) {
    CHECK(symbol::quantum_potential(m, OrderingPreset::li_kuhn().params, Discretization(0.5), q) ==
          Approx(0.0).epsilon(1e-14));
    CHECK(symbol::quantum_potential(kInvSq, OrderingPreset::li_kuhn_alt().params, Discretization(0.5), q) ==
          Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("constant mass has no quantum potential and no source") {
  const auto m = make_mass_profile("constant", {{"m0", 2.0}});
  for (double t : {0.0, 0.3, 1.0}) {
    CHECK(symbol::quantum_potential(m, OrderingParams(0.3, -1.7), Discretization(t), 1.1) == 0.0);
    CHECK(symbol::source_term(m, Discretization(t), 1.1) == 0.0);
  }
  const auto v = make_potential("harmonic", {{"k", 3.0}});
  const auto h = symbol::symbol_eval(m, v, OrderingPreset::zhu_kroemer().params, Discretization(0.2), {1.5, -2.0});
  CHECK(h.real() == Approx(4.0 / 4.0 + 1.5 * 1.5 * 1.5));
  CHECK(h.imag() == 0.0);
}

TEST_CASE("Zhu-Kroemer quantum potential for 1/q^2 at the midpoint") {
  const auto zk = OrderingPreset::zhu_kroemer().params;
  const double vq = symbol::quantum_potential(kInvSq, zk, Discretization(0.5), 2.0);
  CHECK(vq == Approx(0.25));
  CHECK(vq == Approx(symbol::effective_potential_weyl(kInvSq, kZero, zk, 2.0)));
}

TEST_CASE("source term") {
  CHECK(symbol::source_term(kInvSq, Discretization(0.0), 1.0) == Approx(-1.0));
  CHECK(symbol::source_term(kInvSq, Discretization(1.0), 1.0) == Approx(1.0));
  CHECK(symbol::source_term(kInvSq, Discretization(0.5), 1.7) == 0.0);
  CHECK(symbol::source_term(kInvSq, Discretization(0.0), 1.0, PhysicalConstants(2.0)) == Approx(-2.0));
}

TEST_CASE("symbol assembles kinetic, source and potential parts") {
  const auto zk = OrderingPreset::zhu_kroemer().params;
  const Discretization post(0.0);
  const auto h = symbol::symbol_eval(kInvSq, kZero, zk, post, {1.0, 1.0});
  CHECK(h.real() == Approx(0.5 + symbol::quantum_potential(kInvSq, zk, post, 1.0)));
  CHECK(h.imag() == Approx(-1.0));

  const auto mid = symbol::symbol_eval(kInvSq, kZero, zk, Discretization(0.5), {0.8, 3.0});
  CHECK(mid.imag() == 0.0);
}

TEST_CASE("closed-form midpoint potentials") {
  const auto bdd = OrderingPreset::ben_daniel_duke().params;
  const auto zk = OrderingPreset::zhu_kroemer().params;
  for (double q : {0.6, 1.0, 3.3}) {
    CHECK(symbol::effective_potential_weyl(kInvSq, kZero, bdd, q) == Approx(0.25));
    CHECK(symbol::effective_potential_weyl(kInvSq, kZero, zk, q) == Approx(0.25));
    CHECK(symbol::effective_potential_weyl(kInvSq, kZero, OrderingPreset::li_kuhn().params, q) == 0.0);
  }
}

TEST_CASE("quantum potential is symmetric under theta -> 1 - theta") {
  const auto m = make_mass_profile("power_law", {{"rho", 2.5}, {"tau", 1.1}});
  const OrderingParams ord(0.2, -0.9);
  for (double t : {0.0, 0.1, 0.37}) {
    for (double q : {0.5, 1.9}) {
      CHECK(symbol::quantum_potential(m, ord, Discretization(t), q) ==
            Approx(symbol::quantum_potential(m, ord, Discretization(1.0 - t), q)).epsilon(1e-13));
    }
  }
}

TEST_CASE("quantum potential scales with hbar squared") {
  const auto zk = OrderingPreset::zhu_kroemer().params;
  const double one = symbol::quantum_potential(kInvSq, zk, Discretization(0.2), 1.3);
  const double three = symbol::quantum_potential(kInvSq, zk, Discretization(0.2), 1.3, PhysicalConstants(3.0));
  CHECK(three == Approx(9.0 * one));
}
