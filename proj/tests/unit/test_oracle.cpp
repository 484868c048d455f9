#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pdm/core.hpp"
#include "pdm/oracle.hpp"
#include "pdm/pct.hpp"

using namespace pdm;
using doctest::Approx;

namespace {

const auto kUnit = make_mass_profile("constant", {{"m0", 1.0}});
const auto kZero = make_potential("zero", {});

}  // namespace

TEST_CASE("diagonal matrix") {
  oracle::TridiagonalOperator op;
  op.diagonal = {3.0, 1.0, 2.0};
  op.off_diagonal = {0.0, 0.0};
  const auto e = oracle::tridiagonal_eigenvalues(op);
  REQUIRE(e.size() == 3);
  CHECK(e[0] == 1.0);
  CHECK(e[1] == 2.0);
  CHECK(e[2] == 3.0);
}

TEST_CASE("constant mass gives the standard three-point stencil") {
  const Grid1D grid(0.0, 1.0, 5);
  const double h = grid.spacing();
  for (const auto& p : {OrderingPreset::li_kuhn(), OrderingPreset::ben_daniel_duke(), OrderingPreset::zhu_kroemer()}) {
    const auto op = oracle::vonroos_matrix(kUnit, kZero, p.params, grid);
    REQUIRE(op.size() == 3);
    for (double d : op.diagonal) CHECK(d == Approx(1.0 / (h * h)).epsilon(1e-14));
    for (double o : op.off_diagonal) CHECK(o == Approx(-0.5 / (h * h)).epsilon(1e-14));
  }
}

TEST_CASE("constant mass matrices do not depend on the ordering") {
  const auto m = make_mass_profile("constant", {{"m0", 1.7}});
  const auto v = make_potential("harmonic", {{"k", 0.4}});
  const Grid1D grid(-3.0, 3.0, 61);
  const auto ref = oracle::vonroos_matrix(m, v, OrderingPreset::li_kuhn().params, grid);
  for (const auto& ord : {OrderingPreset::ben_daniel_duke().params, OrderingPreset::zhu_kroemer().params,
                          OrderingParams(0.3, -0.8)}) {
    const auto op = oracle::vonroos_matrix(m, v, ord, grid);
    for (std::size_t i = 0; i < op.size(); ++i) CHECK(std::abs(op.diagonal[i] - ref.diagonal[i]) <= 1e-14 * ref.diagonal[i]);
    for (std::size_t i = 0; i + 1 < op.size(); ++i)
      CHECK(std::abs(op.off_diagonal[i] - ref.off_diagonal[i]) <= 1e-14 * std::abs(ref.off_diagonal[i]));
  }
}

TEST_CASE("particle in a box") {
  const Grid1D grid(0.0, 1.0, 4000);
  const auto e = oracle::tridiagonal_eigenvalues(oracle::vonroos_matrix(kUnit, kZero, OrderingParams(), grid));
  for (int n = 1; n <= 5; ++n) {
    const double exact = n * n * std::numbers::pi * std::numbers::pi / 2.0;
    CHECK(std::abs(e[static_cast<std::size_t>(n - 1)] - exact) / exact <= 1e-4);
  }
}

TEST_CASE("harmonic oscillator") {
  const Grid1D grid(-8.0, 8.0, 4000);
  const auto v = make_potential("harmonic", {{"k", 1.0}});
  const auto e = oracle::tridiagonal_eigenvalues(oracle::vonroos_matrix(kUnit, v, OrderingParams(), grid));
  for (int n = 0; n <= 5; ++n) {
    CHECK(std::abs(e[static_cast<std::size_t>(n)] - (n + 0.5)) / (n + 0.5) <= 1e-5);
  }
}

TEST_CASE("eigenpairs are ordered, orthonormal and solve the operator") {
  const auto m = make_mass_profile("inverse_square", {{"m0", 1.0}, {"a", 1.0}});
  const Grid1D grid(0.5, 4.0, 400);
  const auto op = oracle::vonroos_matrix(m, make_potential("harmonic", {{"k", 0.3}}), OrderingPreset::zhu_kroemer().params, grid);
  const auto sys = oracle::eigensolve(op, 12);
  REQUIRE(sys.values.size() == 12);
  CHECK(std::is_sorted(sys.values.begin(), sys.values.end()));
  for (std::size_t a = 0; a < 12; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < op.size(); ++i) dot += sys.vectors[a][i] * sys.vectors[b][i] * sys.spacing;
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) <= 1e-10);
    }
    const auto hv = op.apply(sys.vectors[a]);
    double res = 0.0;
    for (std::size_t i = 0; i < op.size(); ++i) res = std::max(res, std::abs(hv[i] - sys.values[a] * sys.vectors[a][i]));
    CHECK(res <= 1e-8 * op.norm_bound());
  }
}

TEST_CASE("nearly degenerate pairs stay orthogonal") {
  // Two decoupled copies of the same block give exact pairs.
  oracle::TridiagonalOperator op;
  const int half = 30;
  for (int copy = 0; copy < 2; ++copy)
    for (int i = 0; i < half; ++i) op.diagonal.push_back(2.0 + 0.01 * i);
  for (int i = 0; i + 1 < 2 * half; ++i) op.off_diagonal.push_back(i == half - 1 ? 0.0 : -1.0);
  op.spacing = 1.0;
  const auto sys = oracle::eigensolve(op, 6);
  for (std::size_t a = 0; a < 6; ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < op.size(); ++i) dot += sys.vectors[a][i] * sys.vectors[b][i];
      CHECK(std::abs(dot) <= 1e-10);
    }
  }
}

TEST_CASE("inverse-square mass spectrum matches the reduced problem") {
  const auto m = make_mass_profile("inverse_square", {{"m0", 1.0}, {"a", 1.0}});
  const auto zk = OrderingPreset::zhu_kroemer().params;
  const Grid1D grid(0.5, 4.0, 2000);
  const double e_vr = oracle::tridiagonal_eigenvalues(oracle::vonroos_matrix(m, kZero, zk, grid)).front();
  // V_red is the constant 1/8 and x = ln q, so the reduced problem is a box of length ln 8.
  const double len = std::log(8.0);
  const double e_red = std::numbers::pi * std::numbers::pi / (2.0 * len * len) + 0.125;
  CHECK(std::abs(e_vr - e_red) / e_red <= 1e-3);
}

TEST_CASE("apply form agrees with the matrix") {
  const auto m = make_mass_profile("power_law", {{"rho", 2.0}});
  const Grid1D grid(0.5, 4.0, 50);
  const auto ord = OrderingParams(-0.2, -0.3);
  const auto op = oracle::vonroos_matrix(m, kZero, ord, grid);
  std::vector<double> all(50), interior;
  for (int i = 0; i < 50; ++i) all[static_cast<std::size_t>(i)] = (i == 0 || i == 49) ? 0.0 : std::sin(0.3 * i);
  interior.assign(all.begin() + 1, all.end() - 1);
  const auto a = oracle::vonroos_apply(m, kZero, ord, grid, all);
  const auto b = op.apply(interior);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("non-positive mass is rejected") {
  const auto m = make_mass_profile("power_law", {{"rho", 2.0}});
  CHECK_THROWS(oracle::vonroos_matrix(m, kZero, OrderingParams(), Grid1D(-1.0, 1.0, 10)));
  CHECK_THROWS(oracle::eigensolve(oracle::vonroos_matrix(kUnit, kZero, OrderingParams(), Grid1D(0, 1, 5)), 4));
}
