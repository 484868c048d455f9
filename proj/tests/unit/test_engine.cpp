#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "pdm/core.hpp"
#include "pdm/engine.hpp"
#include "pdm/oracle.hpp"

using namespace pdm;
using cplx = std::complex<double>;
using engine::TimeKind;

namespace {

engine::KernelSpec oscillator() {
  return {make_mass_profile("constant", {{"m0", 1.0}}), make_potential("harmonic", {{"k", 1.0}}), OrderingParams(),
          Discretization(0.5), PhysicalConstants()};
}

engine::KernelSpec pdm_spec(double theta) {
  return {make_mass_profile("power_law", {{"rho", 2.0}}), make_potential("zero", {}),
          OrderingPreset::zhu_kroemer().params, Discretization(theta), PhysicalConstants()};
}

}  // namespace

TEST_CASE("free diagonal kernel") {
  engine::KernelSpec spec{make_mass_profile("constant", {{"m0", 2.0}}), make_potential("zero", {}), OrderingParams(),
                          Discretization(0.3), PhysicalConstants()};
  const double eps = 0.01;
  const cplx k = engine::short_time_kernel(spec, eps, 0.4, 0.4, TimeKind::Real);
  const cplx want = std::sqrt(cplx(2.0 / (2.0 * std::numbers::pi * eps), 0.0) / cplx(0.0, 1.0));
  CHECK(std::abs(k - want) <= 1e-12 * std::abs(want));
  const cplx ki = engine::short_time_kernel(spec, eps, 0.4, 0.4, TimeKind::Imaginary);
  CHECK(std::abs(ki - std::sqrt(2.0 / (2.0 * std::numbers::pi * eps))) <= 1e-12 * std::abs(ki));
}

TEST_CASE("midpoint kernel has no linear term in the step") {
  const auto mid = pdm_spec(0.5);
  const auto post = pdm_spec(0.0);
  for (auto kind : {TimeKind::Imaginary, TimeKind::Real}) {
    const cplx a = engine::short_time_kernel(mid, 0.02, 1.1, 1.0, kind);
    const cplx b = engine::short_time_kernel(mid, 0.02, 1.0, 1.1, kind);
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    const cplx c = engine::short_time_kernel(post, 0.02, 1.1, 1.0, kind);
    const cplx d = engine::short_time_kernel(post, 0.02, 1.0, 1.1, kind);
    CHECK(std::abs(c - d) > 1e-3 * std::abs(c));
  }
}

TEST_CASE("one slice reproduces the short-time kernel") {
  const auto spec = pdm_spec(0.3);
  const Grid1D grid(0.5, 4.0, 41);
  for (auto kind : {TimeKind::Imaginary, TimeKind::Real}) {
    const auto one = engine::compose_propagator({1, 0.05, kind}, grid, spec);
    for (int i = 1; i < 40; i += 7)
      for (int j = 1; j < 40; j += 5) {
        const cplx want = engine::short_time_kernel(spec, 0.05, grid[i], grid[j], kind);
        CHECK(std::abs(one.amplitude(i, j) - want) <= 1e-12 * (std::abs(want) + 1e-300));
      }
    CHECK(one.amplitude(0, 5) == cplx(0.0));
    CHECK(one.amplitude(5, 40) == cplx(0.0));
  }
}

TEST_CASE("composition is a semigroup") {
  const auto spec = oscillator();
  const Grid1D grid(-5.0, 5.0, 81);
  const auto one = engine::build_transfer_matrix(spec, grid, 0.05, TimeKind::Imaginary);
  const auto five = engine::compose(one, 5);
  const auto split = engine::multiply(engine::compose(one, 2), engine::compose(one, 3));
  for (int i = 1; i < 80; i += 9)
    for (int j = 1; j < 80; j += 11) {
      CHECK(std::abs(five.amplitude(i, j) - split.amplitude(i, j)) <= 1e-12 * std::abs(five.amplitude(40, 40)));
    }
}

TEST_CASE("sliced oscillator propagator converges to the spectral sum") {
  const auto spec = oscillator();
  const Grid1D grid(-8.0, 8.0, 401);
  const auto eigs = oracle::eigensolve(oracle::vonroos_matrix(spec.mass, spec.potential, spec.ordering, grid), 80);
  const double tau = 1.0;
  const int f = 212, i = 200;
  const cplx exact = engine::spectral_propagator(eigs, tau, TimeKind::Imaginary, grid[f], grid[i], 80).value;
  double previous = 1e300;
  for (int n : {32, 64, 128, 256}) {
    const auto k = engine::compose_propagator({n, tau, TimeKind::Imaginary}, grid, spec);
    const double err = std::abs(k.amplitude(f, i) - exact) / std::abs(exact);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous <= 5e-3);
}

TEST_CASE("ground state of the oscillator") {
  const auto spec = oscillator();
  const Grid1D grid(-8.0, 8.0, 401);
  const double tau = 5.0;
  const auto k = engine::compose_propagator({200, tau, TimeKind::Imaginary}, grid, spec);
  const auto gs = engine::extract_ground_state(k, tau);
  CHECK(std::abs(gs.energy - 0.5) / 0.5 <= 1e-2);
  double norm = 0.0;
  for (double v : gs.state) norm += v * v * grid.spacing();
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gs.state[200] > 0.0);
  CHECK_THROWS(engine::extract_ground_state(engine::compose_propagator({4, 0.1, TimeKind::Real}, grid, spec), 0.1));
}

TEST_CASE("spectral sum at zero time is the lattice delta") {
  const auto spec = oscillator();
  const Grid1D grid(-4.0, 4.0, 61);
  const auto eigs = oracle::eigensolve(oracle::vonroos_matrix(spec.mass, spec.potential, spec.ordering, grid), 59);
  for (auto kind : {TimeKind::Imaginary, TimeKind::Real}) {
    const auto m = engine::spectral_matrix(eigs, 0.0, kind, 59);
    double worst = 0.0;
    for (int a = 0; a < 59; ++a)
      for (int b = 0; b < 59; ++b) worst = std::max(worst, std::abs(m(a, b) - (a == b ? 1.0 / grid.spacing() : 0.0)));
    CHECK(worst * grid.spacing() <= 1e-8);
  }
  CHECK_THROWS(engine::spectral_propagator(eigs, -1.0, TimeKind::Imaginary, eigs.nodes[3], eigs.nodes[3], 10));
  CHECK_THROWS(engine::spectral_propagator(eigs, 1.0, TimeKind::Imaginary, eigs.nodes[3] + 0.01, eigs.nodes[3], 10));
}

TEST_CASE("box eigenvectors are sampled sines") {
  const Grid1D grid(0.0, 2.0, 801);
  const auto sys = oracle::eigensolve(
      oracle::vonroos_matrix(make_mass_profile("constant", {{"m0", 1.0}}), make_potential("zero", {}), OrderingParams(), grid),
      4);
  for (int n = 1; n <= 4; ++n) {
    const auto& v = sys.vectors[static_cast<std::size_t>(n - 1)];
    const double sign = v[10] > 0.0 ? 1.0 : -1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double want = std::sqrt(2.0 / 2.0) * std::sin(n * std::numbers::pi * sys.nodes[i] / 2.0);
      worst = std::max(worst, std::abs(sign * v[i] - want));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("imaginary-time spectral evolution damps excited states") {
  const auto spec = oscillator();
  const Grid1D grid(-6.0, 6.0, 121);
  const auto eigs = oracle::eigensolve(oracle::vonroos_matrix(spec.mass, spec.potential, spec.ordering, grid), 20);
  std::vector<cplx> mix(eigs.nodes.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = eigs.vectors[0][i] + eigs.vectors[1][i];
  const auto out = engine::spectral_evolve(eigs, 2.0, TimeKind::Imaginary, mix, 20);
  for (std::size_t i = 0; i < mix.size(); ++i) {
    const double want = std::exp(-2.0 * eigs.values[0]) * eigs.vectors[0][i] + std::exp(-2.0 * eigs.values[1]) * eigs.vectors[1][i];
    CHECK(std::abs(out[i] - want) <= 1e-10);
  }
}

TEST_CASE("invalid slicing") {
  CHECK_THROWS((engine::SliceConfig{0, 1.0, TimeKind::Real}.validate()));
  CHECK_THROWS((engine::SliceConfig{4, -1.0, TimeKind::Real}.validate()));
  const Grid1D grid(-1.0, 1.0, 11);
  const auto one = engine::build_transfer_matrix(oscillator(), grid, 0.1, TimeKind::Real);
  std::vector<cplx> state(11, 1.0);
  CHECK(engine::propagate_state(one, state, 0) == state);
  CHECK_THROWS(engine::propagate_state(one, std::vector<cplx>(5), 1));
}

TEST_CASE("coarse slicing is flagged") {
  const Grid1D grid(-8.0, 8.0, 401);
  const auto k = engine::build_transfer_matrix(oscillator(), grid, 2.0, TimeKind::Imaginary);
  CHECK_FALSE(k.warnings.empty());
}

TEST_CASE("unresolved real-time slices are flagged") {
  const auto spec = oscillator();
  auto has = [](const engine::KernelMatrix& k, const std::string& needle) {
    for (const auto& w : k.warnings)
      if (w.find(needle) != std::string::npos) return true;
    return false;
  };
  CHECK(has(engine::build_transfer_matrix(spec, Grid1D(-8.0, 8.0, 401), 1.0 / 256, TimeKind::Real), "phase step"));
  CHECK_FALSE(has(engine::build_transfer_matrix(spec, Grid1D(-2.0, 2.0, 101), 0.5, TimeKind::Real), "phase step"));
  CHECK_FALSE(has(engine::build_transfer_matrix(spec, Grid1D(-8.0, 8.0, 401), 1.0 / 256, TimeKind::Imaginary), "phase step"));
}

TEST_CASE("midpoint imaginary-time slices are real, positive and symmetric") {
  const auto spec = pdm_spec(0.5);
  const auto k = engine::build_transfer_matrix(spec, Grid1D(0.5, 4.0, 61), 0.05, TimeKind::Imaginary);
  for (int i = 1; i < 60; ++i)
    for (int j = 1; j < 60; ++j) {
      CHECK(k.entries(i, j).imag() == 0.0);
      CHECK(k.entries(i, j).real() >= 0.0);
      CHECK(std::abs(k.entries(i, j) - k.entries(j, i)) <= 1e-12 * std::abs(k.entries(i, j)));
    }
}

TEST_CASE("free-particle semigroup") {
  const engine::KernelSpec free{make_mass_profile("constant", {{"m0", 1.0}}), make_potential("zero", {}), OrderingParams(),
                                Discretization(0.0), PhysicalConstants()};
  const Grid1D grid(-6.0, 6.0, 121);
  const auto a = engine::compose_propagator({4, 0.4, TimeKind::Imaginary}, grid, free);
  const auto b = engine::compose_propagator({6, 0.6, TimeKind::Imaginary}, grid, free);
  const auto ab = engine::multiply(a, b);
  const auto direct = engine::compose_propagator({10, 1.0, TimeKind::Imaginary}, grid, free);
  double worst = 0.0, peak = 0.0;
  for (int i = 1; i < 120; ++i)
    for (int j = 1; j < 120; ++j) {
      worst = std::max(worst, std::abs(ab.amplitude(i, j) - direct.amplitude(i, j)));
      peak = std::max(peak, std::abs(direct.amplitude(i, j)));
    }
  CHECK(worst / peak <= 1e-6);
}
