#include "pdm/symbol_transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pdm::oracle {

namespace {

using cplx = std::complex<double>;

cplx phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

PhaseSpaceLattice::PhaseSpaceLattice(double dxi, int count, PhysicalConstants c)
    : dxi_(dxi), n_(count), first_(-(count / 2)), hbar_(c.hbar) {
  if (!(dxi > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  if (count < 1) throw std::invalid_argument("lattice needs at least one point");
  dp_ = 2.0 * std::numbers::pi * hbar_ / (count * dxi);
}

std::vector<double> PhaseSpaceLattice::momenta() const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(j)] = momentum(j);
  return out;
}

double PhaseSpaceLattice::nyquist() const { return std::numbers::pi * hbar_ / dxi_; }

cplx discrete_symbol_forward(const Kernel& kernel, const Discretization& th, double q, double p,
                             const PhaseSpaceLattice& lattice) {
  if (std::abs(p) > lattice.nyquist() * (1.0 + 1e-12)) {
    throw std::domain_error("momentum " + std::to_string(p) + " exceeds the lattice Nyquist limit " +
                            std::to_string(lattice.nyquist()));
  }
  const double theta = th.theta();
  cplx acc = 0.0;
  for (int k = 0; k < lattice.size(); ++k) {
    const double xi = lattice.separation(k);
    acc += kernel(q - theta * xi, q + (1.0 - theta) * xi) * phase(xi * p / lattice.hbar());
  }
  return acc * lattice.dxi();
}

std::vector<cplx> discrete_symbol_forward_row(const Kernel& kernel, const Discretization& th, double q,
                                              const PhaseSpaceLattice& lattice) {
  const double theta = th.theta();
  const int n = lattice.size();
  std::vector<cplx> samples(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double xi = lattice.separation(k);
    samples[static_cast<std::size_t>(k)] = kernel(q - theta * xi, q + (1.0 - theta) * xi);
  }
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double p = lattice.momentum(j);
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
      acc += samples[static_cast<std::size_t>(k)] * phase(lattice.separation(k) * p / lattice.hbar());
    }
    out[static_cast<std::size_t>(j)] = acc * lattice.dxi();
  }
  return out;
}

cplx discrete_symbol_inverse(const Symbol& symbol, const Discretization& th, double q2, double q1,
                             const PhaseSpaceLattice& lattice) {
  const double theta = th.theta();
  const double centre = (1.0 - theta) * q2 + theta * q1;
  const double sep = q2 - q1;
  cplx acc = 0.0;
  for (int j = 0; j < lattice.size(); ++j) {
    const double p = lattice.momentum(j);
    acc += symbol(centre, p) * phase(sep * p / lattice.hbar());
  }
  return acc * (lattice.dp() / (2.0 * std::numbers::pi * lattice.hbar()));
}

std::vector<cplx> discrete_symbol_inverse_row(const Symbol& symbol, double q,
                                              const PhaseSpaceLattice& lattice) {
  const int n = lattice.size();
  std::vector<cplx> values(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) values[static_cast<std::size_t>(j)] = symbol(q, lattice.momentum(j));
  const double norm = lattice.dp() / (2.0 * std::numbers::pi * lattice.hbar());
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    // q2 - q1 = -xi_k for the pair (q - theta xi, q + (1 - theta) xi).
    const double sep = -lattice.separation(k);
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += values[static_cast<std::size_t>(j)] * phase(sep * lattice.momentum(j) / lattice.hbar());
    }
    out[static_cast<std::size_t>(k)] = acc * norm;
  }
  return out;
}

std::vector<cplx> discrete_symbol_inverse_matrix(const Symbol& symbol, const Discretization& th, const Grid1D& grid,
                                                 const PhysicalConstants& c) {
  const int n = grid.size();
  const PhaseSpaceLattice lattice(grid.spacing(), n, c);
  std::vector<cplx> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
          discrete_symbol_inverse(symbol, th, grid[i], grid[j], lattice);
    }
  }
  return out;
}

Kernel multiplication_kernel(std::function<double(double)> v, double dxi) {
  if (!(dxi > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  return [v = std::move(v), dxi](double q2, double q1) -> cplx {
    if (std::abs(q2 - q1) > 1e-9 * dxi) return 0.0;
    return v(0.5 * (q2 + q1)) / dxi;
  };
}

}  // namespace pdm::oracle
