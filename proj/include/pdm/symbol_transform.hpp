#pragma once

// Discrete theta-symbol transform pair. A kernel <q2|A|q1> and its symbol
// A_theta(q, p) are related by
//   A_theta(q, p) = sum_k dxi e^{i xi_k p / hbar} <q - theta xi_k | A | q + (1 - theta) xi_k>
//   <q2|A|q1>     = (1 / 2 pi hbar) sum_j dp A_theta((1 - theta) q2 + theta q1, p_j) e^{i (q2 - q1) p_j / hbar}
// on a lattice of n separations xi_k = k dxi and n momenta p_j = j dp with
// dp = 2 pi hbar / (n dxi). The two are exact inverses on the lattice.

#include <complex>
#include <functional>
#include <vector>

#include "pdm/core.hpp"

namespace pdm::oracle {

using Kernel = std::function<std::complex<double>(double q2, double q1)>;
using Symbol = std::function<std::complex<double>(double q, double p)>;

class PhaseSpaceLattice {
 public:
  /// Indices run over [-(n/2), n - 1 - n/2]; odd n gives a symmetric lattice.
  PhaseSpaceLattice(double dxi, int count, PhysicalConstants c = {});

  int size() const { return n_; }
  int first_index() const { return first_; }
  double dxi() const { return dxi_; }
  double dp() const { return dp_; }
  double hbar() const { return hbar_; }
  double separation(int slot) const { return (first_ + slot) * dxi_; }
  double momentum(int slot) const { return (first_ + slot) * dp_; }
  std::vector<double> momenta() const;
  double nyquist() const;

 private:
  double dxi_;
  int n_;
  int first_;
  double dp_;
  double hbar_;
};

/// Throws std::domain_error when |p| exceeds the lattice Nyquist momentum.
std::complex<double> discrete_symbol_forward(const Kernel& kernel, const Discretization& th, double q, double p,
                                             const PhaseSpaceLattice& lattice);

/// Forward transform at every lattice momentum.
std::vector<std::complex<double>> discrete_symbol_forward_row(const Kernel& kernel, const Discretization& th, double q,
                                                              const PhaseSpaceLattice& lattice);

std::complex<double> discrete_symbol_inverse(const Symbol& symbol, const Discretization& th, double q2, double q1,
                                             const PhaseSpaceLattice& lattice);

/// Inverse transform at (q - theta xi_k, q + (1 - theta) xi_k) for every lattice
/// separation. The result does not depend on theta: the symbol is only ever
/// sampled at q.
std::vector<std::complex<double>> discrete_symbol_inverse_row(const Symbol& symbol, double q,
                                                              const PhaseSpaceLattice& lattice);

/// Kernel matrix on all nodes of `grid` using the conjugate momentum lattice
/// of the grid itself (dxi = dq, n = grid size). Row-major, entry (i, j) is <q_i|A|q_j>.
std::vector<std::complex<double>> discrete_symbol_inverse_matrix(const Symbol& symbol, const Discretization& th,
                                                                 const Grid1D& grid, const PhysicalConstants& c = {});

/// V(q) delta(q - q') with the lattice delta 1 / dxi at coincident points.
Kernel multiplication_kernel(std::function<double(double)> v, double dxi);

}  // namespace pdm::oracle
