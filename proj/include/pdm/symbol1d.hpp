#pragma once

// Phase-space symbol of the von Roos Hamiltonian for an arbitrary ordering
// (alpha, beta, gamma) and lattice parameter theta.

#include <complex>

#include "pdm/core.hpp"

namespace pdm::symbol {

/// Coefficients of the hbar^2 term in n dimensions:
///   V_Q = hbar^2 / (4 m^3) * (laplacian_coeff * m * lap(m) + gradient_coeff * grad(m).grad(m)).
/// In 1D lap(m) = m'' and grad(m).grad(m) = m'^2.
struct QuantumPotentialCoefficients {
  double laplacian_coeff;
  double gradient_coeff;
};

QuantumPotentialCoefficients quantum_potential_coefficients(const OrderingParams& ord, const Discretization& th);

/// The same bracket with theta fixed at 1/2.
QuantumPotentialCoefficients weyl_coefficients(const OrderingParams& ord);

/// H_theta(q, p) = kinetic_coeff p^2 + i p source + vq + external.
struct SymbolDecomposition {
  double kinetic_coeff;  // 1 / (2 m)
  double source;         // hbar m' (1 - 2 theta) / (2 m^2)
  double vq;
  double external;

  std::complex<double> at(double p) const {
    return {kinetic_coeff * p * p + vq + external, p * source};
  }
  double real_potential() const { return vq + external; }
};

double quantum_potential(const ScalarField1D& m, const OrderingParams& ord, const Discretization& th, double q,
                         const PhysicalConstants& c = {});

double source_term(const ScalarField1D& m, const Discretization& th, double q, const PhysicalConstants& c = {});

SymbolDecomposition decompose(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord,
                              const Discretization& th, double q, const PhysicalConstants& c = {});

std::complex<double> symbol_eval(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord,
                                 const Discretization& th, const PhaseSpacePoint1D& point,
                                 const PhysicalConstants& c = {});

/// Midpoint effective potential, written in its own closed form rather than
/// through quantum_potential so the two can be compared.
double effective_potential_weyl(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord, double q,
                                const PhysicalConstants& c = {});

}  // namespace pdm::symbol
