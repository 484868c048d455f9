#pragma once

// Finite-difference von Roos operator and a symmetric tridiagonal eigensolver.
// These form the ground truth the lattice engine and the reduction are
// checked against.

#include <cstddef>
#include <vector>

#include "pdm/core.hpp"

namespace pdm::oracle {

/// Symmetric tridiagonal matrix on a set of equally spaced nodes.
struct TridiagonalOperator {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;  // size n - 1; entry i couples i and i + 1
  std::vector<double> nodes;
  double spacing = 1.0;

  std::size_t size() const { return diagonal.size(); }
  std::vector<double> apply(const std::vector<double>& v) const;
  /// Gershgorin bound on the spectral radius.
  double norm_bound() const;
};

/// Dirichlet discretization on the interior nodes of `grid`:
///   H = 1/4 (m^a p m^b p m^g + m^g p m^b p m^a) + V,
/// each p m^b p realized as a backward difference of m^b at half nodes times a
/// forward difference.
TridiagonalOperator vonroos_matrix(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord,
                                   const Grid1D& grid, const PhysicalConstants& c = {});

/// The same stencil applied to values on every node of `grid` (end nodes
/// included), returning H psi on the interior nodes.
std::vector<double> vonroos_apply(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord,
                                  const Grid1D& grid, const std::vector<double>& values,
                                  const PhysicalConstants& c = {});

/// Unit-mass operator p^2 / 2 + V on an arbitrary uniform grid with V given
/// per interior node.
TridiagonalOperator unit_mass_matrix(const Grid1D& grid, const std::vector<double>& potential_interior,
                                     const PhysicalConstants& c = {});

struct Eigensystem {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // sum |psi|^2 dq = 1
  std::vector<double> nodes;
  double spacing = 1.0;
};

/// All eigenvalues by implicit QL with Wilkinson shifts, ascending.
std::vector<double> tridiagonal_eigenvalues(const TridiagonalOperator& op);

/// Lowest k eigenpairs. Eigenvalues come from implicit QL; eigenvectors from
/// inverse iteration, orthogonalized within clusters.
Eigensystem eigensolve(const TridiagonalOperator& op, std::size_t k);

}  // namespace pdm::oracle
