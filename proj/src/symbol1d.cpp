#include "pdm/symbol1d.hpp"

namespace pdm::symbol {

QuantumPotentialCoefficients quantum_potential_coefficients(const OrderingParams& ord, const Discretization& th) {
  const double t = th.quadratic();
  return {t - ord.sum(), -2.0 * (t - ord.product() - ord.sum())};
}

QuantumPotentialCoefficients weyl_coefficients(const OrderingParams& ord) {
  return quantum_potential_coefficients(ord, Discretization::midpoint());
}

double quantum_potential(const ScalarField1D& m, const OrderingParams& ord, const Discretization& th, double q,
                         const PhysicalConstants& c) {
  const double mass = checked_mass(m, q);
  const double m1 = m.d1(q);
  const double m2 = m.d2(q);
  const auto k = quantum_potential_coefficients(ord, th);
  return c.hbar * c.hbar / (4.0 * mass * mass * mass) * (k.laplacian_coeff * mass * m2 + k.gradient_coeff * m1 * m1);
}

double source_term(const ScalarField1D& m, const Discretization& th, double q, const PhysicalConstants& c) {
  const double mass = checked_mass(m, q);
  const double w = 1.0 - 2.0 * th.theta();
  if (w == 0.0) return 0.0;
  return c.hbar * m.d1(q) * w / (2.0 * mass * mass);
}

SymbolDecomposition decompose(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord,
                              const Discretization& th, double q, const PhysicalConstants& c) {
  const double mass = checked_mass(m, q);
  return {0.5 / mass, source_term(m, th, q, c), quantum_potential(m, ord, th, q, c), v.value(q)};
}

std::complex<double> symbol_eval(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord,
                                 const Discretization& th, const PhaseSpacePoint1D& point,
                                 const PhysicalConstants& c) {
  return decompose(m, v, ord, th, point.q, c).at(point.p);
}

double effective_potential_weyl(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord, double q,
                                const PhysicalConstants& c) {
  const double mass = checked_mass(m, q);
  const double r1 = m.d1(q) / mass;
  const double r2 = m.d2(q) / mass;
  const double a = ord.alpha();
  const double g = ord.gamma();
  const double curvature = (1.0 + 2.0 * a + 2.0 * g) * r2;
  const double gradient = 2.0 * (1.0 + 2.0 * a * g + 2.0 * a + 2.0 * g) * r1 * r1;
  return -c.hbar * c.hbar / (8.0 * mass) * (curvature - gradient) + v.value(q);
}

}  // namespace pdm::symbol
