#pragma once

// Point canonical transformation: maps a position-dependent-mass problem onto
// a constant-mass one via x = integral of sqrt(m).

#include <complex>
#include <functional>

#include "pdm/core.hpp"

namespace pdm::pct {

/// Adaptive Gauss-Kronrod (7/15) quadrature with an absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10);

/// x(q) = integral_{q_ref}^{q} sqrt(m(q') / reduced_mass) dq'.
double pct_map(const ScalarField1D& m, double q_ref, double q, double reduced_mass = 1.0);

/// Reduced potential at the original coordinate q. Derivatives of m are taken
/// with respect to q.
double reduced_potential(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord, double q,
                         const PhysicalConstants& c = {});

enum class PrefactorConvention {
  MassQuarter,   // psi = phi * m(q)^(1/4)
  FieldQuarter,  // psi = phi * F(q)^(1/4), F the coordinate map itself
};

/// Everything needed to move between the q and x descriptions.
class Reduction {
 public:
  /// The coordinate map is anchored at q_ref; inversion searches [q_lo, q_hi].
  Reduction(ScalarField1D mass, ScalarField1D potential, OrderingParams ord, double q_ref, double q_lo, double q_hi,
            PhysicalConstants constants = {}, double reduced_mass = 1.0);

  double coordinate_map(double q) const;
  double inverse_map(double x) const;
  double reduced_potential_at_q(double q) const;
  double reduced_potential(double x) const { return reduced_potential_at_q(inverse_map(x)); }
  /// F(q), with F' = sqrt(m) (for unit reduced mass F coincides with x(q)).
  double prefactor_field(double q) const { return coordinate_map(q); }
  double weight(PrefactorConvention conv, double q) const;

  double q_ref() const { return q_ref_; }
  double q_lo() const { return q_lo_; }
  double q_hi() const { return q_hi_; }
  const ScalarField1D& mass() const { return mass_; }
  const PhysicalConstants& constants() const { return constants_; }

 private:
  ScalarField1D mass_;
  ScalarField1D potential_;
  OrderingParams ord_;
  double q_ref_;
  double q_lo_;
  double q_hi_;
  PhysicalConstants constants_;
  double reduced_mass_;
};

using WaveFunction = std::function<std::complex<double>(double)>;

/// psi(q) = phi(x(q)) * W(q)^(1/4) where W is selected by the convention.
WaveFunction transport_wavefunction(WaveFunction phi, const Reduction& reduction,
                                    PrefactorConvention conv = PrefactorConvention::MassQuarter);

/// Tabulated Bessel index for m = q^rho / tau^2. Custom orderings have no entry.
double bessel_index(const OrderingPreset& preset, double rho);

/// Coefficient c of the reduced potential c / x^2 for m = q^rho / tau^2, from
/// direct evaluation of the reduced potential at q_sample and the closed-form
/// coordinate map (q_ref = 0).
double centrifugal_coefficient(const OrderingParams& ord, double rho, double tau, double q_sample,
                               const PhysicalConstants& c = {});

/// nu = sqrt(1/4 + 2 c / hbar^2), the index selected by c / x^2 at unit mass.
double bessel_index_from_coefficient(double coefficient, const PhysicalConstants& c = {});

}  // namespace pdm::pct
