#pragma once

// Shared domain types: orderings, lattice parameter, scalar fields with
// derivatives, and the uniform 1D grid.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pdm {

struct PhysicalConstants {
  double hbar = 1.0;

  PhysicalConstants() = default;
  explicit PhysicalConstants(double hbar_value);
};

/// von Roos ordering triple. Only alpha and gamma are stored; beta follows from
/// alpha + beta + gamma = -1.
class OrderingParams {
 public:
  constexpr OrderingParams() = default;
  constexpr OrderingParams(double alpha, double gamma) : alpha_(alpha), gamma_(gamma) {}

  constexpr double alpha() const { return alpha_; }
  constexpr double gamma() const { return gamma_; }
  constexpr double beta() const { return -1.0 - alpha_ - gamma_; }

  /// The symbols only ever see these two combinations.
  constexpr double sum() const { return alpha_ + gamma_; }
  constexpr double product() const { return alpha_ * gamma_; }

 private:
  double alpha_ = 0.0;
  double gamma_ = 0.0;
};

enum class OrderingName { LiKuhn, BenDanielDuke, ZhuKroemer, Custom };

struct OrderingPreset {
  OrderingName name = OrderingName::Custom;
  OrderingParams params;

  static OrderingPreset li_kuhn();      // (alpha, gamma) = (-1/2, 0)
  static OrderingPreset li_kuhn_alt();  // (alpha, gamma) = (0, -1/2)
  static OrderingPreset ben_daniel_duke();
  static OrderingPreset zhu_kroemer();
  static OrderingPreset custom(double alpha, double gamma);

  /// Accepts li_kuhn, li_kuhn_alt, bendaniel_duke, zhu_kroemer (and a few
  /// spelling variants). Throws std::invalid_argument otherwise.
  static OrderingPreset from_name(std::string_view name);
};

std::string to_string(OrderingName name);

/// Lattice parameter: 0 postpoint, 1/2 midpoint, 1 prepoint.
class Discretization {
 public:
  explicit Discretization(double theta);
  static Discretization midpoint() { return Discretization(0.5); }

  double theta() const { return theta_; }
  /// 2(theta^2 - theta), the only way theta enters the quantum potential.
  double quadratic() const { return 2.0 * (theta_ * theta_ - theta_); }

 private:
  double theta_;
};

enum class DerivativeMode { Analytic, FiniteDifference };

struct FieldSample {
  double value;
  double d1;
  double d2;
};

/// A real scalar field of one variable with first and second derivatives.
/// Used both for mass profiles and external potentials. Immutable once built.
class ScalarField1D {
 public:
  using Fn = std::function<double(double)>;

  ScalarField1D(std::string kind, Fn value, Fn d1, Fn d2, std::vector<double> singular_points = {});

  /// Derivatives from central differences of `value`. A positive `step`
  /// fixes h; otherwise the step scales with max(|q|, 1).
  static ScalarField1D finite_difference(std::string kind, Fn value, double step = 0.0,
                                         std::vector<double> singular_points = {});

  double value(double q) const { return value_(q); }
  double d1(double q) const { return d1_(q); }
  double d2(double q) const { return d2_(q); }
  FieldSample sample(double q) const { return {value_(q), d1_(q), d2_(q)}; }

  /// Same value function, derivatives replaced by finite differences.
  ScalarField1D with_finite_differences(double step = 0.0) const;

  const std::string& kind() const { return kind_; }
  DerivativeMode mode() const { return mode_; }
  const std::vector<double>& singular_points() const { return singular_points_; }

 private:
  std::string kind_;
  Fn value_;
  Fn d1_;
  Fn d2_;
  DerivativeMode mode_ = DerivativeMode::Analytic;
  std::vector<double> singular_points_;
};

using ParamMap = std::map<std::string, double>;

/// Mass catalog: constant {m0}, inverse_square {m0, a} for m0/(a q)^2,
/// power_law {rho, tau} for q^rho / tau^2.
ScalarField1D make_mass_profile(std::string_view kind, const ParamMap& params);

/// Potential catalog: zero, constant {v0}, harmonic {k} for k q^2 / 2.
ScalarField1D make_potential(std::string_view kind, const ParamMap& params);

/// Throws std::domain_error if m(q) <= 0 or is not finite.
double checked_mass(const ScalarField1D& m, double q);

struct Derivatives {
  double d1;
  double d2;
};

/// Three-point central stencils for f' and f''.
Derivatives finite_difference_derivatives(const std::function<double(double)>& f, double q, double h);

/// max(|q|,1) * eps^(1/3) for first and max(|q|,1) * eps^(1/4) for second
/// derivatives. PDM_LAB_FD_STEP, when set, overrides both.
double default_fd_step_first(double q);
double default_fd_step_second(double q);

/// Uniform grid including both Dirichlet end nodes.
class Grid1D {
 public:
  Grid1D(double q_min, double q_max, int n_points);

  double q_min() const { return q_min_; }
  double q_max() const { return q_max_; }
  int size() const { return n_; }
  double spacing() const { return dq_; }
  double length() const { return q_max_ - q_min_; }
  double operator[](int i) const { return q_min_ + dq_ * i; }
  std::vector<double> nodes() const;

  /// Throws if a singular point lies in [q_min, q_max].
  void require_excludes(const std::vector<double>& singular_points) const;

 private:
  double q_min_;
  double q_max_;
  int n_;
  double dq_;
};

template <typename T>
struct PhaseSpacePoint {
  T q;
  T p;
};

using PhaseSpacePoint1D = PhaseSpacePoint<double>;

}  // namespace pdm
