#pragma once

// Connection, curvature and the theta-symbol of the Laplace-Beltrami
// Hamiltonian on an n-dimensional chart with metric g_{mu nu}(q).

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pdm/core.hpp"

namespace pdm::curved {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class Metric {
 public:
  using Fn = std::function<Mat(const Vec&)>;
  /// First derivatives: element rho is d_rho g.
  using D1Fn = std::function<std::vector<Mat>(const Vec&)>;
  /// Second derivatives: element [rho][sigma] is d_rho d_sigma g.
  using D2Fn = std::function<std::vector<std::vector<Mat>>(const Vec&)>;
  /// Coordinate distance to the nearest chart singularity (infinity if none).
  using MarginFn = std::function<double(const Vec&)>;

  Metric(std::string name, int dim, Fn g, D1Fn d1, D2Fn d2, MarginFn margin, Vec sample_lo, Vec sample_hi);

  /// Derivatives by central differences of g. A positive step fixes h.
  static Metric finite_difference(std::string name, int dim, Fn g, MarginFn margin, Vec sample_lo, Vec sample_hi,
                                  double step = 0.0);
  Metric with_finite_differences(double step = 0.0) const;

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  DerivativeMode mode() const { return mode_; }

  /// Validated metric: dimension, chart margin, symmetry and Cholesky.
  Mat g(const Vec& q) const;
  Mat inverse(const Vec& q) const;
  double det(const Vec& q) const;
  std::vector<Mat> d1(const Vec& q) const;
  std::vector<std::vector<Mat>> d2(const Vec& q) const;

  /// Raw value without validation (used for finite differences).
  Mat raw(const Vec& q) const { return g_(q); }
  double margin(const Vec& q) const { return margin_(q); }
  void require_in_chart(const Vec& q) const;

  /// Box inside the chart used for random sampling.
  const Vec& sample_lo() const { return sample_lo_; }
  const Vec& sample_hi() const { return sample_hi_; }

 private:
  std::string name_;
  int dim_;
  Fn g_;
  D1Fn d1_;
  D2Fn d2_;
  MarginFn margin_;
  Vec sample_lo_;
  Vec sample_hi_;
  DerivativeMode mode_ = DerivativeMode::Analytic;
  double fd_step_ = 0.0;
};

/// Catalog: euclidean {dim}, polar, spherical (3D r, theta, phi), sphere2 {a},
/// hyperbolic (upper half-plane), paraboloid (graph of (x^2 + y^2) / 2).
Metric make_metric(std::string_view name, const ParamMap& params = {});
std::vector<std::string> metric_catalog();

struct ConnectionData {
  int dim = 0;
  std::vector<double> christoffel;  // Gamma^l_{mn} at [(l * dim + m) * dim + n]
  std::vector<double> contracted;   // Gamma^n_{n m}
  std::vector<double> derivative;   // d_r Gamma^l_{mn} at [((l * dim + m) * dim + n) * dim + r]

  double gamma(int l, int m, int n) const { return christoffel[static_cast<std::size_t>((l * dim + m) * dim + n)]; }
  double dgamma(int l, int m, int n, int r) const {
    return derivative[static_cast<std::size_t>(((l * dim + m) * dim + n) * dim + r)];
  }
};

ConnectionData christoffel(const Metric& metric, const Vec& q);

struct CurvatureData {
  Mat ricci;
  double scalar = 0.0;
};

/// R_{mn} = d_s Gamma^s_{mn} - d_n Gamma^s_{ms} + Gamma^s_{sl} Gamma^l_{mn} - Gamma^s_{nl} Gamma^l_{ms},
/// the convention in which the round sphere has R = 2 / a^2.
CurvatureData curvature(const Metric& metric, const Vec& q);
double ricci_scalar(const Metric& metric, const Vec& q);

/// Largest |d_n g^{ms} + g^{mr} Gamma^s_{nr} + g^{rs} Gamma^m_{rn}| with the
/// inverse-metric derivative taken by central differences of g^{-1}.
double metric_derivative_identity_residual(const Metric& metric, const Vec& q);

/// Largest |Gamma^n_{nm} - (1/2) d_m ln g| with d ln g by central differences.
double contracted_identity_residual(const Metric& metric, const Vec& q);

/// (1/4) g^{1/4} Delta g^{-1/4} by nested central differences of the scalar g^{-1/4}.
double quarter_density_laplacian(const Metric& metric, const Vec& q);

/// (1/4) g^{mn} [Gamma_{n,m} - (1/2) Gamma_n Gamma_m - Gamma_s Gamma^s_{mn}], Gamma_n the contracted connection.
double quarter_density_gamma_form(const Metric& metric, const Vec& q);

using Potential = std::function<double(const Vec&)>;

struct CurvedPoint {
  Vec q;
  Vec p;
};

/// General-theta symbol assembled term by term from connection data.
std::complex<double> curved_symbol(const Metric& metric, const Potential& v, const Discretization& th,
                                   const CurvedPoint& point, const PhysicalConstants& c = {});

/// (1/2) g^{mn} p_m p_n + V + (hbar^2 / 8)(R + g^{mn} Gamma^r_{ms} Gamma^s_{rn}).
double weyl_symbol(const Metric& metric, const Potential& v, const CurvedPoint& point,
                   const PhysicalConstants& c = {});

/// [g(q - theta q') g(q + (1 - theta) q')]^{1/4}.
double weighting_function(const Metric& metric, const Discretization& th, const Vec& q, const Vec& q_prime);

}  // namespace pdm::curved
