#pragma once

// Time-sliced lattice propagator on a 1D grid. Each slice is the short-time
// kernel obtained by integrating the decomposed symbol over momentum in
// closed form; N slices are composed as weighted matrix products.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pdm/core.hpp"
#include "pdm/oracle.hpp"

namespace pdm::engine {

enum class TimeKind { Real, Imaginary };

std::string to_string(TimeKind kind);

struct SliceConfig {
  int n_slices = 1;
  double total = 1.0;  // t in real time, tau in imaginary time
  TimeKind kind = TimeKind::Imaginary;

  double epsilon() const { return total / n_slices; }
  /// Throws std::invalid_argument for n_slices < 1 or total <= 0.
  void validate() const;
};

struct KernelSpec {
  ScalarField1D mass;
  ScalarField1D potential;
  OrderingParams ordering;
  Discretization theta{0.5};
  PhysicalConstants constants{};
};

/// One slice <q_next| e^{-eps H / hbar} |q_prev> (imaginary) or
/// <q_next| e^{-i eps H / hbar} |q_prev> (real), Gaussian momentum integral done exactly.
std::complex<double> short_time_kernel(const KernelSpec& spec, double eps, double q_next, double q_prev,
                                       TimeKind kind);

/// Propagator matrix on all grid nodes. Entry (i, j) is K(q_i, q_j) * dq * exp(log_scale);
/// the end nodes carry Dirichlet zeros.
struct KernelMatrix {
  TimeKind kind = TimeKind::Imaginary;
  Eigen::MatrixXcd entries;
  double log_scale = 0.0;
  std::vector<double> nodes;
  double spacing = 1.0;
  std::vector<std::string> warnings;

  int size() const { return static_cast<int>(entries.rows()); }
  /// K(q_i, q_j) with the weight and the scale removed.
  std::complex<double> amplitude(int i, int j) const;
};

KernelMatrix build_transfer_matrix(const KernelSpec& spec, const Grid1D& grid, double eps, TimeKind kind);

/// N-fold product of the one-slice matrix by repeated squaring. Every product
/// is renormalized by its largest entry and the logarithm accumulated.
KernelMatrix compose(const KernelMatrix& one_slice, int n_slices);

KernelMatrix compose_propagator(const SliceConfig& cfg, const Grid1D& grid, const KernelSpec& spec);

/// Weighted product a * b, i.e. K(t_a + t_b) from K(t_a) and K(t_b).
KernelMatrix multiply(const KernelMatrix& a, const KernelMatrix& b);

struct GroundState {
  double energy = 0.0;
  std::vector<double> state;  // sum |psi|^2 dq = 1, positive bulk
  int iterations = 0;
  double residual = 0.0;  // relative change of the eigenvalue estimate at exit
};

/// Dominant eigenpair of an imaginary-time propagator over total time `tau`:
/// E0 = -hbar (ln lambda + log_scale) / tau.
GroundState extract_ground_state(const KernelMatrix& composed, double tau, const PhysicalConstants& c = {},
                                 int max_iterations = 2000, double tolerance = 1e-14);

/// Applies the one-slice matrix n_steps times to grid values of a state.
std::vector<std::complex<double>> propagate_state(const KernelMatrix& one_slice,
                                                  std::vector<std::complex<double>> values, int n_steps);

struct SpectralSample {
  std::complex<double> value;
  double truncation_estimate;  // magnitude of the last retained term
};

/// sum_{n < n_max} e^{-i E_n t / hbar} psi_n(q_f) psi_n(q_i) (real time) or
/// e^{-E_n tau / hbar} (imaginary time, tau >= 0). q_f and q_i must be nodes
/// of the eigensystem.
SpectralSample spectral_propagator(const oracle::Eigensystem& eigs, double t, TimeKind kind, double q_f,
                                   double q_i, std::size_t n_max, const PhysicalConstants& c = {});

/// The same sum for every pair of nodes, without the dq weight.
Eigen::MatrixXcd spectral_matrix(const oracle::Eigensystem& eigs, double t, TimeKind kind, std::size_t n_max,
                                 const PhysicalConstants& c = {});

/// Expands `values` (on the eigensystem nodes) in the first n_max eigenvectors
/// and evolves each coefficient.
std::vector<std::complex<double>> spectral_evolve(const oracle::Eigensystem& eigs, double t, TimeKind kind,
                                                  const std::vector<std::complex<double>>& values,
                                                  std::size_t n_max, const PhysicalConstants& c = {});

}  // namespace pdm::engine
