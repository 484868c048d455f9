#include "pdm/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pdm/symbol1d.hpp"

namespace pdm::engine {

namespace {

using cplx = std::complex<double>;

template <typename Matrix>
double renormalize(Matrix& m) {
  const double peak = m.cwiseAbs().maxCoeff();
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw std::runtime_error("propagator entries vanished or overflowed during composition");
  }
  m /= peak;
  return std::log(peak);
}

template <typename Matrix>
Matrix power(const Matrix& base_in, int n, double& log_scale) {
  Matrix base = base_in;
  Matrix result;
  bool have_result = false;
  double base_log = log_scale;
  double result_log = 0.0;
  while (n > 0) {
    if (n & 1) {
      if (have_result) {
        result = (result * base).eval();
        result_log += base_log + renormalize(result);
      } else {
        result = base;
        result_log = base_log;
        have_result = true;
      }
    }
    n >>= 1;
    if (n > 0) {
      base = (base * base).eval();
      base_log = 2.0 * base_log + renormalize(base);
    }
  }
  log_scale = result_log;
  return result;
}

int node_index(const oracle::Eigensystem& eigs, double q) {
  const double q0 = eigs.nodes.front();
  const double pos = (q - q0) / eigs.spacing;
  const long idx = std::lround(pos);
  if (idx < 0 || idx >= static_cast<long>(eigs.nodes.size()) || std::abs(pos - static_cast<double>(idx)) > 1e-6) {
    throw std::invalid_argument("q=" + std::to_string(q) + " is not a node of the eigensystem grid");
  }
  return static_cast<int>(idx);
}

cplx evolution_factor(double energy, double t, TimeKind kind, double hbar) {
  if (kind == TimeKind::Imaginary) return std::exp(-energy * t / hbar);
  const double angle = -energy * t / hbar;
  return {std::cos(angle), std::sin(angle)};
}

void check_time(double t, TimeKind kind) {
  if (kind == TimeKind::Imaginary && t < 0.0) {
    throw std::invalid_argument("imaginary-time propagation needs tau >= 0; got " + std::to_string(t));
  }
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
}

}  // namespace

std::string to_string(TimeKind kind) { return kind == TimeKind::Real ? "real" : "imaginary"; }

void SliceConfig::validate() const {
  if (n_slices < 1) throw std::invalid_argument("n_slices must be at least 1");
  if (!(total > 0.0) || !std::isfinite(total)) throw std::invalid_argument("total time must be positive");
}

cplx short_time_kernel(const KernelSpec& spec, double eps, double q_next, double q_prev, TimeKind kind) {
  if (!(eps > 0.0)) throw std::invalid_argument("slice duration must be positive");
  const double theta = spec.theta.theta();
  const double q_tilde = (1.0 - theta) * q_next + theta * q_prev;
  const double hbar = spec.constants.hbar;
  const double m = checked_mass(spec.mass, q_tilde);
  const auto parts = symbol::decompose(spec.mass, spec.potential, spec.ordering, spec.theta, q_tilde, spec.constants);
  const double j = parts.source;
  const double w = parts.real_potential();
  const double dq = q_next - q_prev;

  if (kind == TimeKind::Imaginary) {
    const double shifted = dq - eps * j;
    const double exponent = -m * shifted * shifted / (2.0 * hbar * eps) - eps * w / hbar;
    if (!std::isfinite(exponent)) throw std::domain_error("non-finite kernel exponent at q=" + std::to_string(q_tilde));
    return std::sqrt(m / (2.0 * std::numbers::pi * hbar * eps)) * std::exp(exponent);
  }

  // Real time: i m (dq - i eps j)^2 / (2 hbar eps) - i eps w / hbar, expanded.
  const double re = m * j * dq / hbar;
  const double im = m * dq * dq / (2.0 * hbar * eps) - m * eps * j * j / (2.0 * hbar) - eps * w / hbar;
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw std::domain_error("non-finite kernel exponent at q=" + std::to_string(q_tilde));
  }
  // Principal branch: 1 / sqrt(i) = e^{-i pi / 4}.
  const cplx prefactor = std::sqrt(m / (2.0 * std::numbers::pi * hbar * eps)) *
                         cplx(std::cos(-std::numbers::pi / 4.0), std::sin(-std::numbers::pi / 4.0));
  return prefactor * std::exp(cplx(re, im));
}

cplx KernelMatrix::amplitude(int i, int j) const { return entries(i, j) * std::exp(log_scale) / spacing; }

KernelMatrix build_transfer_matrix(const KernelSpec& spec, const Grid1D& grid, double eps, TimeKind kind) {
  if (!(eps > 0.0)) throw std::invalid_argument("slice duration must be positive");
  grid.require_excludes(spec.mass.singular_points());
  const int n = grid.size();
  if (n < 3) throw std::invalid_argument("transfer matrix needs at least one interior node");

  KernelMatrix out;
  out.kind = kind;
  out.nodes = grid.nodes();
  out.spacing = grid.spacing();
  out.entries = Eigen::MatrixXcd::Zero(n, n);
  const double dq = grid.spacing();
  const double hbar = spec.constants.hbar;

  double m_max = 0.0;
  double w_max = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    m_max = std::max(m_max, checked_mass(spec.mass, grid[i]));
    const auto parts = symbol::decompose(spec.mass, spec.potential, spec.ordering, spec.theta, grid[i], spec.constants);
    w_max = std::max(w_max, std::abs(parts.real_potential()));
  }
  if (eps * w_max / hbar > 1.0) {
    out.warnings.push_back("epsilon * max|V + V_Q| / hbar = " + std::to_string(eps * w_max / hbar) +
                           " is not small");
  }
  if (dq * dq > hbar * eps / m_max) {
    out.warnings.push_back("grid spacing does not resolve the kernel width sqrt(hbar eps / m_max) = " +
                           std::to_string(std::sqrt(hbar * eps / m_max)));
  }
  // The real-time kernel has constant modulus; its phase step between neighbouring nodes at the
  // largest separation must stay below pi, or the sampled slice is not unitary and products blow up.
  const double phase_step = m_max * grid.length() * dq / (hbar * eps);
  if (kind == TimeKind::Real && phase_step > std::numbers::pi) {
    out.warnings.push_back("real-time kernel phase step " + std::to_string(phase_step) +
                           " rad across the grid exceeds pi; composed products are unstable");
  }

  for (int i = 1; i < n - 1; ++i) {
    for (int j = 1; j < n - 1; ++j) {
      out.entries(i, j) = short_time_kernel(spec, eps, grid[i], grid[j], kind) * dq;
    }
  }
  return out;
}

KernelMatrix compose(const KernelMatrix& one_slice, int n_slices) {
  if (n_slices < 1) throw std::invalid_argument("n_slices must be at least 1");
  KernelMatrix out;
  out.kind = one_slice.kind;
  out.nodes = one_slice.nodes;
  out.spacing = one_slice.spacing;
  out.warnings = one_slice.warnings;
  double log_scale = one_slice.log_scale;
  if (one_slice.kind == TimeKind::Imaginary) {
    // Imaginary-time entries are real; multiply in real arithmetic.
    const Eigen::MatrixXd base = one_slice.entries.real();
    out.entries = power(base, n_slices, log_scale).cast<cplx>();
  } else {
    out.entries = power(one_slice.entries, n_slices, log_scale);
  }
  out.log_scale = log_scale;
  return out;
}

KernelMatrix compose_propagator(const SliceConfig& cfg, const Grid1D& grid, const KernelSpec& spec) {
  cfg.validate();
  return compose(build_transfer_matrix(spec, grid, cfg.epsilon(), cfg.kind), cfg.n_slices);
}

KernelMatrix multiply(const KernelMatrix& a, const KernelMatrix& b) {
  if (a.size() != b.size() || a.kind != b.kind) {
    throw std::invalid_argument("propagators must share grid and time kind");
  }
  KernelMatrix out;
  out.kind = a.kind;
  out.nodes = a.nodes;
  out.spacing = a.spacing;
  out.entries = a.entries * b.entries;
  out.log_scale = a.log_scale + b.log_scale + renormalize(out.entries);
  return out;
}

GroundState extract_ground_state(const KernelMatrix& composed, double tau, const PhysicalConstants& c,
                                 int max_iterations, double tolerance) {
  if (composed.kind != TimeKind::Imaginary) {
    throw std::invalid_argument("ground-state extraction needs an imaginary-time propagator");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  const Eigen::MatrixXd m = composed.entries.real();
  const int n = static_cast<int>(m.rows());

  // Start from a positive bump on the interior; the ground state has no nodes.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int i = 1; i < n - 1; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    v(i) = std::sin(std::numbers::pi * s);
  }
  v.normalize();

  double lambda = 0.0;
  GroundState gs;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::VectorXd w = m * v;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (!(norm > 0.0)) throw std::runtime_error("power iteration collapsed to zero");
    v = w / norm;
    gs.iterations = it;
    gs.residual = std::abs(next - lambda) / std::abs(next);
    lambda = next;
    if (it > 2 && gs.residual < tolerance) break;
  }
  if (!(lambda > 0.0)) throw std::runtime_error("dominant eigenvalue is not positive");
  gs.energy = -c.hbar * (std::log(lambda) + composed.log_scale) / tau;

  if (v.sum() < 0.0) v = -v;
  const double grid_norm = std::sqrt(v.squaredNorm() * composed.spacing);
  gs.state.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) gs.state[static_cast<std::size_t>(i)] = v(i) / grid_norm;
  return gs;
}

std::vector<cplx> propagate_state(const KernelMatrix& one_slice, std::vector<cplx> values, int n_steps) {
  if (static_cast<int>(values.size()) != one_slice.size()) {
    throw std::invalid_argument("state size does not match the propagator grid");
  }
  if (n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");
  Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(values.data(), static_cast<Eigen::Index>(values.size()));
  const cplx scale = std::exp(one_slice.log_scale);
  for (int s = 0; s < n_steps; ++s) v = (one_slice.entries * v) * scale;
  return {v.data(), v.data() + v.size()};
}

SpectralSample spectral_propagator(const oracle::Eigensystem& eigs, double t, TimeKind kind, double q_f,
                                   double q_i, std::size_t n_max, const PhysicalConstants& c) {
  check_time(t, kind);
  if (n_max == 0 || n_max > eigs.values.size()) {
    throw std::invalid_argument("n_max must lie in [1, " + std::to_string(eigs.values.size()) + "]");
  }
  const auto f = static_cast<std::size_t>(node_index(eigs, q_f));
  const auto i = static_cast<std::size_t>(node_index(eigs, q_i));
  SpectralSample out{0.0, 0.0};
  for (std::size_t n = 0; n < n_max; ++n) {
    const cplx term = evolution_factor(eigs.values[n], t, kind, c.hbar) * eigs.vectors[n][f] * eigs.vectors[n][i];
    out.value += term;
    out.truncation_estimate = std::abs(term);
  }
  return out;
}

Eigen::MatrixXcd spectral_matrix(const oracle::Eigensystem& eigs, double t, TimeKind kind, std::size_t n_max,
                                 const PhysicalConstants& c) {
  check_time(t, kind);
  if (n_max == 0 || n_max > eigs.values.size()) {
    throw std::invalid_argument("n_max must lie in [1, " + std::to_string(eigs.values.size()) + "]");
  }
  const auto dim = static_cast<Eigen::Index>(eigs.nodes.size());
  Eigen::MatrixXd basis(dim, static_cast<Eigen::Index>(n_max));
  Eigen::VectorXcd factors(static_cast<Eigen::Index>(n_max));
  for (std::size_t n = 0; n < n_max; ++n) {
    basis.col(static_cast<Eigen::Index>(n)) = Eigen::Map<const Eigen::VectorXd>(eigs.vectors[n].data(), dim);
    factors(static_cast<Eigen::Index>(n)) = evolution_factor(eigs.values[n], t, kind, c.hbar);
  }
  const Eigen::MatrixXcd cb = basis.cast<cplx>();
  return cb * factors.asDiagonal() * cb.transpose();
}

std::vector<cplx> spectral_evolve(const oracle::Eigensystem& eigs, double t, TimeKind kind,
                                  const std::vector<cplx>& values, std::size_t n_max, const PhysicalConstants& c) {
  check_time(t, kind);
  if (values.size() != eigs.nodes.size()) throw std::invalid_argument("state size does not match the eigensystem");
  if (n_max == 0 || n_max > eigs.values.size()) {
    throw std::invalid_argument("n_max must lie in [1, " + std::to_string(eigs.values.size()) + "]");
  }
  std::vector<cplx> out(values.size(), 0.0);
  for (std::size_t n = 0; n < n_max; ++n) {
    cplx overlap = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) overlap += eigs.vectors[n][k] * values[k];
    const cplx coeff = overlap * eigs.spacing * evolution_factor(eigs.values[n], t, kind, c.hbar);
    for (std::size_t k = 0; k < values.size(); ++k) out[k] += coeff * eigs.vectors[n][k];
  }
  return out;
}

}  // namespace pdm::engine
