#include "pdm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace pdm::oracle {

std::vector<double> TridiagonalOperator::apply(const std::vector<double>& v) const {
  const std::size_t n = size();
  if (v.size() != n) throw std::invalid_argument("vector size does not match operator");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = diagonal[i] * v[i];
    if (i > 0) acc += off_diagonal[i - 1] * v[i - 1];
    if (i + 1 < n) acc += off_diagonal[i] * v[i + 1];
    out[i] = acc;
  }
  return out;
}

double TridiagonalOperator::norm_bound() const {
  double bound = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diagonal[i]);
    if (i > 0) row += std::abs(off_diagonal[i - 1]);
    if (i + 1 < n) row += std::abs(off_diagonal[i]);
    bound = std::max(bound, row);
  }
  return bound;
}

namespace {

// Stencil coefficients on every node of the grid; diag[i] is meaningful for
// interior i, off[i] couples nodes i and i + 1.
struct FullStencil {
  std::vector<double> diag;
  std::vector<double> off;
};

FullStencil vonroos_stencil(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord,
                            const Grid1D& grid, const PhysicalConstants& c) {
  grid.require_excludes(m.singular_points());
  const int n = grid.size();
  const double h = grid.spacing();
  const double a = ord.alpha();
  const double b = ord.beta();
  const double g = ord.gamma();

  std::vector<double> mass(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) mass[static_cast<std::size_t>(i)] = checked_mass(m, grid[i]);
  std::vector<double> half_beta(static_cast<std::size_t>(n - 1));
  for (int i = 0; i + 1 < n; ++i) {
    half_beta[static_cast<std::size_t>(i)] = std::pow(checked_mass(m, grid[i] + 0.5 * h), b);
  }

  const double scale = c.hbar * c.hbar / (h * h);
  FullStencil s;
  s.diag.assign(static_cast<std::size_t>(n), 0.0);
  s.off.assign(static_cast<std::size_t>(n - 1), 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double left = mass[k];
    const double right = mass[k + 1];
    s.off[k] = -0.25 * scale * half_beta[k] * (std::pow(left, a) * std::pow(right, g) +
                                               std::pow(left, g) * std::pow(right, a));
  }
  for (int i = 1; i + 1 < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    s.diag[k] = 0.5 * scale * std::pow(mass[k], a + g) * (half_beta[k] + half_beta[k - 1]) + v.value(grid[i]);
  }
  return s;
}

}  // namespace

TridiagonalOperator vonroos_matrix(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord,
                                   const Grid1D& grid, const PhysicalConstants& c) {
  const FullStencil s = vonroos_stencil(m, v, ord, grid, c);
  const int n = grid.size();
  TridiagonalOperator op;
  op.spacing = grid.spacing();
  for (int i = 1; i + 1 < n; ++i) {
    op.nodes.push_back(grid[i]);
    op.diagonal.push_back(s.diag[static_cast<std::size_t>(i)]);
  }
  for (int i = 1; i + 2 < n; ++i) op.off_diagonal.push_back(s.off[static_cast<std::size_t>(i)]);
  return op;
}

std::vector<double> vonroos_apply(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord,
                                  const Grid1D& grid, const std::vector<double>& values,
                                  const PhysicalConstants& c) {
  if (values.size() != static_cast<std::size_t>(grid.size())) {
    throw std::invalid_argument("vonroos_apply expects one value per grid node");
  }
  const FullStencil s = vonroos_stencil(m, v, ord, grid, c);
  std::vector<double> out;
  out.reserve(values.size() - 2);
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    out.push_back(s.off[i - 1] * values[i - 1] + s.diag[i] * values[i] + s.off[i] * values[i + 1]);
  }
  return out;
}

TridiagonalOperator unit_mass_matrix(const Grid1D& grid, const std::vector<double>& potential_interior,
                                     const PhysicalConstants& c) {
  const auto n = static_cast<std::size_t>(grid.size() - 2);
  if (potential_interior.size() != n) throw std::invalid_argument("one potential value per interior node expected");
  const double h = grid.spacing();
  const double kin = c.hbar * c.hbar / (h * h);
  TridiagonalOperator op;
  op.spacing = h;
  op.diagonal.resize(n);
  op.off_diagonal.assign(n - 1, -0.5 * kin);
  for (std::size_t i = 0; i < n; ++i) {
    op.nodes.push_back(grid[static_cast<int>(i) + 1]);
    op.diagonal[i] = kin + potential_interior[i];
  }
  return op;
}

// ---------------------------------------------------------------------------

std::vector<double> tridiagonal_eigenvalues(const TridiagonalOperator& op) {
  const std::size_t n = op.size();
  if (n == 0) return {};
  if (op.off_diagonal.size() + 1 != n) throw std::invalid_argument("malformed tridiagonal operator");
  std::vector<double> d = op.diagonal;
  std::vector<double> e(n, 0.0);
  std::copy(op.off_diagonal.begin(), op.off_diagonal.end(), e.begin());

  constexpr int kMaxIterations = 30;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    while (true) {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == kMaxIterations) {
        throw std::runtime_error("implicit QL did not converge for eigenvalue index " + std::to_string(l));
      }
      // Wilkinson shift from the leading 2x2 block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

namespace {

// LU factorization of T - shift with partial pivoting (second superdiagonal
// from row interchanges), reused across inverse-iteration sweeps.
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const TridiagonalOperator& op, double shift, double tiny)
      : n_(op.size()), dl_(op.off_diagonal), d_(op.diagonal), du_(op.off_diagonal), du2_(n_, 0.0), pivot_(n_, false) {
    for (double& x : d_) x -= shift;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] == 0.0) d_[i] = tiny;
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        pivot_[i] = true;
      }
    }
    for (double& x : d_) {
      if (x == 0.0) x = tiny;
    }
  }

  void solve(std::vector<double>& b) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (!pivot_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    for (std::size_t i = n_; i-- > 0;) {
      double acc = b[i];
      if (i + 1 < n_) acc -= du_[i] * b[i + 1];
      if (i + 2 < n_) acc -= du2_[i] * b[i + 2];
      b[i] = acc / d_[i];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<bool> pivot_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void scale_to_unit(std::vector<double>& v) {
  const double norm = std::sqrt(dot(v, v));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw std::runtime_error("inverse iteration produced a degenerate vector");
  for (double& x : v) x /= norm;
}

}  // namespace

Eigensystem eigensolve(const TridiagonalOperator& op, std::size_t k) {
  const std::size_t n = op.size();
  if (k > n) throw std::invalid_argument("requested more eigenpairs than the matrix dimension");
  Eigensystem out;
  out.nodes = op.nodes;
  out.spacing = op.spacing;
  const std::vector<double> all = tridiagonal_eigenvalues(op);
  out.values.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));

  const double norm = std::max(op.norm_bound(), std::numeric_limits<double>::min());
  const double eps = std::numeric_limits<double>::epsilon();
  const double cluster = 1e-3 * norm;
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  std::size_t cluster_start = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (j > 0 && out.values[j] - out.values[j - 1] > cluster) cluster_start = j;
    // Nudge repeated eigenvalues apart so each factorization differs.
    double shift = out.values[j];
    if (j > cluster_start) shift = std::max(shift, out.values[j - 1] + 10.0 * eps * norm);
    const ShiftedTridiagonalLU lu(op, shift, eps * norm);

    std::vector<double> v(n);
    for (double& x : v) x = uniform(rng);
    scale_to_unit(v);
    for (int sweep = 0; sweep < 4; ++sweep) {
      lu.solve(v);
      for (std::size_t i = cluster_start; i < j; ++i) {
        const double overlap = dot(out.vectors[i], v);
        for (std::size_t r = 0; r < n; ++r) v[r] -= overlap * out.vectors[i][r];
      }
      scale_to_unit(v);
    }
    // Fix the sign: the first appreciable component is positive.
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    for (double x : v) {
      if (std::abs(x) > 1e-3 * vmax) {
        if (x < 0.0) {
          for (double& y : v) y = -y;
        }
        break;
      }
    }
    out.vectors.push_back(v);
  }
  // Unit Euclidean norm to grid normalization, sum |psi|^2 dq = 1.
  const double to_grid = 1.0 / std::sqrt(op.spacing);
  for (auto& vec : out.vectors) {
    for (double& x : vec) x *= to_grid;
  }
  return out;
}

}  // namespace pdm::oracle
