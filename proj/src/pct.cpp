#include "pdm/pct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdm::pct {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double integral;
  double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  if (!std::isfinite(fc)) throw std::domain_error("non-finite integrand at " + std::to_string(centre));
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[static_cast<std::size_t>(j)];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    if (!std::isfinite(f1) || !std::isfinite(f2)) {
      throw std::domain_error("non-finite integrand near " + std::to_string(centre));
    }
    kronrod += kKronrodWeights[static_cast<std::size_t>(j)] * (f1 + f2);
    if (j % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, abs_tol);

  struct Interval {
    double a;
    double b;
    Panel panel;
    int depth;
  };
  constexpr int kMaxDepth = 60;
  const double width = b - a;
  std::vector<Interval> stack{{a, b, gk15(f, a, b), 0}};
  double total = 0.0;
  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    // Each interval gets a share of the tolerance proportional to its width.
    const double local_tol = abs_tol * (iv.b - iv.a) / width;
    if (iv.panel.error <= local_tol || iv.depth >= kMaxDepth) {
      if (iv.panel.error > local_tol) {
        throw std::runtime_error("adaptive quadrature did not converge on [" + std::to_string(iv.a) + ", " +
                                 std::to_string(iv.b) + "]");
      }
      total += iv.panel.integral;
      continue;
    }
    const double mid = 0.5 * (iv.a + iv.b);
    stack.push_back({iv.a, mid, gk15(f, iv.a, mid), iv.depth + 1});
    stack.push_back({mid, iv.b, gk15(f, mid, iv.b), iv.depth + 1});
  }
  return total;
}

double pct_map(const ScalarField1D& m, double q_ref, double q, double reduced_mass) {
  if (!(reduced_mass > 0.0)) throw std::invalid_argument("reduced mass must be positive");
  const double lo = std::min(q_ref, q);
  const double hi = std::max(q_ref, q);
  for (double s : m.singular_points()) {
    if (s > lo && s < hi) {
      throw std::domain_error("mass is singular at q=" + std::to_string(s) + " inside the integration interval");
    }
  }
  auto integrand = [&](double t) {
    const double mass = m.value(t);
    if (!(mass > 0.0)) throw std::domain_error("mass must be positive at q=" + std::to_string(t));
    return std::sqrt(mass / reduced_mass);
  };
  return integrate(integrand, q_ref, q, 1e-10);
}

double reduced_potential(const ScalarField1D& m, const ScalarField1D& v, const OrderingParams& ord, double q,
                         const PhysicalConstants& c) {
  const double mass = checked_mass(m, q);
  const double r1 = m.d1(q) / mass;
  const double r2 = m.d2(q) / mass;
  const double a = ord.alpha();
  const double g = ord.gamma();
  const double curvature = (1.0 + 2.0 * a + 2.0 * g) * r2;
  const double gradient = 2.0 * (7.0 / 8.0 + 2.0 * a * g + 2.0 * a + 2.0 * g) * r1 * r1;
  return -c.hbar * c.hbar / (8.0 * mass) * (curvature - gradient) + v.value(q);
}

// ---------------------------------------------------------------------------

Reduction::Reduction(ScalarField1D mass, ScalarField1D potential, OrderingParams ord, double q_ref, double q_lo,
                     double q_hi, PhysicalConstants constants, double reduced_mass)
    : mass_(std::move(mass)),
      potential_(std::move(potential)),
      ord_(ord),
      q_ref_(q_ref),
      q_lo_(q_lo),
      q_hi_(q_hi),
      constants_(constants),
      reduced_mass_(reduced_mass) {
  if (!(q_lo < q_hi)) throw std::invalid_argument("reduction domain requires q_lo < q_hi");
  if (!(reduced_mass > 0.0)) throw std::invalid_argument("reduced mass must be positive");
}

double Reduction::coordinate_map(double q) const { return pct_map(mass_, q_ref_, q, reduced_mass_); }

double Reduction::inverse_map(double x) const {
  double lo = q_lo_;
  double hi = q_hi_;
  double x_lo = coordinate_map(lo);
  double x_hi = coordinate_map(hi);
  const double span = std::abs(x_hi - x_lo);
  const double slack = 1e-12 * std::max(1.0, span);
  if (x < x_lo - slack || x > x_hi + slack) {
    throw std::domain_error("x=" + std::to_string(x) + " lies outside the image [" + std::to_string(x_lo) + ", " +
                            std::to_string(x_hi) + "] of the coordinate map");
  }
  if (x <= x_lo) return lo;
  if (x >= x_hi) return hi;

  // Safeguarded Newton: dx/dq = sqrt(m / M) > 0 keeps the bracket valid.
  double q = lo + (hi - lo) * (x - x_lo) / (x_hi - x_lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = coordinate_map(q) - x;
    if (f > 0.0) hi = q; else lo = q;
    const double slope = std::sqrt(checked_mass(mass_, q) / reduced_mass_);
    double next = q - f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - q);
    q = next;
    if (step <= 1e-13 * std::max(1.0, std::abs(q)) || hi - lo <= 1e-13 * std::max(1.0, std::abs(q))) {
      return q;
    }
  }
  throw std::runtime_error("inverse coordinate map did not converge for x=" + std::to_string(x));
}

double Reduction::reduced_potential_at_q(double q) const {
  return pct::reduced_potential(mass_, potential_, ord_, q, constants_);
}

double Reduction::weight(PrefactorConvention conv, double q) const {
  switch (conv) {
    case PrefactorConvention::MassQuarter: return std::pow(checked_mass(mass_, q), 0.25);
    case PrefactorConvention::FieldQuarter: {
      const double f = prefactor_field(q);
      if (!(f > 0.0)) {
        throw std::domain_error("prefactor field F(q) must be positive for the F^(1/4) convention at q=" +
                                std::to_string(q));
      }
      return std::pow(f, 0.25);
    }
  }
  return 1.0;
}

WaveFunction transport_wavefunction(WaveFunction phi, const Reduction& reduction, PrefactorConvention conv) {
  return [phi = std::move(phi), reduction, conv](double q) -> std::complex<double> {
    if (q < reduction.q_lo() || q > reduction.q_hi()) {
      throw std::domain_error("q=" + std::to_string(q) + " lies outside the reduction domain");
    }
    return phi(reduction.coordinate_map(q)) * reduction.weight(conv, q);
  };
}

// ---------------------------------------------------------------------------

double bessel_index(const OrderingPreset& preset, double rho) {
  if (rho == -2.0) throw std::invalid_argument("bessel_index requires rho != -2");
  const double s = rho + 2.0;
  switch (preset.name) {
    case OrderingName::ZhuKroemer: return 1.0 / s;
    case OrderingName::BenDanielDuke: return (rho + 1.0) / s;
    case OrderingName::LiKuhn: return 0.5 * std::sqrt(1.0 - 1.0 / (s * s));
    case OrderingName::Custom: break;
  }
  throw std::invalid_argument("no Bessel-index table entry for custom orderings");
}

double centrifugal_coefficient(const OrderingParams& ord, double rho, double tau, double q_sample,
                               const PhysicalConstants& c) {
  if (!(q_sample > 0.0)) throw std::invalid_argument("q_sample must be positive");
  const auto mass = make_mass_profile("power_law", {{"rho", rho}, {"tau", tau}});
  const auto zero = make_potential("zero", {});
  const double x = 2.0 * std::pow(q_sample, 1.0 + 0.5 * rho) / (tau * (rho + 2.0));
  return reduced_potential(mass, zero, ord, q_sample, c) * x * x;
}

double bessel_index_from_coefficient(double coefficient, const PhysicalConstants& c) {
  const double nu2 = 0.25 + 2.0 * coefficient / (c.hbar * c.hbar);
  if (nu2 < 0.0) throw std::domain_error("inverse-square coefficient below the fall-to-centre threshold");
  return std::sqrt(nu2);
}

}  // namespace pdm::pct
