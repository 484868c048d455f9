#include "pdm/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pdm {

PhysicalConstants::PhysicalConstants(double hbar_value) : hbar(hbar_value) {
  if (!(hbar_value > 0.0) || !std::isfinite(hbar_value)) {
    throw std::invalid_argument("hbar must be positive and finite");
  }
}

OrderingPreset OrderingPreset::li_kuhn() { return {OrderingName::LiKuhn, {-0.5, 0.0}}; }
OrderingPreset OrderingPreset::li_kuhn_alt() { return {OrderingName::LiKuhn, {0.0, -0.5}}; }
OrderingPreset OrderingPreset::ben_daniel_duke() { return {OrderingName::BenDanielDuke, {0.0, 0.0}}; }
OrderingPreset OrderingPreset::zhu_kroemer() { return {OrderingName::ZhuKroemer, {-0.5, -0.5}}; }
OrderingPreset OrderingPreset::custom(double alpha, double gamma) {
  return {OrderingName::Custom, {alpha, gamma}};
}

OrderingPreset OrderingPreset::from_name(std::string_view name) {
  if (name == "li_kuhn" || name == "LiKuhn" || name == "lk") return li_kuhn();
  if (name == "li_kuhn_alt") return li_kuhn_alt();
  if (name == "bendaniel_duke" || name == "ben_daniel_duke" || name == "BenDanielDuke" || name == "bdd") {
    return ben_daniel_duke();
  }
  if (name == "zhu_kroemer" || name == "ZhuKroemer" || name == "zk") return zhu_kroemer();
  throw std::invalid_argument("unknown ordering preset '" + std::string(name) + "'");
}

std::string to_string(OrderingName name) {
  switch (name) {
    case OrderingName::LiKuhn: return "li_kuhn";
    case OrderingName::BenDanielDuke: return "bendaniel_duke";
    case OrderingName::ZhuKroemer: return "zhu_kroemer";
    case OrderingName::Custom: return "custom";
  }
  return "custom";
}

Discretization::Discretization(double theta) : theta_(theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("theta must lie in [0, 1], got " + std::to_string(theta));
  }
}

// ---------------------------------------------------------------------------

namespace {

double env_fd_step() {
  const char* raw = std::getenv("PDM_LAB_FD_STEP");
  if (raw == nullptr || *raw == '\0') return 0.0;
  const std::string_view text(raw);
  double h = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), h);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument(std::string("PDM_LAB_FD_STEP is not a positive number: ") + raw);
  }
  return h;
}

}  // namespace

double default_fd_step_first(double q) {
  if (const double h = env_fd_step(); h > 0.0) return h;
  return std::max(std::abs(q), 1.0) * std::cbrt(std::numeric_limits<double>::epsilon());
}

double default_fd_step_second(double q) {
  if (const double h = env_fd_step(); h > 0.0) return h;
  return std::max(std::abs(q), 1.0) * std::pow(std::numeric_limits<double>::epsilon(), 0.25);
}

Derivatives finite_difference_derivatives(const std::function<double(double)>& f, double q, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const double fm = f(q - h);
  const double f0 = f(q);
  const double fp = f(q + h);
  if (!std::isfinite(fm) || !std::isfinite(f0) || !std::isfinite(fp)) {
    throw std::domain_error("non-finite sample in finite-difference stencil at q=" + std::to_string(q));
  }
  return {(fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)};
}

// ---------------------------------------------------------------------------

ScalarField1D::ScalarField1D(std::string kind, Fn value, Fn d1, Fn d2, std::vector<double> singular_points)
    : kind_(std::move(kind)),
      value_(std::move(value)),
      d1_(std::move(d1)),
      d2_(std::move(d2)),
      singular_points_(std::move(singular_points)) {}

ScalarField1D ScalarField1D::finite_difference(std::string kind, Fn value, double step,
                                               std::vector<double> singular_points) {
  if (step < 0.0) throw std::invalid_argument("finite-difference step must be non-negative");
  Fn d1 = [value, step](double q) {
    const double h = step > 0.0 ? step : default_fd_step_first(q);
    return finite_difference_derivatives(value, q, h).d1;
  };
  Fn d2 = [value, step](double q) {
    const double h = step > 0.0 ? step : default_fd_step_second(q);
    return finite_difference_derivatives(value, q, h).d2;
  };
  ScalarField1D field(std::move(kind), std::move(value), std::move(d1), std::move(d2),
                      std::move(singular_points));
  field.mode_ = DerivativeMode::FiniteDifference;
  return field;
}

ScalarField1D ScalarField1D::with_finite_differences(double step) const {
  return finite_difference(kind_, value_, step, singular_points_);
}

namespace {

double require_param(const ParamMap& params, const std::string& key, std::string_view kind) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw std::invalid_argument("profile '" + std::string(kind) + "' requires parameter '" + key + "'");
  }
  if (!std::isfinite(it->second)) {
    throw std::invalid_argument("parameter '" + key + "' is not finite");
  }
  return it->second;
}

double param_or(const ParamMap& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
}

}  // namespace

ScalarField1D make_mass_profile(std::string_view kind, const ParamMap& params) {
  if (kind == "constant") {
    const double m0 = require_param(params, "m0", kind);
    require_positive(m0, "m0");
    return {"constant", [m0](double) { return m0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  }
  if (kind == "inverse_square") {
    const double m0 = require_param(params, "m0", kind);
    const double a = require_param(params, "a", kind);
    require_positive(m0, "m0");
    require_positive(a, "a");
    // m = c q^-2, c = m0 / a^2
    const double c = m0 / (a * a);
    return {"inverse_square",
            [c](double q) { return c / (q * q); },
            [c](double q) { return -2.0 * c / (q * q * q); },
            [c](double q) { return 6.0 * c / (q * q * q * q); },
            {0.0}};
  }
  if (kind == "power_law") {
    const double rho = require_param(params, "rho", kind);
    const double tau = param_or(params, "tau", 1.0);
    require_positive(tau, "tau");
    const double inv_t2 = 1.0 / (tau * tau);
    auto domain = [](double q) {
      if (!(q > 0.0)) throw std::domain_error("power_law mass is defined for q > 0 only");
    };
    return {"power_law",
            [=](double q) { domain(q); return std::pow(q, rho) * inv_t2; },
            [=](double q) { domain(q); return rho * std::pow(q, rho - 1.0) * inv_t2; },
            [=](double q) { domain(q); return rho * (rho - 1.0) * std::pow(q, rho - 2.0) * inv_t2; },
            {0.0}};
  }
  throw std::invalid_argument("unknown mass profile '" + std::string(kind) + "'");
}

ScalarField1D make_potential(std::string_view kind, const ParamMap& params) {
  if (kind == "zero") {
    return {"zero", [](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  }
  if (kind == "constant") {
    const double v0 = require_param(params, "v0", kind);
    return {"constant", [v0](double) { return v0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  }
  if (kind == "harmonic") {
    const double k = require_param(params, "k", kind);
    return {"harmonic",
            [k](double q) { return 0.5 * k * q * q; },
            [k](double q) { return k * q; },
            [k](double) { return k; }};
  }
  throw std::invalid_argument("unknown potential '" + std::string(kind) + "'");
}

double checked_mass(const ScalarField1D& m, double q) {
  const double v = m.value(q);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error("mass must be positive at q=" + std::to_string(q) + " (got " + std::to_string(v) + ")");
  }
  return v;
}

// ---------------------------------------------------------------------------

Grid1D::Grid1D(double q_min, double q_max, int n_points) : q_min_(q_min), q_max_(q_max), n_(n_points) {
  if (!std::isfinite(q_min) || !std::isfinite(q_max) || !(q_min < q_max)) {
    throw std::invalid_argument("grid requires finite q_min < q_max");
  }
  if (n_points < 3) throw std::invalid_argument("grid requires at least 3 points");
  dq_ = (q_max - q_min) / (n_points - 1);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = (*this)[i];
  return out;
}

void Grid1D::require_excludes(const std::vector<double>& singular_points) const {
  for (double s : singular_points) {
    if (s >= q_min_ && s <= q_max_) {
      throw std::domain_error("grid [" + std::to_string(q_min_) + ", " + std::to_string(q_max_) +
                              "] contains the singular point q=" + std::to_string(s));
    }
  }
}

}  // namespace pdm
