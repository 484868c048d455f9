#include "pdm/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "pdm/curved.hpp"
#include "pdm/engine.hpp"
#include "pdm/oracle.hpp"
#include "pdm/pct.hpp"
#include "pdm/symbol1d.hpp"

namespace pdm::cli {

namespace fs = std::filesystem;

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const fs::path& path, const std::string& provenance, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_ << "# " << provenance << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::separator() {
  if (filled_ >= columns_) throw std::logic_error("CSV row has more cells than header columns");
  if (filled_ > 0) out_ << ',';
  ++filled_;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  out_ << format_number(value);
  return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& value) {
  separator();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("CSV row has fewer cells than header columns");
  out_ << '\n';
  filled_ = 0;
}

namespace {

const Grid1D& require_grid(const Scenario& s) {
  if (!s.grid) throw ConfigError(s.config.source(), 0, "this subcommand needs grid.q_min, grid.q_max, grid.n_points");
  return *s.grid;
}

std::string provenance(const std::string& name, const Scenario& s) {
  return "pdm-lab " + name + " | " + s.config.resolved();
}

std::vector<double> parse_vector(const std::string& text, const Scenario& s, const std::string& key) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError(s.config.source(), s.config.line_of(key), "empty number in " + key);
    const std::string t = item.substr(b, e - b + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw ConfigError(s.config.source(), s.config.line_of(key), "'" + t + "' in " + key + " is not a number");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::vector<double>> parse_points(const Scenario& s, const std::string& key) {
  std::vector<std::vector<double>> out;
  std::istringstream in(s.config.get(key));
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_vector(item, s, key));
  }
  return out;
}

fs::path run_symbol(const Scenario& s, const fs::path& dir) {
  const Grid1D& grid = require_grid(s);
  const std::vector<double> momenta = s.config.has("symbol.p") ? s.config.numbers("symbol.p")
                                                                : std::vector<double>{-1.0, 0.0, 1.0};
  const fs::path path = dir / "symbol.csv";
  CsvWriter csv(path, provenance("symbol", s), {"q", "p", "re_H", "im_H", "V_Q", "j"});
  for (int i = 0; i < grid.size(); ++i) {
    const double q = grid[i];
    const auto parts = symbol::decompose(s.mass, s.potential, s.ordering.params, s.theta, q, s.constants);
    for (double p : momenta) {
      const auto h = parts.at(p);
      csv.cell(q).cell(p).cell(h.real()).cell(h.imag()).cell(parts.vq).cell(parts.source);
      csv.end_row();
    }
  }
  return path;
}

fs::path run_veff(const Scenario& s, const fs::path& dir) {
  const Grid1D& grid = require_grid(s);
  std::vector<std::string> names = s.config.has("veff.orderings")
                                       ? s.config.words("veff.orderings")
                                       : std::vector<std::string>{"li_kuhn", "bendaniel_duke", "zhu_kroemer"};
  std::vector<OrderingPreset> presets;
  std::vector<std::string> header{"q", "V"};
  for (const auto& n : names) {
    try {
      presets.push_back(OrderingPreset::from_name(n));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(s.config.source(), s.config.line_of("veff.orderings"), e.what());
    }
    header.push_back("V_eff_" + to_string(presets.back().name));
  }
  const fs::path path = dir / "veff.csv";
  CsvWriter csv(path, provenance("veff", s), header);
  for (int i = 0; i < grid.size(); ++i) {
    const double q = grid[i];
    csv.cell(q).cell(s.potential.value(q));
    for (const auto& preset : presets) {
      csv.cell(symbol::decompose(s.mass, s.potential, preset.params, s.theta, q, s.constants).real_potential());
    }
    csv.end_row();
  }
  return path;
}

double default_q_ref(const Scenario& s, const Grid1D& grid) {
  if (s.config.has("reduce.q_ref")) return s.config.number("reduce.q_ref");
  return s.mass.kind() == "power_law" ? 0.0 : grid.q_min();
}

std::vector<fs::path> run_reduce(const Scenario& s, const fs::path& dir) {
  const Grid1D& grid = require_grid(s);
  const pct::Reduction red(s.mass, s.potential, s.ordering.params, default_q_ref(s, grid), grid.q_min(), grid.q_max(),
                           s.constants);
  std::vector<fs::path> written;
  const fs::path path = dir / "reduce.csv";
  {
    CsvWriter csv(path, provenance("reduce", s), {"q", "x", "V_red"});
    for (int i = 0; i < grid.size(); ++i) {
      const double q = grid[i];
      csv.cell(q).cell(red.coordinate_map(q)).cell(red.reduced_potential_at_q(q));
      csv.end_row();
    }
  }
  written.push_back(path);

  if (s.mass.kind() == "power_law") {
    const ParamMap params = s.config.section_numbers("mass");
    const double rho = params.at("rho");
    const double tau = params.count("tau") ? params.at("tau") : 1.0;
    const double q_sample = 0.5 * (grid.q_min() + grid.q_max());
    const double coeff = pct::centrifugal_coefficient(s.ordering.params, rho, tau, q_sample, s.constants);
    const fs::path nu_path = dir / "nu.csv";
    CsvWriter csv(nu_path, provenance("reduce", s), {"ordering", "rho", "coefficient", "nu", "nu_table"});
    csv.cell(to_string(s.ordering.name)).cell(rho).cell(coeff);
    csv.cell(pct::bessel_index_from_coefficient(coeff, s.constants));
    if (s.ordering.name == OrderingName::Custom) {
      csv.cell(std::string("NA"));
    } else {
      csv.cell(pct::bessel_index(s.ordering, rho));
    }
    csv.end_row();
    written.push_back(nu_path);
  }
  return written;
}

fs::path run_spectrum(const Scenario& s, const fs::path& dir) {
  const Grid1D& grid = require_grid(s);
  const int count = s.config.integer("spectrum.count", 5);
  if (count < 1 || count > grid.size() - 2) {
    throw ConfigError(s.config.source(), s.config.line_of("spectrum.count"), "spectrum.count out of range");
  }
  const auto vr = oracle::vonroos_matrix(s.mass, s.potential, s.ordering.params, grid, s.constants);
  const auto e_vr = oracle::tridiagonal_eigenvalues(vr);

  const double q_ref = grid.q_min();
  const pct::Reduction red(s.mass, s.potential, s.ordering.params, q_ref, grid.q_min(), grid.q_max(), s.constants);
  const Grid1D xgrid(red.coordinate_map(grid.q_min()), red.coordinate_map(grid.q_max()), grid.size());
  std::vector<double> v_interior;
  v_interior.reserve(static_cast<std::size_t>(grid.size() - 2));
  for (int i = 1; i < xgrid.size() - 1; ++i) v_interior.push_back(red.reduced_potential(xgrid[i]));
  const auto e_red = oracle::tridiagonal_eigenvalues(oracle::unit_mass_matrix(xgrid, v_interior, s.constants));

  const fs::path path = dir / "spectrum.csv";
  CsvWriter csv(path, provenance("spectrum", s), {"n", "E_vonroos", "E_reduced", "rel_diff"});
  for (int n = 0; n < count; ++n) {
    const double a = e_vr[static_cast<std::size_t>(n)];
    const double b = e_red[static_cast<std::size_t>(n)];
    csv.cell(n).cell(a).cell(b).cell(std::abs(a - b) / std::abs(a));
    csv.end_row();
  }
  return path;
}

void report_warnings(const engine::KernelMatrix& k, int n_slices) {
  for (const auto& w : k.warnings) std::cerr << "warning (N=" << n_slices << "): " << w << '\n';
}

engine::TimeKind parse_kind(const Scenario& s) {
  const std::string k = s.config.get("slices.kind", "imaginary");
  if (k == "imaginary") return engine::TimeKind::Imaginary;
  if (k == "real") return engine::TimeKind::Real;
  throw ConfigError(s.config.source(), s.config.line_of("slices.kind"), "slices.kind must be 'real' or 'imaginary'");
}

fs::path run_propagate(const Scenario& s, const fs::path& dir) {
  const Grid1D& grid = require_grid(s);
  const engine::TimeKind kind = parse_kind(s);
  const double total = s.config.number("slices.total", 1.0);
  const engine::KernelSpec spec{s.mass, s.potential, s.ordering.params, s.theta, s.constants};
  const std::string mode =
      s.config.get("propagate.mode", kind == engine::TimeKind::Imaginary ? "ground_state" : "kernel");

  const auto op = oracle::vonroos_matrix(s.mass, s.potential, s.ordering.params, grid, s.constants);

  if (mode == "ground_state") {
    if (kind != engine::TimeKind::Imaginary) {
      throw ConfigError(s.config.source(), s.config.line_of("propagate.mode"),
                        "ground_state extraction needs slices.kind = imaginary");
    }
    std::vector<double> sweep;
    if (s.config.has("slices.sweep")) {
      sweep = s.config.numbers("slices.sweep");
    } else {
      sweep.push_back(static_cast<double>(s.config.integer("slices.n", 100)));
    }
    const double e_oracle = oracle::tridiagonal_eigenvalues(op).front();
    const fs::path path = dir / "propagate.csv";
    CsvWriter csv(path, provenance("propagate", s),
                  {"n_slices", "epsilon", "E0_engine", "E0_oracle", "rel_err", "iterations"});
    for (double nd : sweep) {
      const engine::SliceConfig cfg{static_cast<int>(nd), total, kind};
      const auto composed = engine::compose_propagator(cfg, grid, spec);
      report_warnings(composed, cfg.n_slices);
      const auto gs = engine::extract_ground_state(composed, total, s.constants);
      csv.cell(cfg.n_slices).cell(cfg.epsilon()).cell(gs.energy).cell(e_oracle);
      csv.cell(std::abs(gs.energy - e_oracle) / std::abs(e_oracle)).cell(gs.iterations);
      csv.end_row();
    }
    return path;
  }
  if (mode != "kernel") {
    throw ConfigError(s.config.source(), s.config.line_of("propagate.mode"),
                      "propagate.mode must be 'ground_state' or 'kernel'");
  }

  const engine::SliceConfig cfg{s.config.integer("slices.n", 100), total, kind};
  const auto composed = engine::compose_propagator(cfg, grid, spec);
  report_warnings(composed, cfg.n_slices);
  const double q_i_req = s.config.number("propagate.q_i", 0.5 * (grid.q_min() + grid.q_max()));
  const int i_idx =
      std::clamp(static_cast<int>(std::lround((q_i_req - grid.q_min()) / grid.spacing())), 1, grid.size() - 2);

  const std::size_t interior = static_cast<std::size_t>(grid.size() - 2);
  const auto n_max = static_cast<std::size_t>(s.config.integer("propagate.n_max", static_cast<int>(interior)));
  const auto eigs = oracle::eigensolve(op, std::min(n_max, interior));

  const fs::path path = dir / "propagate.csv";
  CsvWriter csv(path, provenance("propagate", s), {"q_f", "q_i", "re_K", "im_K", "re_K_spectral", "im_K_spectral"});
  for (int f = 1; f < grid.size() - 1; ++f) {
    const auto k = composed.amplitude(f, i_idx);
    const auto sp = engine::spectral_propagator(eigs, total, kind, grid[f], grid[i_idx], eigs.values.size(),
                                                s.constants);
    csv.cell(grid[f]).cell(grid[i_idx]).cell(k.real()).cell(k.imag()).cell(sp.value.real()).cell(sp.value.imag());
    csv.end_row();
  }
  return path;
}

fs::path run_curved(const Scenario& s, const fs::path& dir) {
  const std::string name = s.config.get("curved.metric");
  const ParamMap params = s.config.section_numbers("curved", {"metric", "points", "momenta", "v0", "derivatives"});
  curved::Metric metric = [&] {
    try {
      return curved::make_metric(name, params);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(s.config.source(), s.config.line_of("curved.metric"), e.what());
    }
  }();
  if (s.config.get("curved.derivatives", "analytic") == "fd") metric = metric.with_finite_differences();

  const auto points = parse_points(s, "curved.points");
  const auto momenta = parse_points(s, "curved.momenta");
  if (momenta.size() != 1 && momenta.size() != points.size()) {
    throw ConfigError(s.config.source(), s.config.line_of("curved.momenta"),
                      "curved.momenta needs one entry or one per point");
  }
  const double v0 = s.config.number("curved.v0", 0.0);
  const curved::Potential v = [v0](const curved::Vec&) { return v0; };

  const int n = metric.dim();
  std::vector<std::string> header{"point"};
  for (int i = 0; i < n; ++i) header.push_back("q" + std::to_string(i));
  for (int i = 0; i < n; ++i) header.push_back("p" + std::to_string(i));
  for (int l = 0; l < n; ++l)
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) header.push_back("Gamma_" + std::to_string(l) + std::to_string(m) + std::to_string(k));
  for (const char* c : {"R", "re_H", "im_H", "H_weyl"}) header.emplace_back(c);

  const fs::path path = dir / "curved.csv";
  CsvWriter csv(path, provenance("curved", s), header);
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const auto& qv = points[idx];
    const auto& pv = momenta.size() == 1 ? momenta.front() : momenta[idx];
    if (static_cast<int>(qv.size()) != n || static_cast<int>(pv.size()) != n) {
      throw ConfigError(s.config.source(), s.config.line_of("curved.points"),
                        "point " + std::to_string(idx) + " does not match metric dimension " + std::to_string(n));
    }
    const curved::CurvedPoint pt{Eigen::Map<const curved::Vec>(qv.data(), n), Eigen::Map<const curved::Vec>(pv.data(), n)};
    const auto con = curved::christoffel(metric, pt.q);
    const double r = curved::ricci_scalar(metric, pt.q);
    const auto h = curved::curved_symbol(metric, v, s.theta, pt, s.constants);
    csv.cell(idx);
    for (double x : qv) csv.cell(x);
    for (double x : pv) csv.cell(x);
    for (double g : con.christoffel) csv.cell(g);
    csv.cell(r).cell(h.real()).cell(h.imag()).cell(curved::weyl_symbol(metric, v, pt, s.constants));
    csv.end_row();
  }
  return path;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"symbol", "veff", "reduce", "spectrum", "propagate", "curved"};
  return names;
}

std::vector<fs::path> run_subcommand(const std::string& name, const Scenario& scenario, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  if (name == "symbol") return {run_symbol(scenario, out_dir)};
  if (name == "veff") return {run_veff(scenario, out_dir)};
  if (name == "reduce") return run_reduce(scenario, out_dir);
  if (name == "spectrum") return {run_spectrum(scenario, out_dir)};
  if (name == "propagate") return {run_propagate(scenario, out_dir)};
  if (name == "curved") return {run_curved(scenario, out_dir)};
  throw std::invalid_argument("unknown subcommand '" + name + "'");
}

void write_manifest(const fs::path& out_dir, const ManifestInfo& info) {
  std::ofstream out(out_dir / "manifest.txt", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + out_dir.string());
  out << "tool: pdm-lab " << info.version << '\n';
  out << "subcommand: " << info.subcommand << '\n';
  out << "config: " << info.config_path << '\n';
  out << "overrides:";
  if (info.overrides.empty()) out << " none";
  out << '\n';
  for (const auto& o : info.overrides) out << "  " << o << '\n';
  const char* fd = std::getenv("PDM_LAB_FD_STEP");
  out << "PDM_LAB_FD_STEP: " << (fd && *fd ? fd : "unset") << '\n';
  out << "scenario: " << info.resolved_scenario << '\n';
  out << "outputs:\n";
  for (const auto& p : info.outputs) out << "  " << p.filename().string() << '\n';
}

}  // namespace pdm::cli
