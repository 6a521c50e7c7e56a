#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "levinson/cli/config.hpp"
#include "levinson/error.hpp"
#include "levinson/model.hpp"
#include "levinson/rescaled.hpp"
#include "levinson/scattering.hpp"
#include "levinson/solutions.hpp"
#include "levinson/specops.hpp"
#include "levinson/topology.hpp"

namespace levinson::cli {

enum ExitCode : int { exit_pass = 0, exit_config = 2, exit_assumption = 3, exit_numerical = 4, exit_mismatch = 5 };

struct Options {
  bool check = false;   // exit 5 when an identity check fails
  bool refine = false;  // double m_theta, m_beta and n_edge
};

/// Pass thresholds of the identity checks.
struct Thresholds {
  static constexpr double levinson = 1e-3 * pi;
  static constexpr double wave_identity = 1e-6;
  static constexpr double refinement_ratio = 4.0;
  static constexpr double rounding_floor = 1e-12;  // residuals below this cannot shrink further
  static constexpr double isometry = 1e-6;
  static constexpr double completeness = 1e-4;
  static constexpr double coisometry = 1e-6;
  static constexpr double intertwining = 1e-5;
  static constexpr double s_unitarity = 1e-8;
  static constexpr double s_commutator = 1e-6;
  static constexpr double shift = 1e-6;
  static constexpr double rounding_slack = 1e-10;  // decay-estimate slack
};

namespace detail {

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& hash, const std::string& header)
      : out_(path) {
    if (!out_) throw InvalidInput("cannot write " + path.string());
    out_ << "# config_hash: " << hash << "\n" << header << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

inline void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

inline std::filesystem::path output_dir(const RunConfig& c) {
  std::filesystem::path dir(c.outputs.directory);
  std::filesystem::create_directories(dir);
  return dir;
}

inline json compactness_json(const CompactnessReport& r, std::size_t keep = 16) {
  std::vector<double> head(r.singular_values.begin(),
                           r.singular_values.begin() + std::min(keep, r.singular_values.size()));
  return json{{"s1", r.s1},
              {"rank_at_tenth", r.rank_tenth},
              {"rank_limit", r.rank_limit},
              {"s1_refined", r.s1_refined},
              {"relative_change", r.relative_change},
              {"dimension", r.dimension},
              {"singular_values", head},
              {"pass", r.passed()}};
}

inline bool identity_refinement_ok(double base, double refined) {
  if (base <= Thresholds::rounding_floor) return refined <= Thresholds::rounding_floor;
  return refined * Thresholds::refinement_ratio <= base;
}

}  // namespace detail

inline RunConfig apply_options(RunConfig c, const Options& o) {
  if (o.refine) {
    c.grids.m_theta *= 2;
    c.grids.m_beta *= 2;
    c.grids.n_edge *= 2;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

inline json scatter_stage(const RunConfig& c, const Potential& p, const ScatteringData& d) {
  const auto hash = c.hash();
  const auto dir = detail::output_dir(c);
  if (c.outputs.wants("csv")) {
    detail::CsvWriter s(dir / "scatter.csv", hash, "lambda,theta,re_omega,im_omega,amplitude,eta,re_s,im_s");
    for (int i = 0; i < d.size(); ++i) {
      const auto k = std::size_t(i);
      s.row({detail::fmt(d.grid[k].lambda()), detail::fmt(d.grid[k].theta()), detail::fmt(d.omega[k].real()),
             detail::fmt(d.omega[k].imag()), detail::fmt(d.amplitude[k]), detail::fmt(d.phase[k]),
             detail::fmt(d.smatrix[k].real()), detail::fmt(d.smatrix[k].imag())});
    }
    detail::CsvWriter b(dir / "boundstates.csv", hash, "z,zeta,residual");
    for (const auto& state : d.bound.states)
      b.row({detail::fmt(state.z), detail::fmt(state.zeta), detail::fmt(state.residual)});
  }
  json bound = json::array();
  for (const auto& state : d.bound.states)
    bound.push_back({{"z", state.z}, {"zeta", state.zeta}, {"residual", state.residual}});
  const double residual = levinson_residual(d);
  return json{{"config_hash", hash},
              {"support", p.support()},
              {"envelope_const", p.envelope_const()},
              {"count_n", d.count_n()},
              {"eigen_count", d.bound.eigen_count},
              {"truncation_size", d.bound.truncation_size},
              {"bound_states", bound},
              {"omega_minus", d.thresholds.omega_minus},
              {"omega_plus", d.thresholds.omega_plus},
              {"delta_minus", d.thresholds.delta_minus},
              {"delta_plus", d.thresholds.delta_plus},
              {"s_minus", d.thresholds.s_minus},
              {"s_plus", d.thresholds.s_plus},
              {"eta_minus", d.eta_minus},
              {"eta_plus", d.eta_plus},
              {"levinson_residual", residual},
              {"threshold_band", {{"resonant_below", c.grids.tol_threshold},
                                  {"ambiguous_from", 0.1 * c.grids.tol_threshold},
                                  {"ambiguous_to", 10.0 * c.grids.tol_threshold}}},
              {"pass", residual <= Thresholds::levinson}};
}

inline json waveop_stage(const RunConfig& c, const Potential& p, const ScatteringData& d) {
  const GridSpec& g = c.grids;
  GridSpec finer = g;
  finer.m_theta = 2 * g.m_theta;
  finer.n_tail = std::max(finer.n_tail, finer.n_site);
  const double wave_identity = wave_identity_residual(p, d, g);
  const double wave_identity_refined = wave_identity_residual(p, scattering_grid(p, finer), finer);
  const bool wave_identity_pass = wave_identity <= Thresholds::wave_identity &&
                                  detail::identity_refinement_ok(wave_identity, wave_identity_refined);

  const auto checks = wave_operator_checks(p, d, g);
  const bool checks_pass = checks.isometry <= Thresholds::isometry &&
                           checks.completeness <= Thresholds::completeness &&
                           checks.coisometry <= Thresholds::coisometry &&
                           checks.intertwining <= Thresholds::intertwining &&
                           checks.s_unitarity <= Thresholds::s_unitarity &&
                           checks.s_commutator <= Thresholds::s_commutator;

  const auto k0 = k0_term(p, d, g);
  std::vector<double> k0_head(k0.singular_values.begin(),
                              k0.singular_values.begin() + std::min<std::size_t>(16, k0.singular_values.size()));
  const auto symbol = u_symbol_remainder(g);
  const auto remainder = wave_operator_remainder(p, d, g);
  const auto shift = shift_identity_check(g);
  const bool shift_pass = shift.exact_residual <= Thresholds::shift && shift.remainder.passed();

  return json{
      {"config_hash", c.hash()},
      {"wave_identity",
       {{"residual", wave_identity},
        {"m_theta", g.m_theta},
        {"residual_refined", wave_identity_refined},
        {"m_theta_refined", finer.m_theta},
        {"ratio", wave_identity_refined > 0.0 ? wave_identity / wave_identity_refined : 0.0},
        {"pass", wave_identity_pass}}},
      {"wave_operator",
       {{"isometry", checks.isometry},
        {"completeness", checks.completeness},
        {"coisometry_interior", checks.coisometry},
        {"intertwining", checks.intertwining},
        {"s_unitarity", checks.s_unitarity},
        {"s_commutator", checks.s_commutator},
        {"s_consistency", checks.s_consistency},
        {"u_coisometry", checks.u_coisometry},
        {"interior_sites", g.interior()},
        {"pass", checks_pass}}},
      {"k0",
       {{"hilbert_schmidt", k0.hilbert_schmidt},
        {"estimate_constant", k0.estimate_constant},
        {"singular_values", k0_head}}},
      {"u_symbol", detail::compactness_json(symbol)},
      {"wave_remainder", detail::compactness_json(remainder)},
      {"shift_identity",
       {{"exact_residual", shift.exact_residual},
        {"h0_residual", shift.h0_residual},
        {"remainder", detail::compactness_json(shift.remainder)},
        {"pass", shift_pass}}},
      {"calibration", {{"rank_tau", 0.1}, {"stability", 0.05}}},
      {"pass", wave_identity_pass && checks_pass && symbol.passed() && remainder.passed() && shift_pass}};
}

inline json winding_stage(const RunConfig& c, const Potential& p, const ScatteringData& d) {
  const auto curve = assemble_boundary(p, d, c.grids);
  const auto w = winding_number(curve, d, c.grids.tol_winding);
  const auto expected = signed_sum(d);
  if (c.outputs.wants("csv")) {
    detail::CsvWriter out(detail::output_dir(c) / "winding.csv", c.hash(), "edge,param,re,im,phase_unwrapped");
    for (std::size_t e = 0; e < curve.edges.size(); ++e) {
      const auto& edge = curve.edges[e];
      for (std::size_t k = 0; k < edge.values.size(); ++k)
        out.row({to_string(edge.edge), detail::fmt(edge.param[k]), detail::fmt(edge.values[k].real()),
                 detail::fmt(edge.values[k].imag()), detail::fmt(w.phase[e][k])});
    }
  }
  double decomposition = 0.0;
  for (std::size_t e = 0; e < 4; ++e) decomposition = std::max(decomposition, std::abs(w.per_edge[e] - expected[e]));
  return json{{"config_hash", c.hash()},
              {"winding", w.winding},
              {"raw_phase_total", w.raw_phase_total},
              {"per_edge", {{"S", w.per_edge[0]}, {"gamma_minus", w.per_edge[1]},
                            {"one", w.per_edge[2]}, {"gamma_plus", w.per_edge[3]}}},
              {"signed_sum", {{"S", expected[0]}, {"gamma_minus", expected[1]},
                              {"one", expected[2]}, {"gamma_plus", expected[3]}}},
              {"decomposition_error", decomposition},
              {"n_from_scattering", w.n_from_scattering},
              {"min_modulus", w.min_modulus},
              {"max_step", w.max_step},
              {"match", w.match},
              {"pass", w.match}};
}

/// Checks the exact decay inequality at every grid node over n < n_site.
inline json decay_stage(const RunConfig& c, const Potential& p, const ScatteringData& d) {
  double worst_c = 0.0;
  double stated = std::numeric_limits<double>::infinity();
  double proven = std::numeric_limits<double>::infinity();
  for (const auto& point : d.grid) {
    const auto r = decay_diagnostic(p, point, c.grids.n_site - 1, c.grids.n_tail);
    worst_c = std::max(worst_c, r.empirical_c);
    stated = std::min(stated, r.stated_slack);
    proven = std::min(proven, r.proven_slack);
  }
  return json{{"config_hash", c.hash()},
              {"empirical_c", worst_c},
              {"stated_slack", stated},
              {"proven_slack", proven},
              {"pass", stated >= -Thresholds::rounding_slack}};
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Runs `body`, mapping library errors to exit codes.
inline int guarded(const std::function<int()>& body, std::ostream& err = std::cerr) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const AssumptionViolated& e) {
    err << e.what() << "\n";
    return exit_assumption;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const InvalidInput& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  }
}

inline int cmd_validate(const std::string& path, const Options& o, std::ostream& out = std::cout) {
  return guarded([&] {
    const auto c = apply_options(load_config(path), o);
    c.potential.build();
    out << c.normalized().dump(2) << "\n" << "config_hash: " << c.hash() << "\n";
    return int(exit_pass);
  });
}

inline int cmd_scatter(const std::string& path, const Options& o, std::ostream& out = std::cout) {
  return guarded([&] {
    const auto c = apply_options(load_config(path), o);
    const auto p = c.potential.build();
    const auto d = scattering_grid(p, c.grids);
    const auto j = scatter_stage(c, p, d);
    if (c.outputs.wants("json")) detail::write_json(detail::output_dir(c) / "scatter.json", j);
    out << "N = " << d.count_n() << ", delta_minus = " << d.thresholds.delta_minus
        << ", delta_plus = " << d.thresholds.delta_plus << ", levinson residual = "
        << detail::fmt(j["levinson_residual"].get<double>()) << "\n";
    return (o.check && !j["pass"].get<bool>()) ? int(exit_mismatch) : int(exit_pass);
  });
}

inline int cmd_waveop(const std::string& path, const Options& o, std::ostream& out = std::cout) {
  return guarded([&] {
    const auto c = apply_options(load_config(path), o);
    const auto p = c.potential.build();
    const auto d = scattering_grid(p, c.grids);
    const auto j = waveop_stage(c, p, d);
    detail::write_json(detail::output_dir(c) / "waveop.json", j);
    out << "identity residual = " << detail::fmt(j["wave_identity"]["residual"].get<double>())
        << ", u symbol s1 = " << detail::fmt(j["u_symbol"]["s1"].get<double>())
        << ", wave remainder s1 = " << detail::fmt(j["wave_remainder"]["s1"].get<double>())
        << ", pass = " << (j["pass"].get<bool>() ? "true" : "false") << "\n";
    return (o.check && !j["pass"].get<bool>()) ? int(exit_mismatch) : int(exit_pass);
  });
}

inline int cmd_winding(const std::string& path, const Options& o, std::ostream& out = std::cout) {
  return guarded([&] {
    const auto c = apply_options(load_config(path), o);
    const auto p = c.potential.build();
    const auto d = scattering_grid(p, c.grids);
    const auto j = winding_stage(c, p, d);
    if (c.outputs.wants("json")) detail::write_json(detail::output_dir(c) / "winding.json", j);
    out << "winding = " << j["winding"].get<int>() << ", N = " << d.count_n()
        << ", match = " << (j["match"].get<bool>() ? "true" : "false") << "\n";
    return (o.check && !j["match"].get<bool>()) ? int(exit_mismatch) : int(exit_pass);
  });
}

/// Full pipeline.  report.json is deterministic; timings go to `out` only.
inline int cmd_report(const std::string& path, const Options& o, std::ostream& out = std::cout) {
  return guarded([&] {
    const auto c = apply_options(load_config(path), o);
    const auto p = c.potential.build();
    std::vector<std::pair<std::string, double>> timings;
    auto clock = std::chrono::steady_clock::now();
    auto lap = [&](const std::string& name) {
      const auto now = std::chrono::steady_clock::now();
      timings.emplace_back(name, std::chrono::duration<double>(now - clock).count());
      clock = now;
    };
    const auto d = scattering_grid(p, c.grids);
    const auto scatter = scatter_stage(c, p, d);
    lap("scatter");
    const auto decay = decay_stage(c, p, d);
    lap("decay");
    const auto waveop = waveop_stage(c, p, d);
    lap("waveop");
    const auto winding = winding_stage(c, p, d);
    lap("winding");

    const bool all_pass = scatter["pass"].get<bool>() && decay["pass"].get<bool>() &&
                          waveop["pass"].get<bool>() && winding["pass"].get<bool>();
    const json report{{"config_hash", c.hash()},
                      {"config", c.normalized()},
                      {"scattering", scatter},
                      {"decay", decay},
                      {"operators", waveop},
                      {"winding", winding},
                      {"all_pass", all_pass}};
    if (c.outputs.wants("json")) detail::write_json(detail::output_dir(c) / "report.json", report);

    out << "config_hash       " << c.hash() << "\n"
        << "N                 " << d.count_n() << " (truncation eigenvalues " << d.bound.eigen_count << ")\n"
        << "delta -/+         " << d.thresholds.delta_minus << " / " << d.thresholds.delta_plus << "\n"
        << "levinson residual " << detail::fmt(scatter["levinson_residual"].get<double>()) << "\n"
        << "identity residual " << detail::fmt(waveop["wave_identity"]["residual"].get<double>()) << "\n"
        << "u symbol s1 / r   " << detail::fmt(waveop["u_symbol"]["s1"].get<double>()) << " / "
        << waveop["u_symbol"]["rank_at_tenth"].get<int>() << "\n"
        << "wave rem s1 / r   " << detail::fmt(waveop["wave_remainder"]["s1"].get<double>()) << " / "
        << waveop["wave_remainder"]["rank_at_tenth"].get<int>() << "\n"
        << "shift residual    " << detail::fmt(waveop["shift_identity"]["exact_residual"].get<double>()) << "\n"
        << "winding           " << winding["winding"].get<int>() << "\n"
        << "decay slack       " << detail::fmt(decay["stated_slack"].get<double>()) << " (doubled exponent "
        << detail::fmt(decay["proven_slack"].get<double>()) << ")\n";
    for (const auto& [name, seconds] : timings) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f s", seconds);
      out << "time " << name << std::string(13 - std::min<std::size_t>(12, name.size()), ' ') << buf << "\n";
    }
    out << (all_pass ? "ALL PASS" : "FAILED") << "\n";
    return all_pass ? int(exit_pass) : int(exit_mismatch);
  });
}

}  // namespace levinson::cli
