#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "levinson/error.hpp"
#include "levinson/model.hpp"
#include "levinson/scattering.hpp"

namespace levinson {

/// Edges of the boundary of the square in traversal order.
enum class Edge { scattering = 0, gamma_minus = 1, constant = 2, gamma_plus = 3 };

inline const char* to_string(Edge e) {
  switch (e) {
    case Edge::scattering: return "S";
    case Edge::gamma_minus: return "gamma_minus";
    case Edge::constant: return "one";
    case Edge::gamma_plus: return "gamma_plus";
  }
  return "?";
}

struct EdgeSamples {
  Edge edge = Edge::scattering;
  std::vector<double> param;
  std::vector<cplx> values;
};

struct BoundaryCurve {
  std::array<EdgeSamples, 4> edges;
  int s_minus = 1;               // s(-1)
  int s_plus = 1;                // s(+1)
  double corner_mismatch = 0.0;  // sampled S-edge ends against the classified limits
};

/// Gamma_{sign}(alpha) = 1 + (s - 1)/2 [1 - tanh(pi alpha) + sign i sech(pi alpha)].
inline cplx gamma_value(int sign, int s_threshold, double alpha) {
  const double half = 0.5 * (double(s_threshold) - 1.0);
  return 1.0 + half * cplx(1.0 - std::tanh(pi * alpha), double(sign) / std::cosh(pi * alpha));
}

/// Gamma_{sign} on `samples` uniform alpha nodes over [-alpha_max, alpha_max],
/// ascending, end values snapped to s(+-1) and 1.
inline EdgeSamples gamma_curve(int sign, int s_threshold, int samples, double alpha_max) {
  if (sign != 1 && sign != -1) throw InvalidInput("gamma curve sign must be +1 or -1");
  if (s_threshold != 1 && s_threshold != -1) throw InvalidInput("s(+-1) must be +1 or -1");
  if (samples < 2) throw InvalidInput("an edge needs at least two samples");
  EdgeSamples out;
  out.edge = sign < 0 ? Edge::gamma_minus : Edge::gamma_plus;
  for (int k = 0; k < samples; ++k) {
    const double alpha = -alpha_max + 2.0 * alpha_max * k / (samples - 1);
    out.param.push_back(alpha);
    out.values.push_back(gamma_value(sign, s_threshold, alpha));
  }
  out.values.front() = double(s_threshold);
  out.values.back() = 1.0;
  return out;
}

namespace detail {

inline void reverse(EdgeSamples& e) {
  std::reverse(e.param.begin(), e.param.end());
  std::reverse(e.values.begin(), e.values.end());
}

/// s(tanh beta) evaluated directly from the Jost function.
inline cplx rescaled_scattering(const Potential& p, double beta) {
  const auto point = SpectralPoint::from_theta(2.0 * std::atan(std::exp(-beta)));
  const cplx omega = jost_function(p, point);
  return std::conj(omega) / omega;
}

}  // namespace detail

/// s(tanh beta) reaches s(+-1) only like 2 e^{-|beta|}; the S-edge is clamped
/// where that falls below 1e-10.
inline double s_edge_clamp(const GridSpec& g) { return std::max(g.beta_max, 24.0); }

/// The boundary symbol (S, Gamma_-, 1, Gamma_+): S-edge from beta = +inf to
/// -inf, Gamma_- from alpha = -inf to +inf, the constant edge, then Gamma_+
/// from alpha = +inf to -inf.  Infinite edges are clamped (S-edge at
/// s_edge_clamp, Gamma edges at alpha_max) with corner values snapped to their
/// exact limits.
inline BoundaryCurve assemble_boundary(const Potential& p, const ScatteringData& d, const GridSpec& g) {
  BoundaryCurve c;
  c.s_minus = d.thresholds.s_minus;
  c.s_plus = d.thresholds.s_plus;
  const int samples = g.n_edge;
  if (samples < 2) throw InvalidInput("an edge needs at least two samples");

  EdgeSamples s_edge;
  s_edge.edge = Edge::scattering;
  const double clamp = s_edge_clamp(g);
  for (int k = 0; k < samples; ++k) {
    const double beta = clamp - 2.0 * clamp * k / (samples - 1);
    s_edge.param.push_back(beta);
    s_edge.values.push_back(detail::rescaled_scattering(p, beta));
  }
  c.corner_mismatch = std::max(std::abs(s_edge.values.front() - double(c.s_plus)),
                               std::abs(s_edge.values.back() - double(c.s_minus)));
  if (c.corner_mismatch > 1e-4) {
    throw NumericalFailure(FailureKind::corner_mismatch,
                           "S-edge ends differ from s(+-1) by " + std::to_string(c.corner_mismatch));
  }
  s_edge.values.front() = double(c.s_plus);
  s_edge.values.back() = double(c.s_minus);

  EdgeSamples one;
  one.edge = Edge::constant;
  for (int k = 0; k < samples; ++k) {
    one.param.push_back(-clamp + 2.0 * clamp * k / (samples - 1));
    one.values.push_back(1.0);
  }

  EdgeSamples gamma_plus = gamma_curve(+1, c.s_plus, samples, g.alpha_max);
  detail::reverse(gamma_plus);

  c.edges = {std::move(s_edge), gamma_curve(-1, c.s_minus, samples, g.alpha_max), std::move(one),
             std::move(gamma_plus)};
  return c;
}

struct WindingReport {
  int winding = 0;
  double raw_phase_total = 0.0;           // total unwrapped phase / 2 pi
  std::array<double, 4> per_edge{};       // contribution of each edge, in turns
  std::vector<std::vector<double>> phase; // unwrapped phase per sample, per edge
  int n_from_scattering = 0;
  bool match = false;
  double min_modulus = 0.0;
  double max_step = 0.0;                  // largest phase increment between samples
};

/// Unwraps arg along the closed curve; requires increments below pi/2 and a
/// total within tol_winding of an integer.
inline WindingReport winding_number(const BoundaryCurve& c, double tol_winding, int n_bound = 0) {
  WindingReport out;
  out.min_modulus = std::numeric_limits<double>::infinity();
  double running = std::arg(c.edges[0].values.front());
  const double start = running;
  cplx previous = c.edges[0].values.front();
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    std::vector<double> phases;
    double contribution = 0.0;
    for (const cplx& v : c.edges[e].values) {
      out.min_modulus = std::min(out.min_modulus, std::abs(v));
      const double step = std::arg(v / previous);
      out.max_step = std::max(out.max_step, std::abs(step));
      contribution += step;
      running += step;
      phases.push_back(running);
      previous = v;
    }
    out.per_edge[e] = contribution / (2.0 * pi);
    out.phase.push_back(std::move(phases));
  }
  // close the curve
  const double closing = std::arg(c.edges[0].values.front() / previous);
  out.max_step = std::max(out.max_step, std::abs(closing));
  running += closing;
  out.per_edge[0] += closing / (2.0 * pi);

  if (out.max_step >= 0.5 * pi) {
    throw NumericalFailure(FailureKind::undersampled,
                           "phase step " + std::to_string(out.max_step) + " along the boundary curve");
  }
  out.raw_phase_total = (running - start) / (2.0 * pi);
  out.winding = int(std::lround(out.raw_phase_total));
  if (std::abs(out.raw_phase_total - out.winding) >= tol_winding) {
    throw NumericalFailure(FailureKind::not_integer,
                           "winding " + std::to_string(out.raw_phase_total) + " is not an integer");
  }
  out.n_from_scattering = n_bound;
  out.match = out.winding == n_bound;
  return out;
}

inline WindingReport winding_number(const BoundaryCurve& c, const ScatteringData& d, double tol_winding) {
  return winding_number(c, tol_winding, d.count_n());
}

/// winding == N.
inline bool index_theorem_check(const WindingReport& w, const ScatteringData& d) {
  return w.winding == d.count_n();
}

/// Per-edge contributions predicted by the phase shift and the threshold
/// corrections: ((eta(+1) - eta(-1))/pi, -Delta_-, 0, -Delta_+).
inline std::array<double, 4> signed_sum(const ScatteringData& d) {
  return {(d.eta_plus - d.eta_minus) / pi, -d.thresholds.delta_minus, 0.0, -d.thresholds.delta_plus};
}

}  // namespace levinson
