#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "levinson/error.hpp"
#include "levinson/model.hpp"
#include "levinson/solutions.hpp"

namespace levinson {

// ---------------------------------------------------------------------------
// Wronskian and Jost function
// ---------------------------------------------------------------------------

/// {u, v} = (u(n) v(n+1) - u(n+1) v(n)) / 2, checked to be independent of n
/// over the common index range (relative 1e-10 of the largest product term).
inline cplx wronskian(const SolutionSequence& u, const SolutionSequence& v) {
  if (u.z != v.z) throw InvalidInput("wronskian needs solutions at the same spectral point");
  const long last = std::min(u.n_max(), v.n_max());
  if (last < 0) throw InvalidInput("wronskian needs at least two sites");
  const cplx reference = 0.5 * (u(-1) * v(0) - u(0) * v(-1));
  double scale = 0.0;
  double drift = 0.0;
  for (long n = -1; n < last; ++n) {
    const cplx a = u(n) * v(n + 1);
    const cplx b = u(n + 1) * v(n);
    scale = std::max(scale, std::abs(a) + std::abs(b));
    drift = std::max(drift, std::abs(0.5 * (a - b) - reference));
  }
  if (drift > 1e-10 * scale) {
    throw NumericalFailure(FailureKind::not_solutions, "wronskian varies by " + std::to_string(drift));
  }
  return reference;
}

/// Omega(lambda + i0) = zeta theta(-1, lambda), lambda in (-1, 1).
inline cplx jost_function(const Potential& p, const SpectralPoint& point) {
  detail::require_interior(point);
  return point.zeta() * detail::jost_at_minus_one<cplx>(p, point.lambda(), detail::rim_power(point.theta()));
}

/// Omega(z) for real |z| > 1; real-valued.
inline double jost_function(const Potential& p, const OffAxisPoint& point) {
  const double zeta = point.zeta();
  return zeta * detail::jost_at_minus_one<double>(p, point.z(), detail::real_power(zeta));
}

/// Omega(+-1) = (+-1) theta(-1, +-1).
inline double jost_function_threshold(const Potential& p, int sign) {
  if (sign != 1 && sign != -1) throw InvalidInput("threshold sign must be +1 or -1");
  const double s = double(sign);
  return s * detail::jost_at_minus_one<double>(
                 p, s, [sign](long n) { return (sign == 1 || n % 2 == 0) ? 1.0 : -1.0; });
}

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

struct ThresholdClassification {
  double omega_minus = 1.0;  // Omega(-1)
  double omega_plus = 1.0;   // Omega(+1)
  double delta_minus = 0.0;  // 1/2 iff Omega(-1) = 0
  double delta_plus = 0.0;
  int s_minus = 1;           // limit of s(lambda) at lambda = -1
  int s_plus = 1;
};

/// Omega(+-1) is resonant below tol/10, generic above 10 tol, ambiguous between.
inline ThresholdClassification classify_thresholds(const Potential& p, double tol_threshold) {
  ThresholdClassification out;
  out.omega_minus = jost_function_threshold(p, -1);
  out.omega_plus = jost_function_threshold(p, +1);
  auto classify = [tol_threshold](double omega, const char* side) {
    const double size = std::abs(omega);
    if (size > 0.1 * tol_threshold && size < 10.0 * tol_threshold) {
      throw NumericalFailure(FailureKind::ambiguous_threshold,
                             std::string("|Omega(") + side + ")| = " + std::to_string(size) +
                                 " lies within a decade of tol_threshold");
    }
    return size < tol_threshold;
  };
  if (classify(out.omega_minus, "-1")) {
    out.delta_minus = 0.5;
    out.s_minus = -1;
  }
  if (classify(out.omega_plus, "+1")) {
    out.delta_plus = 0.5;
    out.s_plus = -1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bound states
// ---------------------------------------------------------------------------

struct BoundState {
  double z = 0.0;
  double zeta = 0.0;
  double residual = 0.0;  // |Omega(z)| at the returned root
};

struct BoundStateResult {
  std::vector<BoundState> states;  // ascending z
  int count = 0;                   // N
  int eigen_count = 0;             // eigenvalues of the truncation outside [-1, 1]
  int truncation_size = 0;
};

namespace detail {

inline double bisect_jost_zero(const Potential& p, double lo, double hi, double f_lo, double tol) {
  for (int iter = 0; iter < 200 && hi - lo > tol * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = jost_function(p, OffAxisPoint(mid));
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Zeros of z -> Omega(side * z) for z in (1, z_max], scanned on
/// 1 + (z_max - 1) q^k, geometric towards the threshold.
inline std::vector<double> scan_side(const Potential& p, int side, double z_max, int points,
                                     double tol_root) {
  const double span = z_max - 1.0;
  const double closest = std::min(1e-12, 0.5 * span);
  const double ratio = std::pow(closest / span, 1.0 / double(points - 1));
  std::vector<double> abscissa(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) abscissa[std::size_t(k)] = 1.0 + span * std::pow(ratio, double(points - 1 - k));
  abscissa.back() = z_max;
  std::vector<double> roots;
  double prev_z = side * abscissa[0];
  double prev_f = jost_function(p, OffAxisPoint(prev_z));
  for (int k = 1; k < points; ++k) {
    const double z = side * abscissa[std::size_t(k)];
    const double f = jost_function(p, OffAxisPoint(z));
    if (f == 0.0) {
      roots.push_back(z);
    } else if ((f < 0.0) != (prev_f < 0.0) && prev_f != 0.0) {
      const double lo = std::min(prev_z, z);
      const double hi = std::max(prev_z, z);
      const double f_lo = lo == prev_z ? prev_f : f;
      roots.push_back(bisect_jost_zero(p, lo, hi, f_lo, tol_root));
    }
    prev_z = z;
    prev_f = f;
  }
  return roots;
}

}  // namespace detail

/// Eigenvalues of H outside [-1, 1] as zeros of the Jost function, cross-checked
/// against a dense eigensolve of a truncation of size >= 2000.
inline BoundStateResult bound_states(const Potential& p, const GridSpec& g) {
  const double z_max = g.z_max_for(p);
  if (!(z_max > 1.0)) throw InvalidInput("z_max must exceed 1");
  BoundStateResult out;
  std::vector<double> roots;
  for (int side : {-1, +1}) {
    const auto found = detail::scan_side(p, side, z_max, g.scan_points, g.tol_root);
    roots.insert(roots.end(), found.begin(), found.end());
  }
  std::sort(roots.begin(), roots.end());
  for (double z : roots) {
    const OffAxisPoint point(z);
    out.states.push_back({z, point.zeta(), std::abs(jost_function(p, point))});
  }
  out.count = int(out.states.size());

  out.truncation_size = std::max(2000, 4 * int(p.support()) + 64);
  const auto eigenvalues = hamiltonian_truncation(p, out.truncation_size).eigenvalues();
  const double edge = 1.0 + 10.0 * g.tol_root;
  for (double e : eigenvalues) {
    if (std::abs(e) > z_max) {
      throw NumericalFailure(FailureKind::z_max_too_small,
                             "truncation eigenvalue " + std::to_string(e) + " beyond z_max");
    }
    if (std::abs(e) > edge) ++out.eigen_count;
  }
  if (out.eigen_count != out.count) {
    throw NumericalFailure(FailureKind::oracle_mismatch,
                           std::to_string(out.count) + " Jost zeros vs " +
                               std::to_string(out.eigen_count) + " truncation eigenvalues");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scattering data on the theta-midpoint grid
// ---------------------------------------------------------------------------

struct ScatteringData {
  std::vector<SpectralPoint> grid;  // increasing lambda
  std::vector<cplx> omega;
  std::vector<double> amplitude;
  std::vector<double> phase;        // unwrapped eta
  std::vector<cplx> smatrix;        // exp(-2 i eta) = conj(Omega)/Omega
  double eta_minus = 0.0;           // eta(-1), extrapolated
  double eta_plus = 0.0;            // eta(+1), extrapolated
  ThresholdClassification thresholds;
  BoundStateResult bound;
  double tol_threshold = 1e-4;

  int size() const { return int(grid.size()); }
  int count_n() const { return bound.count; }
};

/// Node i of the m-point grid in increasing lambda: theta = (m - i - 1/2) pi / m.
inline double midpoint_theta(int m, int i) { return (double(m - i) - 0.5) * pi / double(m); }

inline ScatteringData scattering_grid(const Potential& p, const GridSpec& g) {
  g.validate();
  detail::require_free_tail(p, g.n_tail);
  const int m = g.m_theta;
  ScatteringData d;
  d.tol_threshold = g.tol_threshold;
  d.grid.reserve(std::size_t(m));
  for (int i = 0; i < m; ++i) d.grid.push_back(SpectralPoint::from_theta(midpoint_theta(m, i)));
  d.omega.resize(std::size_t(m));
  d.amplitude.resize(std::size_t(m));
  d.phase.resize(std::size_t(m));
  d.smatrix.resize(std::size_t(m));
  for (int i = 0; i < m; ++i) {
    const cplx omega = jost_function(p, d.grid[std::size_t(i)]);
    d.omega[std::size_t(i)] = omega;
    d.amplitude[std::size_t(i)] = std::abs(omega);
    d.smatrix[std::size_t(i)] = std::conj(omega) / omega;
  }
  // Unwrap from the lambda = -1 end.
  d.phase[0] = std::arg(d.omega[0]);
  for (int i = 1; i < m; ++i) {
    const double step = std::arg(d.omega[std::size_t(i)] / d.omega[std::size_t(i - 1)]);
    if (std::abs(step) >= 0.5 * pi) {
      throw NumericalFailure(FailureKind::grid_too_coarse,
                             "phase jump " + std::to_string(step) + " at lambda = " +
                                 std::to_string(d.grid[std::size_t(i)].lambda()));
    }
    d.phase[std::size_t(i)] = d.phase[std::size_t(i - 1)] + step;
  }
  // eta is smooth in theta up to the thresholds; linear extrapolation from the
  // two outermost nodes (theta offsets h/2 and 3h/2).
  d.eta_minus = 1.5 * d.phase[0] - 0.5 * d.phase[1];
  d.eta_plus = 1.5 * d.phase[std::size_t(m - 1)] - 0.5 * d.phase[std::size_t(m - 2)];
  d.thresholds = classify_thresholds(p, g.tol_threshold);
  d.bound = bound_states(p, g);
  return d;
}

/// |eta(+1) - eta(-1) - pi (N + Delta_- + Delta_+)|.
inline double levinson_residual(const ScatteringData& d) {
  const double expected =
      pi * (double(d.count_n()) + d.thresholds.delta_minus + d.thresholds.delta_plus);
  return std::abs(d.eta_plus - d.eta_minus - expected);
}

}  // namespace levinson
