#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "levinson/error.hpp"
#include "levinson/linalg.hpp"
#include "levinson/model.hpp"
#include "levinson/scattering.hpp"
#include "levinson/specops.hpp"

namespace levinson {

// ---------------------------------------------------------------------------
// beta grid and symbols
// ---------------------------------------------------------------------------

/// Periodized uniform grid beta_k = -beta_max + k h, h = 2 beta_max / m, with
/// the dual frequencies xi_q = 2 pi q / (m h) in FFT order (q >= m/2 wraps to q - m).
struct BetaGrid {
  int m = 0;
  double beta_max = 0.0;
  double h = 0.0;
  Eigen::VectorXd beta;
  Eigen::VectorXd xi;

  static BetaGrid make(double beta_max, int m) {
    if (m < 8 || m % 2 != 0) throw InvalidInput("m_beta must be even and >= 8");
    if (!(beta_max > 0.0)) throw InvalidInput("beta_max must be > 0");
    BetaGrid g;
    g.m = m;
    g.beta_max = beta_max;
    g.h = 2.0 * beta_max / m;
    g.beta.resize(m);
    g.xi.resize(m);
    for (int k = 0; k < m; ++k) {
      g.beta(k) = -beta_max + k * g.h;
      const int q = k < m / 2 ? k : k - m;
      g.xi(k) = 2.0 * pi * q / (m * g.h);
    }
    return g;
  }

  static BetaGrid from(const GridSpec& g) { return make(g.beta_max, g.m_beta); }

  int nyquist() const { return m / 2; }
};

enum class Symbol { tanh_pi, sech_pi, tanh_half };

inline const char* to_string(Symbol s) {
  switch (s) {
    case Symbol::tanh_pi: return "tanh_pi";
    case Symbol::sech_pi: return "sech_pi";
    case Symbol::tanh_half: return "tanh_half";
  }
  return "?";
}

/// tanh(pi x), 1/cosh(pi x), tanh(x/2).
inline double evaluate(Symbol s, double x) {
  switch (s) {
    case Symbol::tanh_pi: return std::tanh(pi * x);
    case Symbol::sech_pi: return 1.0 / std::cosh(pi * x);
    case Symbol::tanh_half: return std::tanh(0.5 * x);
  }
  return 0.0;
}

/// b(t) = (e^t + e^-t)^(-1/2) (e^(t/2) + e^(-t/2)); between 1 and sqrt(2).
inline double b_function(double t) {
  return std::sqrt(2.0) * std::cosh(0.5 * t) / std::sqrt(std::cosh(t));
}

// ---------------------------------------------------------------------------
// R = R0 F_sin on the beta grid
// ---------------------------------------------------------------------------

/// Largest site count whose sine modes the beta grid resolves: the local
/// frequency of sin((n+1) theta(beta)) is at most n+1, kept below 3/4 of pi/h.
inline int resolvable_sites(const BetaGrid& g) {
  return std::max(1, int(std::floor(0.75 * pi / g.h)) - 1);
}

namespace detail {

inline Eigen::MatrixXcd r_entries(const BetaGrid& g, int n_sites) {
  Eigen::MatrixXcd r(g.m, n_sites);
  const double scale = std::sqrt(g.h * 2.0 / pi);
  for (int k = 0; k < g.m; ++k) {
    // lambda = tanh(beta): theta = arccos(tanh beta) = 2 atan(e^-beta), (1-lambda^2)^(1/4) = sech^(1/2)
    const double theta = 2.0 * std::atan(std::exp(-g.beta(k)));
    const double root_sech = 1.0 / std::sqrt(std::cosh(g.beta(k)));
    for (int n = 0; n < n_sites; ++n) r(k, n) = scale * root_sech * std::sin((n + 1) * theta);
  }
  return r;
}

}  // namespace detail

inline double r_gram_defect(const Eigen::MatrixXcd& r) {
  return max_abs(r.adjoint() * r - Eigen::MatrixXcd::Identity(r.cols(), r.cols()));
}

/// sqrt(h) sech(beta_k) psi_sin(n, tanh beta_k); beta grid x n_sites.
inline OperatorMatrix r_matrix(const BetaGrid& g, int n_sites) {
  if (4 * n_sites > g.m) throw NumericalFailure(FailureKind::grid_too_small, "n_site > m_beta/4");
  OperatorMatrix out{detail::r_entries(g, n_sites), Space::beta_grid, Space::site, "R"};
  const double defect = r_gram_defect(out.entries);
  if (defect > 1e-4) {
    throw NumericalFailure(FailureKind::beta_window_too_small,
                           "Gram defect of R is " + std::to_string(defect));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Functions of D = -i d/dbeta and of X
// ---------------------------------------------------------------------------

/// Multiplier values a(xi_q); the odd tanh symbol is zero at the Nyquist bin.
inline Eigen::VectorXd multiplier_values(const BetaGrid& g, Symbol s) {
  Eigen::VectorXd a(g.m);
  for (int q = 0; q < g.m; ++q) a(q) = evaluate(s, g.xi(q));
  if (s == Symbol::tanh_pi) a(g.nyquist()) = 0.0;
  return a;
}

/// a(D) applied to each column through the discrete Fourier transform.
inline Eigen::MatrixXcd apply_multiplier(const BetaGrid& g, Symbol s, const Eigen::MatrixXcd& cols) {
  const Eigen::VectorXd a = multiplier_values(g, s);
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd out(cols.rows(), cols.cols());
  Eigen::VectorXcd spectrum(g.m);
  Eigen::VectorXcd values(g.m);
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    const Eigen::VectorXcd column = cols.col(c);
    fft.fwd(spectrum, column);
    spectrum = spectrum.cwiseProduct(a.cast<cplx>());
    fft.inv(values, spectrum);
    out.col(c) = values;
  }
  return out;
}

/// Dense circulant matrix of a(D).
inline Eigen::MatrixXcd fourier_multiplier(const BetaGrid& g, Symbol s) {
  return apply_multiplier(g, s, Eigen::MatrixXcd::Identity(g.m, g.m));
}

/// Diagonal multiplication by f(beta_k).
template <class F>
Eigen::MatrixXcd multiplication(const BetaGrid& g, F f) {
  Eigen::VectorXcd d(g.m);
  for (int k = 0; k < g.m; ++k) d(k) = f(g.beta(k));
  return d.asDiagonal();
}

/// [-tanh(pi D) + i tanh(X/2) sech(pi D)] applied to columns.
inline Eigen::MatrixXcd apply_pdo_composite(const BetaGrid& g, const Eigen::MatrixXcd& cols) {
  Eigen::MatrixXcd out = -apply_multiplier(g, Symbol::tanh_pi, cols);
  const Eigen::MatrixXcd damped = apply_multiplier(g, Symbol::sech_pi, cols);
  for (int k = 0; k < g.m; ++k) out.row(k) += cplx(0.0, evaluate(Symbol::tanh_half, g.beta(k))) * damped.row(k);
  return out;
}

inline OperatorMatrix pdo_composite(const BetaGrid& g) {
  return {apply_pdo_composite(g, Eigen::MatrixXcd::Identity(g.m, g.m)), Space::beta_grid,
          Space::beta_grid, "-tanh(pi D) + i tanh(X/2) sech(pi D)"};
}

/// [tanh(X) - i sech(X) tanh(pi D)] applied to columns.
inline Eigen::MatrixXcd apply_shift_symbol(const BetaGrid& g, const Eigen::MatrixXcd& cols) {
  const Eigen::MatrixXcd rotated = apply_multiplier(g, Symbol::tanh_pi, cols);
  Eigen::MatrixXcd out(cols.rows(), cols.cols());
  for (int k = 0; k < g.m; ++k) {
    const double beta = g.beta(k);
    out.row(k) = std::tanh(beta) * cols.row(k) - cplx(0.0, 1.0 / std::cosh(beta)) * rotated.row(k);
  }
  return out;
}

/// e^{isD} for s = nodes * h: (e^{isD} f)(beta) = f(beta + s), periodically.
inline Eigen::MatrixXcd translation(const BetaGrid& g, int nodes) {
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(g.m, g.m);
  for (int k = 0; k < g.m; ++k) t(k, ((k + nodes) % g.m + g.m) % g.m) = 1.0;
  return t;
}

/// e^{itX}: diagonal phase e^{i t beta_k}.
inline Eigen::MatrixXcd modulation(const BetaGrid& g, double t) {
  return multiplication(g, [t](double beta) { return std::polar(1.0, t * beta); });
}

/// max |e^{itX} e^{isD} - e^{-ist} e^{isD} e^{itX}| for s = nodes h, t = xi_q.
inline double weyl_defect(const BetaGrid& g, int nodes, int frequency_index) {
  const double s = nodes * g.h;
  const double t = g.xi(frequency_index);
  const Eigen::MatrixXcd shift = translation(g, nodes);
  const Eigen::MatrixXcd phase = modulation(g, t);
  return max_abs(phase * shift - std::polar(1.0, -s * t) * shift * phase);
}

/// Singular values of [b(X), -tanh(pi D) + i tanh(X/2) sech(pi D)].
inline Eigen::VectorXd commutator_singular_values(const BetaGrid& g) {
  const Eigen::MatrixXcd b = multiplication(g, b_function);
  const Eigen::MatrixXcd p = pdo_composite(g).entries;
  return singular_values(b * p - p * b);
}

// ---------------------------------------------------------------------------
// Compactness of the remainders
// ---------------------------------------------------------------------------

namespace detail {

inline CompactnessReport compactness(const Eigen::MatrixXcd& remainder, int rank_limit) {
  CompactnessReport out;
  const Eigen::VectorXd sv = singular_values(remainder);
  out.singular_values = to_std(sv);
  out.s1 = sv.size() ? sv(0) : 0.0;
  out.rank_tenth = finite_rank(sv, 0.1);
  out.rank_limit = rank_limit;
  out.dimension = int(remainder.cols());
  return out;
}

inline void refine(CompactnessReport& base, const CompactnessReport& refined) {
  base.s1_refined = refined.s1;
  base.relative_change = base.s1 > 0.0 ? std::abs(refined.s1 - base.s1) / base.s1 : 0.0;
  if (!base.negligible() && base.relative_change > 0.5 && refined.s1 > base.s1) {
    throw NumericalFailure(FailureKind::not_convergent,
                           "leading singular value grows from " + std::to_string(base.s1) + " to " +
                               std::to_string(refined.s1) + " under refinement");
  }
}

/// U - R^* P R on the resolvable sites of the beta grid.
inline CompactnessReport u_symbol_block(const BetaGrid& beta, int m_theta) {
  const int sites = resolvable_sites(beta);
  const auto r = r_matrix(beta, sites).entries;
  const auto q = QuadratureGrid::midpoint(std::max(m_theta, 2 * sites));
  const Eigen::MatrixXcd remainder = u_operator_block(q, sites, sites) - r.adjoint() * apply_pdo_composite(beta, r);
  return compactness(remainder, beta.m / 16);
}

inline CompactnessReport wave_remainder_block(const Potential& p, const ScatteringData& d, int m_theta,
                                         int sites, const BetaGrid& beta) {
  const auto q = QuadratureGrid::midpoint(m_theta);
  const auto r = r_matrix(beta, sites).entries;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(sites, sites);
  const Eigen::MatrixXcd w = wave_operator_block(d, p, q, sites, sites);
  const Eigen::MatrixXcd s = scattering_operator_block(d, q, sites, sites);
  const Eigen::MatrixXcd middle = id + r.adjoint() * apply_pdo_composite(beta, r);
  return compactness(w - id - 0.5 * middle * (s - id), 0);
}

}  // namespace detail

/// Remainder of U against -tanh(pi A) + i tanh(B/2) sech(pi A), compressed to
/// the range of R; refinement doubles m_beta.
inline CompactnessReport u_symbol_remainder(const GridSpec& g) {
  auto base = detail::u_symbol_block(BetaGrid::from(g), g.m_theta);
  const auto refined = detail::u_symbol_block(BetaGrid::make(g.beta_max, 2 * g.m_beta), g.m_theta);
  detail::refine(base, refined);
  return base;
}

/// K = W_- - 1 - (1/2)(1 + R^* P R)(S - 1) on min(n_site/2, resolvable) sites;
/// refinement doubles m_theta.  A remainder at rounding level (free case)
/// passes without a rank test.
inline CompactnessReport wave_operator_remainder(const Potential& p, const ScatteringData& d,
                                            const GridSpec& g) {
  const auto beta = BetaGrid::from(g);
  const int sites = std::min(g.interior(), resolvable_sites(beta));
  auto base = detail::wave_remainder_block(p, d, g.m_theta, sites, beta);
  GridSpec finer = g;
  finer.m_theta = 2 * g.m_theta;
  const auto d_fine = scattering_grid(p, finer);
  const auto refined = detail::wave_remainder_block(p, d_fine, finer.m_theta, sites, beta);
  base.rank_limit = g.n_site / 8;
  detail::refine(base, refined);
  return base;
}

struct ShiftIdentityReport {
  double exact_residual = 0.0;   // |T - H0 - i(1 - H0^2)^(1/2) U^*| on the interior block
  double h0_residual = 0.0;      // |R^* tanh(X) R - H0| on the resolvable interior block
  CompactnessReport remainder;   // T - R^*[tanh(X) - i sech(X) tanh(pi D)]R
};

namespace detail {

inline Eigen::MatrixXcd shift_truncation(int n) {
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) t(k + 1, k) = 1.0;
  return t;
}

inline Eigen::MatrixXcd free_truncation(int n) {
  const Eigen::MatrixXcd t = shift_truncation(n);
  return 0.5 * (t + t.adjoint());
}

inline CompactnessReport shift_remainder(const BetaGrid& beta) {
  const int sites = resolvable_sites(beta);
  const auto r = r_matrix(beta, sites).entries;
  return compactness(shift_truncation(sites) - r.adjoint() * apply_shift_symbol(beta, r), beta.m / 16);
}

}  // namespace detail

inline ShiftIdentityReport shift_identity_check(const GridSpec& g) {
  ShiftIdentityReport out;
  const auto q = QuadratureGrid::midpoint(g.m_theta);
  const int b = g.interior();
  const int m = q.m;
  // (1 - H0^2)^(1/2) = F_sin^* sin(theta) F_sin, rows b over all m sites
  const Eigen::MatrixXd basis = detail::sine_basis(q, m);
  const Eigen::MatrixXcd root =
      (basis.topRows(m).leftCols(b).transpose() * q.sine.asDiagonal() * basis).cast<cplx>();
  const Eigen::MatrixXcd u = u_operator_block(q, b, m);  // U^* restricted to columns < b is u^H
  const Eigen::MatrixXcd rhs =
      detail::free_truncation(b + 1).topLeftCorner(b, b) + cplx(0.0, 1.0) * root * u.adjoint();
  out.exact_residual = max_abs(detail::shift_truncation(b + 1).topLeftCorner(b, b) - rhs);

  const auto beta = BetaGrid::from(g);
  const int sites = resolvable_sites(beta);
  const auto r = r_matrix(beta, sites).entries;
  const Eigen::MatrixXcd tanh_x = multiplication(beta, [](double x) { return std::tanh(x); });
  const int half = sites / 2;
  out.h0_residual =
      max_abs((r.adjoint() * tanh_x * r - detail::free_truncation(sites)).topLeftCorner(half, half));

  out.remainder = detail::shift_remainder(beta);
  detail::refine(out.remainder, detail::shift_remainder(BetaGrid::make(g.beta_max, 2 * g.m_beta)));
  return out;
}

}  // namespace levinson
