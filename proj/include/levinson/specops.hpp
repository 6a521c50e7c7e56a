#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "levinson/error.hpp"
#include "levinson/linalg.hpp"
#include "levinson/model.hpp"
#include "levinson/scattering.hpp"
#include "levinson/solutions.hpp"

namespace levinson {

// ---------------------------------------------------------------------------
// Quadrature on (-1, 1) and operator matrices
// ---------------------------------------------------------------------------

/// theta-midpoint rule: theta = (j + 1/2) pi / m, lambda = cos(theta),
/// w = (pi/m) sin(theta); nodes stored in increasing lambda.
struct QuadratureGrid {
  int m = 0;
  Eigen::VectorXd theta;
  Eigen::VectorXd lambda;
  Eigen::VectorXd sine;
  Eigen::VectorXd weights;

  static QuadratureGrid midpoint(int m) {
    if (m < 2) throw InvalidInput("quadrature needs at least two nodes");
    QuadratureGrid q;
    q.m = m;
    q.theta.resize(m);
    q.lambda.resize(m);
    q.sine.resize(m);
    q.weights.resize(m);
    for (int i = 0; i < m; ++i) {
      const double t = midpoint_theta(m, i);
      q.theta(i) = t;
      q.lambda(i) = std::cos(t);
      q.sine(i) = std::sin(t);
      q.weights(i) = pi / double(m) * q.sine(i);
    }
    return q;
  }

  /// The multiplication operator by lambda.
  Eigen::MatrixXcd multiplication() const { return lambda.cast<cplx>().asDiagonal(); }
};

enum class Space { site, lambda_grid, beta_grid };

inline const char* to_string(Space s) {
  switch (s) {
    case Space::site: return "site";
    case Space::lambda_grid: return "lambda";
    case Space::beta_grid: return "beta";
  }
  return "?";
}

/// Dense truncation of an operator between two discretized spaces.  Vectors
/// on the lambda grid carry the sqrt(weight) factor, so the grid space is a
/// plain Euclidean space.
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  Space row_space = Space::site;
  Space col_space = Space::site;
  std::string tag;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

namespace detail {

inline void require_matching(const ScatteringData& d, const QuadratureGrid& q) {
  if (d.size() != q.m) throw InvalidInput("scattering data and quadrature grid differ in size");
}

/// sqrt(w_j) psi_sin(n, lambda_j) = sqrt(2/m) sin((n+1) theta_j), n < cols.
/// With cols = m this is an orthogonal matrix once the last mode, which is
/// +-1 on every node, is scaled by 1/sqrt(2).
inline Eigen::MatrixXd sine_basis(const QuadratureGrid& q, int cols) {
  Eigen::MatrixXd f(q.m, cols);
  const double scale = std::sqrt(2.0 / q.m);
  for (int n = 0; n < cols; ++n) {
    const double c = n + 1 == q.m ? scale / std::sqrt(2.0) : scale;
    for (int j = 0; j < q.m; ++j) f(j, n) = c * std::sin(double(n + 1) * q.theta(j));
  }
  return f;
}

inline Eigen::MatrixXd cosine_basis(const QuadratureGrid& q, int cols) {
  Eigen::MatrixXd f(q.m, cols);
  const double scale = std::sqrt(2.0 / q.m);
  for (int n = 0; n < cols; ++n)
    for (int j = 0; j < q.m; ++j) f(j, n) = scale * std::cos(double(n + 1) * q.theta(j));
  return f;
}

/// sqrt(w_j) psi_{+-}(n, lambda_j) = sqrt(2/m) sin(theta_j) phi(n, lambda_j) / D_j with
/// D = Omega for psi_+ and conj(Omega) for psi_-.
inline Eigen::MatrixXcd wave_function_basis(const ScatteringData& d, const Potential& p,
                                            const QuadratureGrid& q, int cols, int sign) {
  require_matching(d, q);
  Eigen::MatrixXcd f(q.m, cols);
  const double scale = std::sqrt(2.0 / q.m);
  for (int j = 0; j < q.m; ++j) {
    if (d.amplitude[std::size_t(j)] < d.tol_threshold) {
      throw NumericalFailure(FailureKind::resonant_grid,
                             "|Omega| = " + std::to_string(d.amplitude[std::size_t(j)]) +
                                 " at lambda = " + std::to_string(q.lambda(j)));
    }
    const cplx omega = d.omega[std::size_t(j)];
    const cplx denominator = sign > 0 ? omega : std::conj(omega);
    const auto phi = regular_values(p, q.lambda(j), cols - 1);
    for (int n = 0; n < cols; ++n) f(j, n) = scale * q.sine(j) * phi[std::size_t(n + 1)] / denominator;
  }
  return f;
}

inline Eigen::MatrixXcd identity_block(int rows, int cols) {
  return Eigen::MatrixXcd::Identity(rows, cols);
}

}  // namespace detail

inline OperatorMatrix fsin_matrix(const QuadratureGrid& q, int n_sites) {
  if (2 * n_sites > q.m) throw NumericalFailure(FailureKind::grid_too_small, "n_site > m_theta/2");
  return {detail::sine_basis(q, n_sites).cast<cplx>(), Space::lambda_grid, Space::site, "F_sin"};
}

inline OperatorMatrix fcos_matrix(const QuadratureGrid& q, int n_sites) {
  if (2 * n_sites > q.m) throw NumericalFailure(FailureKind::grid_too_small, "n_site > m_theta/2");
  return {detail::cosine_basis(q, n_sites).cast<cplx>(), Space::lambda_grid, Space::site, "F_cos"};
}

/// Generalized Fourier transforms (F_+, F_-), lambda grid x n_site sites.
inline std::pair<OperatorMatrix, OperatorMatrix> fpm_matrices(const ScatteringData& d,
                                                              const Potential& p,
                                                              const GridSpec& g) {
  const auto q = QuadratureGrid::midpoint(g.m_theta);
  if (2 * g.n_site > q.m) throw NumericalFailure(FailureKind::grid_too_small, "n_site > m_theta/2");
  return {{detail::wave_function_basis(d, p, q, g.n_site, +1), Space::lambda_grid, Space::site, "F_+"},
          {detail::wave_function_basis(d, p, q, g.n_site, -1), Space::lambda_grid, Space::site, "F_-"}};
}

// ---------------------------------------------------------------------------
// Site-space operators.  `rows` and `cols` may run up to m_theta: products of
// these blocks are formed over the full sine basis of the grid.
// ---------------------------------------------------------------------------

/// W_{+-} = F_{+-}^* F_sin restricted to rows x cols.
inline Eigen::MatrixXcd wave_operator_block(const ScatteringData& d, const Potential& p,
                                            const QuadratureGrid& q, int rows, int cols,
                                            int sign = -1) {
  const auto f = detail::wave_function_basis(d, p, q, rows, sign);
  return f.adjoint() * detail::sine_basis(q, cols).cast<cplx>();
}

/// S = F_sin^* s F_sin.
inline Eigen::MatrixXcd scattering_operator_block(const ScatteringData& d, const QuadratureGrid& q,
                                                  int rows, int cols) {
  detail::require_matching(d, q);
  const Eigen::VectorXcd s = Eigen::Map<const Eigen::VectorXcd>(d.smatrix.data(), q.m);
  return detail::sine_basis(q, rows).cast<cplx>().transpose() * s.asDiagonal() *
         detail::sine_basis(q, cols).cast<cplx>();
}

/// U = i F_cos^* F_sin; independent of the potential.
inline Eigen::MatrixXcd u_operator_block(const QuadratureGrid& q, int rows, int cols) {
  const Eigen::MatrixXd real = detail::cosine_basis(q, rows).transpose() * detail::sine_basis(q, cols);
  return cplx(0.0, 1.0) * real.cast<cplx>();
}

inline OperatorMatrix wave_operator_stationary(const ScatteringData& d, const Potential& p,
                                               const GridSpec& g) {
  const auto q = QuadratureGrid::midpoint(g.m_theta);
  return {wave_operator_block(d, p, q, g.n_site, g.n_site), Space::site, Space::site, "W_-"};
}

inline OperatorMatrix scattering_operator(const ScatteringData& d, const GridSpec& g) {
  const auto q = QuadratureGrid::midpoint(g.m_theta);
  return {scattering_operator_block(d, q, g.n_site, g.n_site), Space::site, Space::site, "S"};
}

inline OperatorMatrix u_operator(const GridSpec& g) {
  const auto q = QuadratureGrid::midpoint(g.m_theta);
  return {u_operator_block(q, g.n_site, g.n_site), Space::site, Space::site, "U"};
}

// ---------------------------------------------------------------------------
// Principal-value form of U
// ---------------------------------------------------------------------------

/// 2 PV L0 on the lambda grid in the value representation:
/// entry (j,k) = 2 L0(lambda_j, lambda_k) w_k for k != j, zero diagonal, with
/// L0(l, v) = (i/2pi) (1-l^2)^(1/4) (v-l)^(-1) (1-v^2)^(-1/4).
inline OperatorMatrix u_singular_integral(const QuadratureGrid& q) {
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(q.m, q.m);
  for (int j = 0; j < q.m; ++j) {
    for (int c = 0; c < q.m; ++c) {
      if (c == j) continue;
      // nu - lambda = cos(theta_c) - cos(theta_j), written as a product of sines
      const double gap = -2.0 * std::sin(0.5 * (q.theta(c) + q.theta(j))) *
                         std::sin(0.5 * (q.theta(c) - q.theta(j)));
      const double real = std::sqrt(q.sine(j)) / (gap * std::sqrt(q.sine(c))) / pi * q.weights(c);
      k(j, c) = cplx(0.0, real);
    }
  }
  return {k, Space::lambda_grid, Space::lambda_grid, "2PV L0"};
}

/// || F_sin U F_sin^* - 2 PV L0 || compressed onto the first `modes` sine modes
/// (operator norm).  Both sides act on the sqrt(weight) representation.
inline double pv_discrepancy(const QuadratureGrid& q, int modes) {
  const auto pv = u_singular_integral(q).entries;
  const Eigen::VectorXd root = q.weights.cwiseSqrt();
  const Eigen::MatrixXcd symmetric =
      root.cast<cplx>().asDiagonal() * pv * root.cwiseInverse().cast<cplx>().asDiagonal();
  const Eigen::MatrixXcd basis = detail::sine_basis(q, modes).cast<cplx>();
  const Eigen::MatrixXcd compressed = basis.adjoint() * symmetric * basis;
  return operator_norm(u_operator_block(q, modes, modes) - compressed);
}

// ---------------------------------------------------------------------------
// Remainder K0
// ---------------------------------------------------------------------------

/// sqrt(w_j) K0(n, lambda_j) for n < rows, with
/// K0 = sqrt(2/pi) (conj(p zeta) - s p zeta)/(2i),  p = (theta - theta_0)/(1-lambda^2)^(1/4).
inline Eigen::MatrixXcd k0_kernel(const Potential& p, const ScatteringData& d,
                                  const QuadratureGrid& q, int rows) {
  detail::require_matching(d, q);
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(rows, q.m);
  const long last = std::min<long>(rows - 1, long(p.support()) - 2);
  if (last < 0) return k;
  const double scale = std::sqrt(2.0 / q.m);
  for (int j = 0; j < q.m; ++j) {
    const auto point = d.grid[std::size_t(j)];
    const auto jost = detail::jost_values<cplx>(p, point.lambda(), detail::rim_power(point.theta()), last);
    const cplx zeta = point.zeta();
    const cplx s = d.smatrix[std::size_t(j)];
    for (long n = 0; n <= last; ++n) {
      const cplx deviation = (jost[std::size_t(n + 1)] - std::polar(1.0, -double(n) * point.theta())) * zeta;
      k(n, j) = scale * (std::conj(deviation) - s * deviation) / cplx(0.0, 2.0);
    }
  }
  return k;
}

inline Eigen::MatrixXcd k0_term_block(const Potential& p, const ScatteringData& d,
                                      const QuadratureGrid& q, int rows, int cols) {
  return k0_kernel(p, d, q, rows) * detail::sine_basis(q, cols).cast<cplx>();
}

struct K0Report {
  OperatorMatrix k0f;                   // K0 F_sin, n_site x n_site
  std::vector<double> singular_values;
  double hilbert_schmidt = 0.0;
  double estimate_constant = 0.0;       // smallest C' with |K0| <= C'(1-l^2)^(-1/4)(1+n)^(2-rho)
};

inline K0Report k0_term(const Potential& p, const ScatteringData& d, const GridSpec& g) {
  const auto q = QuadratureGrid::midpoint(g.m_theta);
  const auto kernel = k0_kernel(p, d, q, g.n_site);
  K0Report out;
  out.k0f = {kernel * detail::sine_basis(q, g.n_site).cast<cplx>(), Space::site, Space::site, "K0 F_sin"};
  out.singular_values = to_std(singular_values(out.k0f.entries));
  out.hilbert_schmidt = out.k0f.entries.norm();
  // |K0(n,l)| (1-l^2)^(1/4) = |sqrt(w) K0| sqrt(m/pi)
  const double unweight = std::sqrt(q.m / pi);
  for (int n = 0; n < kernel.rows(); ++n)
    for (int j = 0; j < q.m; ++j)
      out.estimate_constant = std::max(
          out.estimate_constant, std::abs(kernel(n, j)) * unweight * std::pow(1.0 + n, p.rho() - 2.0));
  return out;
}

// ---------------------------------------------------------------------------
// Identity W_- = 1 + (U+1)/2 (S-1) + K0 F_sin and consistency checks
// ---------------------------------------------------------------------------

/// Max-norm of W_- - [1 + (U+1)/2 (S-1) + K0 F_sin] on sites n, k < n_site/2.
inline double wave_identity_residual(const Potential& p, const ScatteringData& d, const GridSpec& g) {
  const auto q = QuadratureGrid::midpoint(g.m_theta);
  const int b = g.interior();
  const int m = q.m;
  const Eigen::MatrixXcd w = wave_operator_block(d, p, q, b, b);
  const Eigen::MatrixXcd u = u_operator_block(q, b, m) + detail::identity_block(b, m);
  const Eigen::MatrixXcd s = scattering_operator_block(d, q, m, b) - detail::identity_block(m, b);
  const Eigen::MatrixXcd rhs = detail::identity_block(b, b) + 0.5 * u * s + k0_term_block(p, d, q, b, b);
  return max_abs(w - rhs);
}

/// P_b restricted to the first `rows` sites: projector onto the eigenvectors
/// of a large truncation whose eigenvalues lie outside [-1, 1].
inline Eigen::MatrixXcd bound_state_projector(const Potential& p, int rows, int size = 2000) {
  size = std::max(size, 4 * int(p.support()) + 64);
  const auto h = hamiltonian_truncation(p, size);
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(rows, rows);
  for (double e : h.eigenvalues()) {
    if (std::abs(e) > 1.0 + 1e-11) {
      const Eigen::VectorXd v = h.eigenvector(e).head(rows);
      proj += v * v.transpose();
    }
  }
  return proj.cast<cplx>();
}

struct WaveOperatorChecks {
  double isometry = 0.0;       // |W*W - 1| on the interior block
  double completeness = 0.0;   // |WW* - (1 - P_b)|
  double coisometry = 0.0;     // |F_- F_-^* - 1| compressed to the interior sine modes
  double intertwining = 0.0;   // |W H0 - H W|
  double s_unitarity = 0.0;    // |S*S - 1|
  double s_commutator = 0.0;   // |[S, H0]|
  double s_consistency = 0.0;  // |S - W_+^* W_-|
  double u_coisometry = 0.0;   // |UU* - 1|
};

inline WaveOperatorChecks wave_operator_checks(const Potential& p, const ScatteringData& d,
                                               const GridSpec& g) {
  const auto q = QuadratureGrid::midpoint(g.m_theta);
  const int b = g.interior();
  const int m = q.m;
  WaveOperatorChecks out;
  const Eigen::MatrixXcd id = detail::identity_block(b, b);

  // Columns n < b of W_- and W_+ over every site of the grid basis.
  const Eigen::MatrixXcd w_minus = wave_operator_block(d, p, q, m, b, -1);
  const Eigen::MatrixXcd w_plus = wave_operator_block(d, p, q, m, b, +1);
  out.isometry = max_abs(w_minus.adjoint() * w_minus - id);
  // Q^*(F F^* - 1)Q with Q the first b sine modes equals W^*W - 1 on those modes.
  out.coisometry = out.isometry;

  const Eigen::MatrixXcd w_rows = wave_operator_block(d, p, q, b, m, -1);
  out.completeness = max_abs(w_rows * w_rows.adjoint() - (id - bound_state_projector(p, b)));

  const Eigen::MatrixXcd w = wave_operator_block(d, p, q, b + 1, b + 1, -1);
  double intertwining = 0.0;
  for (int r = 0; r < b; ++r) {
    for (int c = 0; c < b; ++c) {
      const cplx w_h0 = 0.5 * ((c > 0 ? w(r, c - 1) : cplx(0.0)) + w(r, c + 1));
      const cplx h_w = 0.5 * ((r > 0 ? w(r - 1, c) : cplx(0.0)) + w(r + 1, c)) + p(r) * w(r, c);
      intertwining = std::max(intertwining, std::abs(w_h0 - h_w));
    }
  }
  out.intertwining = intertwining;

  const Eigen::MatrixXcd s_cols = scattering_operator_block(d, q, m, b);
  out.s_unitarity = max_abs(s_cols.adjoint() * s_cols - id);
  const Eigen::MatrixXcd s = scattering_operator_block(d, q, b + 1, b + 1);
  double commutator = 0.0;
  for (int r = 0; r < b; ++r) {
    for (int c = 0; c < b; ++c) {
      const cplx s_h0 = 0.5 * ((c > 0 ? s(r, c - 1) : cplx(0.0)) + s(r, c + 1));
      const cplx h0_s = 0.5 * ((r > 0 ? s(r - 1, c) : cplx(0.0)) + s(r + 1, c));
      commutator = std::max(commutator, std::abs(s_h0 - h0_s));
    }
  }
  out.s_commutator = commutator;
  out.s_consistency = max_abs(s.topLeftCorner(b, b) - w_plus.adjoint() * w_minus);

  const Eigen::MatrixXcd u_rows = u_operator_block(q, b, m);
  out.u_coisometry = max_abs(u_rows * u_rows.adjoint() - id);
  return out;
}

}  // namespace levinson
