#pragma once

// Independent reference computations for the tests.  Nothing here calls the
// library's numerical paths; each function uses a closed form or a different
// algorithm.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Upper-rim zeta = e^{-i theta}.
inline cplx rim_zeta(double theta) { return std::polar(1.0, -theta); }

/// Omega for V = v0 delta_0: 1 - 2 v0 zeta.
inline cplx rank_one_omega(double v0, cplx zeta) { return 1.0 - 2.0 * v0 * zeta; }

/// The single eigenvalue of V = v0 delta_0 outside [-1,1], when |v0| > 1/2.
inline std::optional<double> rank_one_eigenvalue(double v0) {
  if (std::abs(v0) <= 0.5) return std::nullopt;
  const double zeta = 1.0 / (2.0 * v0);
  return 0.5 * (zeta + 1.0 / zeta);
}

/// Normalized eigenvector of V = v0 delta_0: sqrt(1 - zeta^2) zeta^n.
inline Eigen::VectorXd rank_one_eigenvector(double v0, int rows) {
  const double zeta = 1.0 / (2.0 * v0);
  Eigen::VectorXd v(rows);
  for (int n = 0; n < rows; ++n) v(n) = std::sqrt(1.0 - zeta * zeta) * std::pow(zeta, n);
  return v;
}

/// Free regular solution off the cut: (zeta^{-n-1} - zeta^{n+1}) / (zeta^{-1} - zeta).
inline double free_regular_off_axis(long n, double z) {
  const double zeta = z - std::copysign(std::sqrt(z * z - 1.0), z);
  return (std::pow(zeta, -double(n + 1)) - std::pow(zeta, double(n + 1))) / (1.0 / zeta - zeta);
}

/// Volterra sum for the Jost solution, evaluated directly from the definition
/// theta(n) = zeta^n - 2 sum_{m>n} sin((m-n) t)/sin(t) V(m) theta(m).
inline std::vector<cplx> jost_volterra(const std::vector<double>& v, double theta, long n_max) {
  const long support = long(v.size());
  const long top = std::max(n_max, support);
  std::vector<cplx> u(std::size_t(top + 2));
  for (long n = -1; n <= top; ++n) u[std::size_t(n + 1)] = std::polar(1.0, -double(n) * theta);
  for (long n = support - 1; n >= -1; --n) {
    cplx sum = 0.0;
    for (long m = n + 1; m < support; ++m)
      sum += std::sin(double(m - n) * theta) / std::sin(theta) * v[std::size_t(m)] * u[std::size_t(m + 1)];
    u[std::size_t(n + 1)] -= 2.0 * sum;
  }
  u.resize(std::size_t(n_max + 2));
  return u;
}

/// Dense symmetric eigensolve (no tridiagonal specialisation): number of
/// eigenvalues with |e| > 1 + margin.
inline int dense_count_outside(const std::vector<double>& v, int size, double margin) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    h(i, i) = i < int(v.size()) ? v[std::size_t(i)] : 0.0;
    if (i + 1 < size) h(i, i + 1) = h(i + 1, i) = 0.5;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  int count = 0;
  for (int i = 0; i < size; ++i) count += std::abs(solver.eigenvalues()(i)) > 1.0 + margin;
  return count;
}

/// int_0^pi cos(a t) sin(b t) dt for integers a, b >= 1.
inline double cos_sin_integral(int a, int b) {
  auto odd_part = [](int k) { return (k % 2 != 0) ? 2.0 / k : 0.0; };  // int_0^pi sin(k t) dt
  double out = 0.5 * odd_part(b + a);
  if (b != a) out += 0.5 * (b > a ? odd_part(b - a) : -odd_part(a - b));
  return out;
}

/// U_{pn} = (2i/pi) int_0^pi cos((p+1) t) sin((n+1) t) dt.
inline Eigen::MatrixXcd u_exact(int rows, int cols) {
  Eigen::MatrixXcd u(rows, cols);
  for (int p = 0; p < rows; ++p)
    for (int n = 0; n < cols; ++n) u(p, n) = cplx(0.0, 2.0 / pi * cos_sin_integral(p + 1, n + 1));
  return u;
}

/// 2 x the principal-value integral (i/2pi) PV int sech(b)^(1/2) h(g) cosh(g)^(1/2) / sinh(g - b) dg
/// on a uniform grid: symmetric skip-diagonal sum plus the trapezoid term
/// step * F'(b) that the skipped node carries, F = cosh^(1/2) h.
inline std::vector<cplx> pv_sinh_kernel(const std::vector<double>& grid, const std::vector<cplx>& h) {
  const std::size_t m = grid.size();
  const double step = grid[1] - grid[0];
  std::vector<cplx> f(m);
  for (std::size_t k = 0; k < m; ++k) f[k] = std::sqrt(std::cosh(grid[k])) * h[k];
  std::vector<cplx> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    cplx sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      sum += f[k] / std::sinh(grid[k] - grid[j]);
    }
    sum *= step;
    const cplx slope = (j > 0 && j + 1 < m) ? (f[j + 1] - f[j - 1]) / (2.0 * step) : cplx(0.0);
    sum += step * slope;
    out[j] = 2.0 * cplx(0.0, 1.0 / (2.0 * pi)) * sum / std::sqrt(std::cosh(grid[j]));
  }
  return out;
}

}  // namespace oracle
