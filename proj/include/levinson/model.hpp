#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "levinson/error.hpp"

namespace levinson {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Smallest admissible decay exponent (exclusive).
inline constexpr double kMinimumRho = 2.5;

// ---------------------------------------------------------------------------
// Potential
// ---------------------------------------------------------------------------

/// A real, finitely supported potential V on the half-line together with the
/// decay exponent rho it is claimed to satisfy.  Closed-form families are
/// expanded to a table at construction; V(n) = 0 beyond the table.
class Potential {
 public:
  static Potential from_table(std::vector<double> values, double rho) {
    return Potential(std::move(values), rho);
  }

  static Potential zero(double rho = 3.0) { return Potential({}, rho); }

  /// V(site) = v0, zero elsewhere.
  static Potential rank_one(double v0, std::size_t site, double rho = 3.0) {
    std::vector<double> values(site + 1, 0.0);
    values[site] = v0;
    return Potential(std::move(values), rho);
  }

  /// V(n) = amplitude * u_n * (1+n)^(-rho_gen) with u_n uniform on [-1, 1),
  /// drawn from mt19937_64(seed).  The table stops at `length` sites or where
  /// the envelope falls below 1e-16, whichever comes first.
  static Potential random_decaying(double amplitude, double rho_gen, std::uint64_t seed,
                                   std::size_t length, double rho) {
    if (!(rho_gen > 0.0) || !std::isfinite(amplitude)) {
      throw InvalidInput("random potential needs rho_gen > 0 and a finite amplitude");
    }
    std::mt19937_64 engine(seed);
    std::vector<double> values;
    values.reserve(length);
    for (std::size_t n = 0; n < length; ++n) {
      const double envelope = std::abs(amplitude) * std::pow(1.0 + double(n), -rho_gen);
      if (envelope < 1e-16) break;
      // 53 random mantissa bits; independent of the standard library's
      // distribution implementation so tables are reproducible everywhere.
      const double unit = double(engine() >> 11) * 0x1.0p-53;
      values.push_back(amplitude * (2.0 * unit - 1.0) * std::pow(1.0 + double(n), -rho_gen));
    }
    return Potential(std::move(values), rho);
  }

  /// V(n); zero outside the table (including n < 0).
  double operator()(long n) const {
    if (n < 0 || std::size_t(n) >= values_.size()) return 0.0;
    return values_[std::size_t(n)];
  }

  std::span<const double> values() const { return values_; }

  /// Number of sites L with V(n) = 0 for every n >= L.
  std::size_t support() const { return values_.size(); }

  double rho() const { return rho_; }

  /// sup_n (1+n)^rho |V(n)|, exact over the table.
  double envelope_const() const { return envelope_; }

  double sup_norm() const {
    double out = 0.0;
    for (double v : values_) out = std::max(out, std::abs(v));
    return out;
  }

 private:
  Potential(std::vector<double> values, double rho) : values_(std::move(values)), rho_(rho) {
    if (!(rho > kMinimumRho) || !std::isfinite(rho)) {
      throw AssumptionViolated("assumption violated: rho = " + std::to_string(rho) +
                               " must exceed 5/2");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw InvalidInput("potential table has a non-finite entry");
    }
    while (!values_.empty() && values_.back() == 0.0) values_.pop_back();
    for (std::size_t n = 0; n < values_.size(); ++n) {
      envelope_ = std::max(envelope_, std::pow(1.0 + double(n), rho_) * std::abs(values_[n]));
    }
  }

  std::vector<double> values_;
  double rho_;
  double envelope_ = 0.0;
};

// ---------------------------------------------------------------------------
// Spectral parameter geometry
// ---------------------------------------------------------------------------

/// A point lambda = cos(theta) of [-1, 1] approached from the upper half plane;
/// zeta = lambda - i sqrt(1 - lambda^2) = exp(-i theta).
class SpectralPoint {
 public:
  static SpectralPoint from_theta(double theta) {
    if (!(theta >= 0.0 && theta <= pi)) throw InvalidInput("theta must lie in [0, pi]");
    return SpectralPoint(std::cos(theta), theta, std::sin(theta));
  }

  static SpectralPoint from_lambda(double lambda) {
    if (!(lambda >= -1.0 && lambda <= 1.0)) throw InvalidInput("lambda must lie in [-1, 1]");
    return SpectralPoint(lambda, std::acos(lambda), std::sqrt((1.0 - lambda) * (1.0 + lambda)));
  }

  double lambda() const { return lambda_; }
  double theta() const { return theta_; }
  /// sqrt(1 - lambda^2) = sin(theta).
  double sine() const { return sine_; }
  cplx zeta() const { return {lambda_, -sine_}; }

  /// True for the thresholds lambda = +-1.
  bool at_threshold() const { return sine_ == 0.0 || theta_ == 0.0 || theta_ == pi; }

 private:
  SpectralPoint(double lambda, double theta, double sine)
      : lambda_(lambda), theta_(theta), sine_(sine) {}
  double lambda_;
  double theta_;
  double sine_;
};

/// A real spectral parameter z with |z| > 1, off the continuous spectrum.
class OffAxisPoint {
 public:
  explicit OffAxisPoint(double z) : z_(z) {
    if (!(std::abs(z) > 1.0) || !std::isfinite(z)) {
      throw InvalidInput("off-axis point needs |z| > 1");
    }
  }

  double z() const { return z_; }

  /// zeta = z - sqrt(z^2 - 1) with sqrt(z^2-1) > 0 for z > 1 and < 0 for
  /// z < -1, evaluated as 1/(z + sqrt(z^2-1)) to avoid cancellation.
  double zeta() const {
    const double root = std::copysign(std::sqrt((z_ - 1.0) * (z_ + 1.0)), z_);
    return 1.0 / (z_ + root);
  }

 private:
  double z_;
};

inline cplx zeta_of(const SpectralPoint& point) { return point.zeta(); }
inline cplx zeta_of(const OffAxisPoint& point) { return {point.zeta(), 0.0}; }

/// Inverse of zeta: z = (zeta + 1/zeta) / 2.
inline double z_from_zeta(double zeta) { return 0.5 * (zeta + 1.0 / zeta); }

// ---------------------------------------------------------------------------
// Grids and tolerances
// ---------------------------------------------------------------------------

struct GridSpec {
  int m_theta = 512;        // theta-midpoint quadrature nodes
  int n_site = 128;         // site truncation of reported operator blocks
  int n_tail = 256;         // potential support must lie in [0, n_tail)
  double beta_max = 12.0;   // beta window half-width
  int m_beta = 1024;        // beta nodes
  std::optional<double> z_max;  // bound-state search bound; default 1 + 2(1 + |V|_inf)
  int scan_points = 512;    // bound-state sign-scan nodes per side
  int n_edge = 1024;        // samples per infinite edge of the boundary square
  double alpha_max = 12.0;  // clamp of the infinite edges
  double tol_threshold = 1e-4;
  double tol_root = 1e-12;
  double tol_winding = 0.05;

  void validate() const {
    if (m_theta < 4 || n_site < 1 || m_beta < 8 || scan_points < 4 || n_edge < 2) {
      throw InvalidInput("grid sizes are too small");
    }
    if (n_tail < n_site) throw InvalidInput("n_tail must be >= n_site");
    if (m_theta < 2 * n_site) throw InvalidInput("m_theta must be >= 2 n_site");
    if (m_beta % 2 != 0) throw InvalidInput("m_beta must be even");
    if (!(beta_max > 0.0) || !(alpha_max > 0.0)) throw InvalidInput("window half-widths must be > 0");
    if (z_max && !(*z_max > 1.0)) throw InvalidInput("z_max must exceed 1");
    if (!(tol_threshold > 0.0) || !(tol_root > 0.0) || !(tol_winding > 0.0)) {
      throw InvalidInput("tolerances must be > 0");
    }
  }

  double z_max_for(const Potential& p) const {
    return z_max.value_or(1.0 + 2.0 * (1.0 + p.sup_norm()));
  }

  /// Reported operators are checked on sites n < interior().
  int interior() const { return n_site / 2; }
};

// ---------------------------------------------------------------------------
// Finite truncation of H = H0 + V(X)
// ---------------------------------------------------------------------------

/// The size x size principal block of H: diagonal V(0..size-1), off-diagonal
/// 1/2, Dirichlet cut after the last site.
struct TridiagonalTruncation {
  Eigen::VectorXd diagonal;
  double off_diagonal = 0.5;

  int size() const { return int(diagonal.size()); }

  Eigen::MatrixXd dense() const {
    const int n = size();
    Eigen::MatrixXd h = diagonal.asDiagonal();
    for (int i = 0; i + 1 < n; ++i) h(i, i + 1) = h(i + 1, i) = off_diagonal;
    return h;
  }

  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const {
    if (size() == 1) return diagonal;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diagonal, sub_diagonal(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

  /// Unit eigenvector for an eigenvalue (assumed simple) by inverse iteration.
  Eigen::VectorXd eigenvector(double eigenvalue) const {
    const int n = size();
    const double shift = eigenvalue + 1e-13 * (1.0 + std::abs(eigenvalue));
    std::vector<Eigen::Triplet<double>> entries;
    for (int i = 0; i < n; ++i) {
      entries.emplace_back(i, i, diagonal(i) - shift);
      if (i + 1 < n) {
        entries.emplace_back(i, i + 1, off_diagonal);
        entries.emplace_back(i + 1, i, off_diagonal);
      }
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(entries.begin(), entries.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw InvalidInput("inverse iteration failed to factorize");
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
    for (int iter = 0; iter < 4; ++iter) {
      v = lu.solve(v);
      v.normalize();
    }
    if (v(0) < 0.0) v = -v;
    return v;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigensystem() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diagonal, sub_diagonal(), Eigen::ComputeEigenvectors);
    return solver;
  }

 private:
  Eigen::VectorXd sub_diagonal() const {
    return Eigen::VectorXd::Constant(std::max(size() - 1, 0), off_diagonal);
  }
};

inline TridiagonalTruncation hamiltonian_truncation(const Potential& p, int size) {
  if (size < 1) throw InvalidInput("truncation size must be >= 1");
  TridiagonalTruncation out;
  out.diagonal.resize(size);
  for (int n = 0; n < size; ++n) out.diagonal(n) = p(n);
  return out;
}

}  // namespace levinson
