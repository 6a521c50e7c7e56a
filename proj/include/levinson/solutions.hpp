#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "levinson/error.hpp"
#include "levinson/model.hpp"

namespace levinson {

enum class SolutionKind { regular, jost, free_regular, free_jost };

/// A solution u(n), n = -1..n_max, of
///   (u(n-1) + u(n+1))/2 + V(n) u(n) = z u(n),   n >= 0,
/// at a real spectral parameter z (on [-1, 1] from above, or |z| > 1).
struct SolutionSequence {
  SolutionKind kind = SolutionKind::regular;
  double z = 0.0;
  cplx zeta{1.0, 0.0};
  std::vector<cplx> values;  // values[k] = u(k - 1)

  long n_max() const { return long(values.size()) - 2; }
  cplx operator()(long n) const { return values.at(std::size_t(n + 1)); }
};

namespace detail {

/// u(n) for n = -1..n_max from u(-1) = 0, u(0) = 1 by forward recursion.
inline std::vector<double> regular_values(const Potential& p, double z, long n_max) {
  std::vector<double> u(std::size_t(n_max + 2));
  u[0] = 0.0;
  if (n_max >= 0) u[1] = 1.0;
  for (long n = 0; n + 1 <= n_max; ++n) {
    const auto k = std::size_t(n + 1);
    u[k + 1] = 2.0 * (z - p(n)) * u[k] - u[k - 1];
  }
  return u;
}

/// Jost values for n = -1..n_max by downward recursion; exact zeta^n for
/// n >= L - 1 where L is the support length.  `power(n)` returns zeta^n.
template <class Scalar, class Power>
std::vector<Scalar> jost_values(const Potential& p, double z, Power power, long n_max) {
  const long support = long(p.support());
  const long top = std::max(n_max, support) + 1;
  std::vector<Scalar> u(std::size_t(top + 2));
  const long free_from = std::max(support - 1, -1L);
  for (long n = free_from; n <= top; ++n) u[std::size_t(n + 1)] = power(n);
  for (long n = free_from - 1; n >= -1; --n) {
    const auto k = std::size_t(n + 1);
    u[k] = Scalar(2.0 * (z - p(n + 1))) * u[k + 1] - u[k + 2];
  }
  u.resize(std::size_t(n_max + 2));
  return u;
}

/// theta(-1) alone; the only entry the Jost function needs.
template <class Scalar, class Power>
Scalar jost_at_minus_one(const Potential& p, double z, Power power) {
  const long support = long(p.support());
  if (support == 0) return power(-1);
  Scalar upper = power(support);      // theta(n + 1)
  Scalar current = power(support - 1);  // theta(n)
  for (long n = support - 1; n >= 0; --n) {
    const Scalar lower = Scalar(2.0 * (z - p(n))) * current - upper;
    upper = current;
    current = lower;
  }
  return current;
}

inline auto rim_power(double theta) {
  return [theta](long n) { return std::polar(1.0, -double(n) * theta); };
}

inline auto real_power(double zeta) {
  return [zeta](long n) { return std::pow(zeta, double(n)); };
}

inline void require_free_tail(const Potential& p, long n_tail) {
  if (long(p.support()) > n_tail) {
    throw NumericalFailure(FailureKind::tail_not_free,
                           "support " + std::to_string(p.support()) + " exceeds n_tail " +
                               std::to_string(n_tail));
  }
}

inline void require_interior(const SpectralPoint& point) {
  if (point.at_threshold()) {
    throw InvalidInput("lambda = +-1 is a threshold; use the threshold solutions");
  }
}

template <class Kernel>
std::vector<cplx> volterra_sum(const Potential& p, long n_max, Kernel kernel,
                               std::vector<cplx> free_values) {
  // free_values[k] = theta_0(k - 1), k = 0..top+1
  const long support = long(p.support());
  std::vector<cplx> u = std::move(free_values);
  const long top = long(u.size()) - 2;
  for (long n = std::min(top, support - 2); n >= -1; --n) {
    cplx sum = 0.0;
    for (long m = n + 1; m < support; ++m) sum += kernel(m - n) * p(m) * u[std::size_t(m + 1)];
    u[std::size_t(n + 1)] -= 2.0 * sum;
  }
  u.resize(std::size_t(n_max + 2));
  return u;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Regular solution
// ---------------------------------------------------------------------------

inline SolutionSequence regular_solution(const Potential& p, double z, cplx zeta, long n_max) {
  if (n_max < 0) throw InvalidInput("n_max must be >= 0");
  SolutionSequence out{SolutionKind::regular, z, zeta, {}};
  const auto u = detail::regular_values(p, z, n_max);
  out.values.assign(u.begin(), u.end());
  return out;
}

inline SolutionSequence regular_solution(const Potential& p, const SpectralPoint& point,
                                         long n_max) {
  return regular_solution(p, point.lambda(), point.zeta(), n_max);
}

inline SolutionSequence regular_solution(const Potential& p, const OffAxisPoint& point,
                                         long n_max) {
  return regular_solution(p, point.z(), zeta_of(point), n_max);
}

/// Chebyshev polynomial of the second kind: sin((n+1) theta) / sin(theta).
inline double free_regular(long n, const SpectralPoint& point) {
  detail::require_interior(point);
  return std::sin(double(n + 1) * point.theta()) / point.sine();
}

// ---------------------------------------------------------------------------
// Jost solution
// ---------------------------------------------------------------------------

/// Jost solution on the upper rim by downward recursion from the free tail.
inline SolutionSequence jost_solution(const Potential& p, const SpectralPoint& point, long n_max,
                                      long n_tail) {
  if (n_max < 0) throw InvalidInput("n_max must be >= 0");
  detail::require_interior(point);
  detail::require_free_tail(p, n_tail);
  SolutionSequence out{SolutionKind::jost, point.lambda(), point.zeta(), {}};
  out.values = detail::jost_values<cplx>(p, point.lambda(), detail::rim_power(point.theta()), n_max);
  return out;
}

/// Jost solution at a real z with |z| > 1.  Recursion runs downward, the
/// stable direction for the decaying branch.
inline SolutionSequence jost_solution(const Potential& p, const OffAxisPoint& point, long n_max,
                                      long n_tail) {
  if (n_max < 0) throw InvalidInput("n_max must be >= 0");
  detail::require_free_tail(p, n_tail);
  SolutionSequence out{SolutionKind::jost, point.z(), zeta_of(point), {}};
  const auto u = detail::jost_values<double>(p, point.z(), detail::real_power(point.zeta()), n_max);
  out.values.assign(u.begin(), u.end());
  return out;
}

/// theta(n, +-1): the recursion at z = +-1 with tail (+-1)^n.
inline SolutionSequence jost_at_threshold(const Potential& p, int sign, long n_max, long n_tail) {
  if (sign != 1 && sign != -1) throw InvalidInput("threshold sign must be +1 or -1");
  if (n_max < 0) throw InvalidInput("n_max must be >= 0");
  detail::require_free_tail(p, n_tail);
  SolutionSequence out{SolutionKind::jost, double(sign), cplx(sign), {}};
  const auto u = detail::jost_values<double>(
      p, double(sign), [sign](long n) { return (n % 2 == 0 || sign == 1) ? 1.0 : -1.0; }, n_max);
  out.values.assign(u.begin(), u.end());
  return out;
}

inline SolutionSequence free_jost(const SpectralPoint& point, long n_max) {
  detail::require_interior(point);
  SolutionSequence out{SolutionKind::free_jost, point.lambda(), point.zeta(), {}};
  out.values.resize(std::size_t(n_max + 2));
  for (long n = -1; n <= n_max; ++n) out.values[std::size_t(n + 1)] = std::polar(1.0, -double(n) * point.theta());
  return out;
}

inline SolutionSequence free_regular_solution(const SpectralPoint& point, long n_max) {
  detail::require_interior(point);
  SolutionSequence out{SolutionKind::free_regular, point.lambda(), point.zeta(), {}};
  out.values.resize(std::size_t(n_max + 2));
  out.values[0] = 0.0;
  for (long n = 0; n <= n_max; ++n) out.values[std::size_t(n + 1)] = free_regular(n, point);
  return out;
}

/// Jost solution on the rim from the Volterra sum
///   theta(n) = zeta^n - 2 sum_{m>n} sin((m-n) theta)/sin(theta) V(m) theta(m).
/// O(L^2); kept as an oracle for the recursion.
inline SolutionSequence jost_solution_volterra(const Potential& p, const SpectralPoint& point,
                                               long n_max) {
  detail::require_interior(point);
  const long top = std::max(n_max, long(p.support()));
  std::vector<cplx> free_values(std::size_t(top + 2));
  for (long n = -1; n <= top; ++n) free_values[std::size_t(n + 1)] = std::polar(1.0, -double(n) * point.theta());
  const double theta = point.theta();
  const double sine = point.sine();
  auto kernel = [theta, sine](long k) { return std::sin(double(k) * theta) / sine; };
  SolutionSequence out{SolutionKind::jost, point.lambda(), point.zeta(), {}};
  out.values = detail::volterra_sum(p, n_max, kernel, std::move(free_values));
  return out;
}

/// Threshold limit of the Volterra sum: the kernel becomes k (+-1)^(k-1).
inline SolutionSequence jost_threshold_volterra(const Potential& p, int sign, long n_max) {
  if (sign != 1 && sign != -1) throw InvalidInput("threshold sign must be +1 or -1");
  const long top = std::max(n_max, long(p.support()));
  std::vector<cplx> free_values(std::size_t(top + 2));
  for (long n = -1; n <= top; ++n) free_values[std::size_t(n + 1)] = (sign == 1 || n % 2 == 0) ? 1.0 : -1.0;
  auto kernel = [sign](long k) { return double(k) * ((sign == 1 || (k - 1) % 2 == 0) ? 1.0 : -1.0); };
  SolutionSequence out{SolutionKind::jost, double(sign), cplx(sign), {}};
  out.values = detail::volterra_sum(p, n_max, kernel, std::move(free_values));
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// max_n |(u(n-1)+u(n+1))/2 + V(n)u(n) - z u(n)| / ((1+|z|) max|u|) over 0 <= n < n_max.
inline double schrodinger_residual(const SolutionSequence& u, const Potential& p) {
  double scale = 0.0;
  for (const cplx& v : u.values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (long n = 0; n < u.n_max(); ++n) {
    const cplx r = 0.5 * (u(n - 1) + u(n + 1)) + (p(n) - u.z) * u(n);
    worst = std::max(worst, std::abs(r));
  }
  return worst / ((1.0 + std::abs(u.z)) * scale);
}

struct DecayReport {
  double max_deviation = 0.0;  // max_n |theta(n) - zeta^n|
  double stated_slack = 0.0;   // min_n (exp(M(n)) - 1 - |theta(n) - zeta^n|), M(n) = sum_{m>n} (m-n)|V(m)|
  double proven_slack = 0.0;   // min_n (exp(2 M(n)) - 1 - |theta(n) - zeta^n|)
  double empirical_c = 0.0;    // smallest C with |theta - theta_0| <= C (1+n)^(2-rho) on the support
};

/// Compares |theta(n,lambda) - zeta^n| for n in [0, n_max] with two bounds:
/// exp(M(n)) - 1, the bound usually quoted, and exp(2 M(n)) - 1, the one the
/// Volterra iteration gives for a kernel 2 sin(k t)/sin(t), |.| <= 2k.  The
/// first can fail (V = v delta_1 gives theta(0) - 1 = -2 v zeta); only a
/// violation of the second, beyond 1e-10, throws.
inline DecayReport decay_diagnostic(const Potential& p, const SpectralPoint& point, long n_max,
                                    long n_tail) {
  const auto jost = jost_solution(p, point, n_max, n_tail);
  DecayReport report;
  report.stated_slack = std::numeric_limits<double>::infinity();
  report.proven_slack = std::numeric_limits<double>::infinity();
  for (long n = 0; n <= n_max; ++n) {
    double moment = 0.0;
    for (long m = n + 1; m < long(p.support()); ++m) moment += double(m - n) * std::abs(p(m));
    const double deviation = std::abs(jost(n) - std::polar(1.0, -double(n) * point.theta()));
    const double proven = std::expm1(2.0 * moment);
    if (deviation > proven + 1e-10) {
      throw NumericalFailure(FailureKind::estimate_violated,
                             "n = " + std::to_string(n) + ", lambda = " + std::to_string(point.lambda()));
    }
    report.max_deviation = std::max(report.max_deviation, deviation);
    report.stated_slack = std::min(report.stated_slack, std::expm1(moment) - deviation);
    report.proven_slack = std::min(report.proven_slack, proven - deviation);
    if (n < long(p.support())) {
      report.empirical_c = std::max(report.empirical_c, deviation * std::pow(1.0 + double(n), p.rho() - 2.0));
    }
  }
  return report;
}

}  // namespace levinson
