#pragma once

#include <stdexcept>
#include <string>

namespace levinson {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad configuration, out-of-domain arguments, shape mismatches.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The potential does not satisfy sup (1+n)^rho |V(n)| < inf with rho > 5/2.
class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

enum class FailureKind {
  grid_too_coarse,
  grid_too_small,
  ambiguous_threshold,
  tail_not_free,
  oracle_mismatch,
  z_max_too_small,
  resonant_grid,
  beta_window_too_small,
  corner_mismatch,
  not_integer,
  undersampled,
  not_convergent,
  estimate_violated,
  not_solutions,
};

inline const char* to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::grid_too_coarse: return "grid too coarse";
    case FailureKind::grid_too_small: return "grid too small";
    case FailureKind::ambiguous_threshold: return "ambiguous threshold";
    case FailureKind::tail_not_free: return "tail not free";
    case FailureKind::oracle_mismatch: return "oracle mismatch";
    case FailureKind::z_max_too_small: return "z_max too small";
    case FailureKind::resonant_grid: return "resonant grid";
    case FailureKind::beta_window_too_small: return "beta window too small";
    case FailureKind::corner_mismatch: return "corner mismatch";
    case FailureKind::not_integer: return "not integer";
    case FailureKind::undersampled: return "undersampled";
    case FailureKind::not_convergent: return "not convergent";
    case FailureKind::estimate_violated: return "estimate violated";
    case FailureKind::not_solutions: return "not solutions";
  }
  return "numerical failure";
}

/// A numerical computation could not produce a trustworthy result.
class NumericalFailure : public Error {
 public:
  NumericalFailure(FailureKind kind, const std::string& detail)
      : Error(std::string(to_string(kind)) + (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  FailureKind kind() const noexcept { return kind_; }

 private:
  FailureKind kind_;
};

}  // namespace levinson
