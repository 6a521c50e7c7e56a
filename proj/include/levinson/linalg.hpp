#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace levinson {

/// Singular values in non-increasing order.
inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues();
}

inline double max_abs(const Eigen::MatrixXcd& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double operator_norm(const Eigen::MatrixXcd& a) {
  const auto sv = singular_values(a);
  return sv.size() == 0 ? 0.0 : sv(0);
}

/// r(tau): the smallest r with s_{r+1} <= tau s_1 (singular values sorted
/// non-increasing, 1-based).  Zero for the zero matrix.
inline int finite_rank(const Eigen::VectorXd& sv, double tau = 0.1) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tau * sv(0)) return i;
  }
  return int(sv.size());
}

/// Finite-rank approximability of a remainder plus stability of its leading
/// singular value under grid refinement.
struct CompactnessReport {
  std::vector<double> singular_values;
  double s1 = 0.0;
  int rank_tenth = 0;           // r(0.1)
  int rank_limit = 0;           // admissible r(0.1)
  double s1_refined = 0.0;      // s1 after doubling the relevant grid
  double relative_change = 0.0; // |s1_refined - s1| / s1
  int dimension = 0;            // size of the compressed block

  /// A remainder at rounding level has no meaningful rank profile.
  bool negligible() const { return s1 < 1e-10; }
  bool finite_rank_ok() const { return negligible() || rank_tenth <= rank_limit; }
  bool stable() const { return negligible() || relative_change < 0.05; }
  bool passed() const { return finite_rank_ok() && stable(); }
};

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace levinson
