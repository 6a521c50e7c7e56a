#include <cmath>

#include <gtest/gtest.h>

#include "levinson/model.hpp"
#include "oracles.hpp"

using namespace levinson;

TEST(Potential, RankOneEnvelopeIsTheSiteValue) {
  const auto p = Potential::rank_one(0.75, 0, 3.0);
  EXPECT_DOUBLE_EQ(p.envelope_const(), 0.75);
  EXPECT_EQ(p.support(), 1u);
  EXPECT_EQ(p(0), 0.75);
  EXPECT_EQ(p(1), 0.0);
  EXPECT_EQ(p(-1), 0.0);
}

TEST(Potential, ZeroHasZeroEnvelope) {
  const auto p = Potential::zero();
  EXPECT_EQ(p.envelope_const(), 0.0);
  EXPECT_EQ(p.support(), 0u);
}

TEST(Potential, TableEnvelopeIsExactMaximum) {
  std::vector<double> values;
  for (int n = 0; n <= 20; ++n) values.push_back(std::pow(1.0 + n, -3.0));
  const auto p = Potential::from_table(values, 3.0);
  double scan = 0.0;
  for (int n = 0; n <= 20; ++n) scan = std::max(scan, std::pow(1.0 + n, 3.0) * std::abs(values[std::size_t(n)]));
  EXPECT_NEAR(p.envelope_const(), scan, 1e-15);
  EXPECT_NEAR(p.envelope_const(), 1.0, 1e-12);
}

TEST(Potential, RejectsRhoAtOrBelowFiveHalves) {
  EXPECT_THROW(Potential::zero(2.5), AssumptionViolated);
  EXPECT_THROW(Potential::rank_one(0.5, 0, 2.0), AssumptionViolated);
  try {
    Potential::zero(2.0);
  } catch (const AssumptionViolated& e) {
    EXPECT_NE(std::string(e.what()).find("assumption violated"), std::string::npos);
  }
}

TEST(Potential, RejectsNonFiniteEntries) {
  EXPECT_THROW(Potential::from_table({0.1, std::nan("")}, 3.0), InvalidInput);
  EXPECT_THROW(Potential::from_table({INFINITY}, 3.0), InvalidInput);
}

TEST(Potential, TrailingZerosAreTrimmed) {
  const auto p = Potential::from_table({0.2, 0.0, -0.1, 0.0, 0.0}, 3.0);
  EXPECT_EQ(p.support(), 3u);
}

TEST(Potential, RandomIsReproducibleAndObeysEnvelope) {
  const auto a = Potential::random_decaying(1.5, 3.0, 7, 64, 3.0);
  const auto b = Potential::random_decaying(1.5, 3.0, 7, 64, 3.0);
  ASSERT_EQ(a.support(), b.support());
  for (long n = 0; n < long(a.support()); ++n) {
    EXPECT_EQ(a(n), b(n));
    EXPECT_LE(std::abs(a(n)), 1.5 * std::pow(1.0 + n, -3.0));
  }
  const auto c = Potential::random_decaying(1.5, 3.0, 8, 64, 3.0);
  EXPECT_NE(a(0), c(0));
}

TEST(Potential, EnvelopeBoundsEverySite) {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const auto p = Potential::random_decaying(2.0, 3.5, seed, 40, 3.0);
    for (long n = 0; n < long(p.support()); ++n)
      EXPECT_GE(p.envelope_const() * std::pow(1.0 + n, -p.rho()) * (1.0 + 1e-15), std::abs(p(n)));
  }
}

TEST(Geometry, ZetaOffAxis) {
  const OffAxisPoint z2(2.0);
  EXPECT_NEAR(z2.zeta(), 2.0 - std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(z2.zeta() * z2.zeta() - 4.0 * z2.zeta() + 1.0, 0.0, 1e-15);
  const OffAxisPoint zm2(-2.0);
  EXPECT_NEAR(zm2.zeta(), -2.0 + std::sqrt(3.0), 1e-15);
  EXPECT_LT(std::abs(zm2.zeta()), 1.0);
  EXPECT_THROW(OffAxisPoint(0.5), InvalidInput);
}

TEST(Geometry, ZetaOnTheRim) {
  const auto p = SpectralPoint::from_lambda(0.0);
  EXPECT_NEAR(std::abs(p.zeta() - cplx(0.0, -1.0)), 0.0, 1e-16);
  EXPECT_FALSE(p.at_threshold());
  EXPECT_TRUE(SpectralPoint::from_lambda(1.0).at_threshold());
  EXPECT_TRUE(SpectralPoint::from_theta(pi).at_threshold());
}

TEST(Geometry, RimInvariants) {
  for (int k = 1; k < 200; ++k) {
    const auto p = SpectralPoint::from_theta(pi * k / 200.0);
    const cplx zeta = p.zeta();
    EXPECT_NEAR(std::abs(zeta), 1.0, 1e-15);
    EXPECT_NEAR(zeta.real(), p.lambda(), 1e-16);
    EXPECT_LE(zeta.imag(), 0.0);
    EXPECT_NEAR(std::abs(zeta + 1.0 / zeta - 2.0 * p.lambda()), 0.0, 1e-14);
  }
}

TEST(Geometry, OffAxisInvariants) {
  for (double z : {-50.0, -3.0, -1.0001, -1.0 - 1e-9, 1.0 + 1e-9, 1.0001, 1.5, 7.0, 1e3}) {
    const OffAxisPoint p(z);
    EXPECT_LT(std::abs(p.zeta()), 1.0);
    EXPECT_GT(p.zeta() * z, 0.0);
    EXPECT_NEAR(p.zeta() + 1.0 / p.zeta(), 2.0 * z, 1e-12 * std::abs(z));
  }
}

TEST(Truncation, FreeTwoByTwo) {
  const auto h = hamiltonian_truncation(Potential::zero(), 2);
  const Eigen::MatrixXd dense = h.dense();
  EXPECT_EQ(dense(0, 0), 0.0);
  EXPECT_EQ(dense(0, 1), 0.5);
  EXPECT_EQ(dense(1, 0), 0.5);
  const auto e = h.eigenvalues();
  EXPECT_NEAR(e(0), -0.5, 1e-15);
  EXPECT_NEAR(e(1), 0.5, 1e-15);
}

TEST(Truncation, RankOneThreeByThree) {
  const Eigen::MatrixXd dense = hamiltonian_truncation(Potential::rank_one(0.75, 0), 3).dense();
  Eigen::MatrixXd expected(3, 3);
  expected << 0.75, 0.5, 0, 0.5, 0, 0.5, 0, 0.5, 0;
  EXPECT_EQ((dense - expected).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Truncation, LargestEigenvalueApproachesClosedForm) {
  const auto e = hamiltonian_truncation(Potential::rank_one(0.75, 0), 2000).eigenvalues();
  EXPECT_NEAR(e(e.size() - 1), *oracle::rank_one_eigenvalue(0.75), 1e-12);
  EXPECT_NEAR(e(e.size() - 1), 13.0 / 12.0, 1e-12);
}

TEST(Truncation, SpectrumWithinNumericalRange) {
  const auto p = Potential::random_decaying(1.5, 3.0, 3, 64, 3.0);
  const auto e = hamiltonian_truncation(p, 300).eigenvalues();
  for (int i = 0; i < e.size(); ++i) EXPECT_LE(std::abs(e(i)), 1.0 + p.sup_norm() + 1e-12);
  const Eigen::MatrixXd dense = hamiltonian_truncation(p, 50).dense();
  EXPECT_EQ((dense - dense.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Truncation, InverseIterationEigenvector) {
  const auto h = hamiltonian_truncation(Potential::rank_one(0.75, 0), 500);
  const auto v = h.eigenvector(13.0 / 12.0);
  const Eigen::VectorXd expected = oracle::rank_one_eigenvector(0.75, 500);
  EXPECT_LT((v - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GridSpec, Validation) {
  GridSpec g;
  EXPECT_NO_THROW(g.validate());
  g.n_tail = 10;
  EXPECT_THROW(g.validate(), InvalidInput);
  g = GridSpec{};
  g.m_theta = 100;
  EXPECT_THROW(g.validate(), InvalidInput);
  g = GridSpec{};
  g.tol_root = 0.0;
  EXPECT_THROW(g.validate(), InvalidInput);
  g = GridSpec{};
  g.m_beta = 1023;
  EXPECT_THROW(g.validate(), InvalidInput);
  EXPECT_DOUBLE_EQ(GridSpec{}.z_max_for(Potential::rank_one(0.75, 0)), 1.0 + 2.0 * 1.75);
}
