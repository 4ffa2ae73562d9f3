#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "wtap/error.hpp"
#include "wtap/fisher.hpp"

using namespace wtap;
using Eigen::MatrixXd;

namespace {

using Real = long double;

ScalarMixture two_point(double a, double s1, double s2, double sz) {
  ScalarMixture m;
  m.u = {0, 0};
  m.x = {-a, a};
  m.w = {0.5, 0.5};
  m.s1 = s1;
  m.s2 = s2;
  m.sz = sz;
  return m;
}

ScalarMixture bpsk() {
  ScalarMixture m;
  m.u = {0, 0, 1, 1};
  m.x = {-1, 1, -0.5, 0.5};
  m.w = {0.25, 0.25, 0.25, 0.25};
  m.s1 = 0.5;
  m.s2 = 1;
  m.sz = 2;
  return m;
}

// Trapezoid on a fixed fine grid: h(Y|U) and J(Y|U) of a Gaussian-smoothed
// mixture, label by label.
struct Smoothed {
  Real h = 0, J = 0;
};
Smoothed smoothed(const ScalarMixture& m, double var) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < m.x.size(); ++k) groups[m.u[k]].push_back(k);
  const Real pi = 3.14159265358979323846264338327950288L;
  Smoothed out;
  const int n = 120000;
  const Real lo = -25, hi = 25, dy = (hi - lo) / n;
  for (const auto& [label, ks] : groups) {
    Real W = 0;
    for (auto k : ks) W += m.w[k];
    Real h = 0, J = 0;
    for (int i = 0; i <= n; ++i) {
      Real y = lo + dy * i, p = 0, dp = 0;
      for (auto k : ks) {
        Real z = (y - m.x[k]);
        Real g = m.w[k] / W * std::exp(-z * z / (2 * var)) / std::sqrt(2 * pi * var);
        p += g;
        dp += -z / var * g;
      }
      Real wt = (i == 0 || i == n) ? 0.5L : 1.0L;
      if (p > 0) {
        h -= wt * p * std::log(p) * dy;
        J += wt * dp * dp / p * dy;
      }
    }
    out.h += W * h;
    out.J += W * J;
  }
  return out;
}

GaussPair pair2() {
  GaussPair p;
  p.du = 1;
  p.dx = 2;
  p.cov.resize(3, 3);
  p.cov << 1.0, 0.3, 0.2, 0.3, 1.5, 0.4, 0.2, 0.4, 2.0;
  return p;
}

}  // namespace

TEST(GaussianFisher, IndependentAux) {
  GaussPair p;
  p.du = 1;
  p.dx = 1;
  p.cov.resize(2, 2);
  p.cov << 1, 0, 0, 2;
  EXPECT_NEAR(gaussian_fisher(p, MatrixXd::Constant(1, 1, 0.5))(0, 0), 1.0 / 2.5, 1e-15);
}

TEST(GaussianFisher, AuxEqualsInput) {
  GaussPair p;
  p.du = 2;
  p.dx = 2;
  MatrixXd K(2, 2);
  K << 2, 0.5, 0.5, 1;
  p.cov.resize(4, 4);
  p.cov << K, K, K, K;
  MatrixXd SN(2, 2);
  SN << 1, 0.2, 0.2, 0.7;
  EXPECT_LT((gaussian_fisher(p, SN) - SN.inverse()).norm(), 1e-10);
}

TEST(MixtureQuadrature, MatchesTrapezoidOracle) {
  ScalarMixture m = bpsk();
  for (double var : {0.3, 1.0, 2.5}) {
    Smoothed o = smoothed(m, var);
    EXPECT_NEAR(mixture_cond_entropy(m, var), static_cast<double>(o.h), 1e-10);
    EXPECT_NEAR(mixture_cond_fisher(m, var), static_cast<double>(o.J), 1e-10);
  }
}

TEST(MixtureQuadrature, SinglePointIsGaussian) {
  ScalarMixture m;
  m.u = {0};
  m.x = {0.7};
  m.w = {1};
  EXPECT_NEAR(mixture_cond_fisher(m, 0.8), 1.0 / 0.8, 1e-12);
  EXPECT_NEAR(mixture_entropy(m, 0.8), 0.5 * std::log(2 * M_PI * M_E * 0.8), 1e-12);
}

TEST(DeBruijn, GaussianTwoByTwo) {
  MatrixXd SN(2, 2);
  SN << 1, 0.3, 0.3, 0.8;
  EXPECT_LE(debruijn_check(pair2(), SN).residual, 1e-5);
}

TEST(DeBruijn, TwoPointMixture) { EXPECT_LE(debruijn_check(two_point(1, 0.5, 1, 2), 0.7).residual, 1e-4); }

TEST(DeBruijn, HalvingRatioIsQuadratic) {
  GaussPair p;
  p.du = 1;
  p.dx = 1;
  p.cov.resize(2, 2);
  p.cov << 1, 0.5, 0.5, 1;
  DeBruijnResult g = debruijn_check(p, MatrixXd::Constant(1, 1, 0.3), 0.05);
  EXPECT_NEAR(g.ratio, 4.0, 0.8);
  DeBruijnResult m = debruijn_check(two_point(1, 0.5, 1, 2), 0.5, 0.05);
  EXPECT_NEAR(m.ratio, 4.0, 0.8);
}

TEST(DeBruijn, StepTooLarge) {
  try {
    // the step is relative to the noise scale, so 1.5 leaves the PD cone
    debruijn_check(pair2(), 0.01 * MatrixXd::Identity(2, 2), 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepTooLarge);
  }
  try {
    debruijn_check(two_point(1, 0.5, 1, 2), 0.01, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepTooLarge);
  }
}

TEST(Lemmas, SuiteHasNoNegativeSlack) {
  LemmaReport r = lemma_suite_check(30, 11);
  EXPECT_TRUE(r.pass());
  for (const char* l : {"6", "7", "8", "9", "11", "12"}) EXPECT_GE(r.min_slack(l), -1e-8) << "lemma " << l;
}

TEST(Lemmas, GaussianEntropyBoundIsTight) {
  // for Gaussian pairs the Fisher entropy bound holds with equality
  Rng rng(12);
  for (int d = 1; d <= 3; ++d) {
    GaussPair p = random_gauss_pair(d, d, rng);
    MatrixXd SN = random_pd(d, rng);
    double h = gaussian_cond_entropy(p, SN);
    double fisher_side = 0.5 * (d * std::log(2 * M_PI * M_E) - logdet(gaussian_fisher(p, SN)));
    EXPECT_NEAR(h, fisher_side, 1e-10);
  }
}

TEST(Lemmas, NoisierReceiverHasLargerEffectiveVariance) {
  GaussPair p = pair2();
  MatrixXd I = MatrixXd::Identity(2, 2);
  MatrixXd lhs = gaussian_fisher(p, 2 * I).inverse() - 2 * I;
  MatrixXd rhs = gaussian_fisher(p, I).inverse() - I;
  EXPECT_GE(min_eigenvalue(lhs - rhs), -1e-10);
}

TEST(Lemmas, InverseIsOrderReversing) {
  MatrixXd A(2, 2), B(2, 2);
  A << 2, 0.5, 0.5, 1;
  B = A + MatrixXd::Identity(2, 2);
  EXPECT_GE(min_eigenvalue(A.inverse() - B.inverse()), 0.0);
}

TEST(TStar, GaussianPairSitsAtZero) {
  GaussPair p;
  p.du = 1;
  p.dx = 1;
  p.cov.resize(2, 2);
  p.cov << 1, 0.6, 0.6, 1;
  TStar t = interpolation_t_star(p, 1, 2, 1);
  EXPECT_NEAR(t.t, 0.0, 1e-12);
  EXPECT_NEAR(t.K1, 1 - 0.36, 1e-12);
  EXPECT_TRUE(t.order_ok);
}

TEST(TStar, DeterministicAuxGivesFullVariance) {
  GaussPair p;
  p.du = 1;
  p.dx = 1;
  p.cov.resize(2, 2);
  p.cov << 1, 0, 0, 1.3;
  EXPECT_NEAR(interpolation_t_star(p, 0.5, 1.5, 1.3).K1, 1.3, 1e-12);
}

TEST(TStar, TwoPointMixtureMatchesGridOracle) {
  ScalarMixture m = two_point(1, 0.5, 1, 2);
  TStar t = interpolation_t_star(m);
  EXPECT_GT(t.t, 0.0);
  EXPECT_LT(t.t, 1.0);
  EXPECT_TRUE(t.order_ok);
  // oracle: same interpolation built from trapezoid entropies and Fisher
  // information, root located by a dense sign-change scan
  Smoothed y2 = smoothed(m, m.s2), z = smoothed(m, m.sz);
  Real a = 1 / z.J - m.sz, b = 1 / y2.J - m.s2, target = z.h - y2.h;
  auto f = [&](Real s) {
    Real k = (1 - s) * a + s * b;
    return 0.5L * std::log((k + m.sz) / (k + m.s2)) - target;
  };
  const int n = 200000;
  Real root = -1;
  for (int i = 0; i < n && root < 0; ++i) {
    Real s0 = Real(i) / n, s1 = Real(i + 1) / n;
    if ((f(s0) < 0) != (f(s1) < 0)) root = (s0 + s1) / 2;
  }
  ASSERT_GE(root, 0);
  EXPECT_NEAR(t.t, static_cast<double>(root), 1e-5);
}

TEST(TStar, RequiresDegradedNoise) {
  try {
    interpolation_t_star(two_point(1, 0.5, 2, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDegraded);
  }
}

TEST(Evidence, AntipodalInputIsDominated) {
  EvidenceReport r = sufficiency_evidence_scalar(two_point(1, 0.5, 1, 2));
  EXPECT_TRUE(r.dominated);
  EXPECT_LE(r.slack, 1e-3);
  ASSERT_EQ(r.mixture.size(), 5u);
  // a deterministic aux makes the cloud layer carry nothing
  EXPECT_NEAR(r.mixture[0], 0.0, 1e-12);
  EXPECT_NEAR(r.mixture[2], 0.0, 1e-12);
}

TEST(Evidence, LabeledInputIsDominated) {
  EvidenceReport r = sufficiency_evidence_scalar(bpsk());
  EXPECT_TRUE(r.dominated);
  EXPECT_GE(r.best_K, 0.0);
  EXPECT_LE(r.best_K, bpsk().second_moment());
}

TEST(Evidence, MixtureConstantsMatchOracle) {
  ScalarMixture m = bpsk();
  auto c = mixture_degraded_constants(m);
  // I(X;Y1|U) from the trapezoid oracle
  Real iXY1U = smoothed(m, m.s1).h - 0.5L * std::log(2 * M_PI * M_E * m.s1);
  EXPECT_NEAR(c[4] - c[2], static_cast<double>(iXY1U), 1e-10);
}

TEST(Evidence, PowerCapEnforced) {
  try {
    sufficiency_evidence_scalar(two_point(1, 0.5, 1, 2), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
  }
}
