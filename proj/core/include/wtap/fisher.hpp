#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wtap/gaussian.hpp"
#include "wtap/rng.hpp"

namespace wtap {

// Jointly Gaussian (U, X): `cov` is the (du+dx) square covariance with U first.
struct GaussPair {
  MatrixXd cov;
  int du = 0, dx = 0;
};

MatrixXd conditional_cov_x(const GaussPair& p);
// (Cov(X|U) + Sigma_N)^-1
MatrixXd gaussian_fisher(const GaussPair& p, const MatrixXd& SigmaN);
// h(X+N|U) in nats.
double gaussian_cond_entropy(const GaussPair& p, const MatrixXd& SigmaN);

// Scalar (U, X) with finite support: point k has label u[k], value x[k] and
// mass w[k]. Noise variances of the three receivers ride along.
struct ScalarMixture {
  std::vector<int> u;
  std::vector<double> x, w;
  double s1 = 1, s2 = 1, sz = 1;

  void validate() const;
  double second_moment() const;
  // E[Var(X|U)]
  double conditional_variance() const;
};

inline constexpr double kQuadTol = 1e-10;

// Quadrature over Gaussian-smoothed mixtures, noise variance `var`.
double mixture_entropy(const ScalarMixture& m, double var);       // h(X+N)
double mixture_cond_entropy(const ScalarMixture& m, double var);  // h(X+N|U)
double mixture_cond_fisher(const ScalarMixture& m, double var);   // J(X+N|U)

struct DeBruijnResult {
  double residual = 0;       // at `step`
  double residual_half = 0;  // at step/2
  double ratio = 0;          // residual / residual_half
};
// Central differences of h(X+N|U) over symmetric perturbations of Sigma_N,
// compared with J/2 (off-diagonal entries count twice). `step` is relative to
// the mean noise variance.
DeBruijnResult debruijn_check(const GaussPair& p, const MatrixXd& SigmaN, double step = 1e-4);
DeBruijnResult debruijn_check(const ScalarMixture& m, double var, double step = 1e-4);

struct LemmaSlack {
  std::string lemma;
  std::uint64_t seed = 0;
  int dim = 1;
  double slack = 0;  // min eigenvalue or scalar gap; >= -1e-8 passes
};
struct LemmaReport {
  std::vector<LemmaSlack> rows;
  double min_slack(const std::string& lemma) const;
  bool pass(double tol = 1e-8) const;
};
// Instances 0..count-1 cycle through d = 1, 2, 3; each instance exercises
// every lemma once, with scalar mixtures added where entropies are
// computable by quadrature.
LemmaReport lemma_suite_check(std::size_t count, std::uint64_t seed);

struct TStar {
  double t = 0;
  double K1 = 0;
  double lower = 0;  // J^-1(X+N2|U) - s2
  double S = 0;
  bool order_ok = false;
};
// Root of f(t) = h(Z|U) - h(Y2|U) by bisection; S defaults to E[X^2].
TStar interpolation_t_star(const ScalarMixture& m, double S = -1);
TStar interpolation_t_star(const GaussPair& p, double s2, double sz, double S);

struct EvidenceReport {
  std::vector<std::string> labels;
  std::vector<double> mixture, gaussian;  // constants at the best K
  double best_K = 0;
  double slack = 0;  // max over bounds of mixture - gaussian at best_K
  bool dominated = false;
};
std::vector<double> mixture_degraded_constants(const ScalarMixture& m);
// Searches K in [0, S] for a Gaussian split whose five bounds all dominate
// the mixture's; `tol` is the allowed excess.
EvidenceReport sufficiency_evidence_scalar(const ScalarMixture& m, double S = -1, double tol = 1e-3,
                                           std::size_t grid = 2001);

ScalarMixture random_mixture(Rng& rng, double S = 1.0);
GaussPair random_gauss_pair(int du, int dx, Rng& rng);

}  // namespace wtap
