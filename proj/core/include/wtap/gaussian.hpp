#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wtap/channel.hpp"
#include "wtap/polytope.hpp"
#include "wtap/regions_discrete.hpp"
#include "wtap/rng.hpp"

namespace wtap {

using Eigen::MatrixXd;

inline constexpr double kSymTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

// Y_j = X + N_j, Z = X + N_Z with E[XX^T] <= S.
struct GaussChannel {
  MatrixXd S, Sigma1, Sigma2, SigmaZ;
  int dim() const { return static_cast<int>(S.rows()); }
};

// Y_j = H_j X + N_j with identity noise.
struct HGaussChannel {
  MatrixXd H1, H2, HZ;
};

struct CovSplit {
  bool general = false;
  MatrixXd K;           // single layer
  MatrixXd K0, K1, K2;  // three layers
  static CovSplit single(MatrixXd k);
  static CovSplit triple(MatrixXd k0, MatrixXd k1, MatrixXd k2);
};

// Throws NotPSD / DimensionMismatch.
void validate(const GaussChannel& ch);
void validate(const CovSplit& split, const GaussChannel& ch);

// Smallest eigenvalue of the symmetric part.
double min_eigenvalue(const MatrixXd& m);
bool is_psd(const MatrixXd& m, double tol = kPsdTol);
// Cholesky log-determinant; nonpositive pivots throw SingularMatrix.
double logdet(const MatrixXd& m);
// 0.5 * ln(|a| / |b|)
double half_log_ratio(const MatrixXd& a, const MatrixXd& b);

bool check_degraded_order(const GaussChannel& ch);

struct HDegradedWitness {
  bool degraded = false;
  MatrixXd D21, DZ2;
  double residual21 = 0, residualZ2 = 0;
};
HDegradedWitness check_degraded_H(const HGaussChannel& ch);

// Covariance of (N1, N1+N', N1+N'+N'') with independent increments.
MatrixXd construct_joint_noise(const GaussChannel& ch);

RegionPoint gauss_constants(const CovSplit& split, const GaussChannel& ch);
IneqSystem eval_gauss_inner(const CovSplit& split, const GaussChannel& ch);
IneqSystem eval_gauss_outer(const CovSplit& split, const GaussChannel& ch);

enum class GaussCorollary { Cor4, Cor5, Cor6, Cor6Alt };
GaussCorollary parse_gauss_corollary(const std::string& name);
IneqSystem specialize_gauss_corollary(const IneqSystem& sys, GaussCorollary which, double tol = 1e-9);

MatrixXd dpc_matrix(const MatrixXd& K1, const MatrixXd& Sigma1);

// I(A;B|C) for a zero-mean Gaussian vector with covariance `cov`; the sets
// are index lists. Degenerate covariances use pseudo-determinants of the
// conditional covariances.
double gauss_mi(const MatrixXd& cov, const std::vector<int>& a, const std::vector<int>& b,
                const std::vector<int>& c = {});

struct DpcCheck {
  double lhs = 0, rhs = 0, residual = 0;
};
// Evaluates I(V1;Y1|U) - I(V1;V2|U) for the jointly Gaussian dirty-paper
// selection V1 = U + A U2 + U1 and compares it with 0.5 ln|K1+S1|/|S1|.
DpcCheck dpc_identity_check(const MatrixXd& K1, const MatrixXd& K2, const MatrixXd& K0, const GaussChannel& ch);

enum class GaussOrder { O21, O12 };
RegionPoint general_gauss_constants(const CovSplit& split, const GaussChannel& ch, GaussOrder order);
IneqSystem eval_general_gauss(const CovSplit& split, const GaussChannel& ch, GaussOrder order);

// Random symmetric PSD matrices; K drawn with 0 <= K <= S.
MatrixXd random_psd(int d, Rng& rng);
MatrixXd random_pd(int d, Rng& rng, double floor = 0.1);
MatrixXd random_below(const MatrixXd& S, Rng& rng);
GaussChannel random_degraded_gauss(int d, Rng& rng);
CovSplit random_triple(const MatrixXd& S, Rng& rng);

enum class CovSweepMode { FixedS, TraceP };
struct CovSweepConfig {
  std::size_t budget = 64;
  std::uint64_t seed = 1;
  CovSweepMode mode = CovSweepMode::FixedS;
  double tol = 1e-9;
};
struct CovSweepSample {
  MatrixXd S, K;
  RegionPoint constants;
  VPolytope polytope;
};
struct CovSweepResult {
  std::vector<std::string> vars;
  std::vector<CovSweepSample> samples;
  std::vector<Eigen::VectorXd> cloud, hull;
};
// Sample 0 is K = S/2. trace_P mode runs the fixed-S samples first, then the
// same number of samples with random S of trace tr(ch.S).
CovSweepResult sweep_covariances(const GaussChannel& ch, const CovSweepConfig& cfg);

// Lattice discretization of a scalar degraded channel with the Gaussian aux
// U ~ N(0, S-K), X = U + U'. Inputs sit on a lattice of pitch `input_step`,
// outputs are binned with width `output_step` over +-`span` standard
// deviations.
struct ScalarDiscretization {
  AuxJoint aux;
  ChannelSpec channel;
};
ScalarDiscretization discretize_scalar(const GaussChannel& ch, double K, double input_step = 0.15,
                                       double output_step = 0.08, double span = 6.0);

}  // namespace wtap
