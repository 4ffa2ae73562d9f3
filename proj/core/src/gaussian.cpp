#include "wtap/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "wtap/error.hpp"
#include "wtap/sweep.hpp"

namespace wtap {

namespace {

using Eigen::Index;
using Eigen::SelfAdjointEigenSolver;

void require_square(const MatrixXd& m, Index d, const std::string& what) {
  if (m.rows() != d || m.cols() != d)
    fail(ErrorKind::DimensionMismatch, what + " must be " + std::to_string(d) + "x" + std::to_string(d));
}

void require_symmetric(const MatrixXd& m, const std::string& what) {
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymTol * scale)
    fail(ErrorKind::NotPSD, what + " is not symmetric");
}

double psd_slack(const MatrixXd& m) {
  double tr = m.trace() / static_cast<double>(std::max<Index>(1, m.rows()));
  return kPsdTol * std::max(1.0, std::abs(tr));
}

MatrixXd sqrt_psd(const MatrixXd& m) {
  SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// log of the product of eigenvalues above a relative threshold, and the rank.
std::pair<double, Index> log_pdet(const MatrixXd& m) {
  if (m.rows() == 0) return {0.0, 0};
  SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double thr = 1e-11 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  double s = 0.0;
  Index r = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > thr) {
      s += std::log(ev(i));
      ++r;
    }
  return {s, r};
}

MatrixXd pinv_sym(const MatrixXd& m) {
  SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()));
  const auto& ev = es.eigenvalues();
  double thr = 1e-11 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv = ev.unaryExpr([thr](double x) { return x > thr ? 1.0 / x : 0.0; });
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

MatrixXd sub(const MatrixXd& cov, const std::vector<int>& r, const std::vector<int>& c) {
  MatrixXd out(static_cast<Index>(r.size()), static_cast<Index>(c.size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = cov(r[i], c[j]);
  return out;
}

MatrixXd conditional_cov(const MatrixXd& cov, const std::vector<int>& a, const std::vector<int>& c) {
  MatrixXd aa = sub(cov, a, a);
  if (c.empty()) return aa;
  MatrixXd ac = sub(cov, a, c);
  return aa - ac * pinv_sym(sub(cov, c, c)) * ac.transpose();
}

MatrixXd orthogonal(int d, Rng& rng) {
  MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<MatrixXd> qr(g);
  return qr.householderQ();
}

void require_split_shapes(const CovSplit& s, Index d) {
  if (s.general) {
    require_square(s.K0, d, "K0");
    require_square(s.K1, d, "K1");
    require_square(s.K2, d, "K2");
  } else {
    require_square(s.K, d, "K");
  }
}

}  // namespace

CovSplit CovSplit::single(MatrixXd k) {
  CovSplit s;
  s.K = std::move(k);
  return s;
}

CovSplit CovSplit::triple(MatrixXd k0, MatrixXd k1, MatrixXd k2) {
  CovSplit s;
  s.general = true;
  s.K0 = std::move(k0);
  s.K1 = std::move(k1);
  s.K2 = std::move(k2);
  return s;
}

double min_eigenvalue(const MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  SelfAdjointEigenSolver<MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_psd(const MatrixXd& m, double tol) { return min_eigenvalue(m) >= -tol; }

double logdet(const MatrixXd& m) {
  Eigen::LLT<MatrixXd> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) fail(ErrorKind::SingularMatrix, "log-determinant of a non-positive-definite matrix");
  const MatrixXd& L = llt.matrixLLT();
  double s = 0.0;
  for (Index i = 0; i < L.rows(); ++i) {
    if (!(L(i, i) > 0)) fail(ErrorKind::SingularMatrix, "nonpositive pivot in Cholesky factorization");
    s += std::log(L(i, i));
  }
  return 2.0 * s;
}

double half_log_ratio(const MatrixXd& a, const MatrixXd& b) { return 0.5 * (logdet(a) - logdet(b)); }

void validate(const GaussChannel& ch) {
  Index d = ch.S.rows();
  if (d == 0) fail(ErrorKind::DimensionMismatch, "empty channel matrices");
  require_square(ch.S, d, "S");
  require_symmetric(ch.S, "S");
  // zero input power is allowed; the noises must be nondegenerate
  double evS = min_eigenvalue(ch.S);
  if (evS < -psd_slack(ch.S)) fail(ErrorKind::NotPSD, "S has eigenvalue " + std::to_string(evS));
  const std::pair<const MatrixXd*, const char*> ms[] = {
      {&ch.Sigma1, "Sigma1"}, {&ch.Sigma2, "Sigma2"}, {&ch.SigmaZ, "SigmaZ"}};
  for (const auto& [m, name] : ms) {
    require_square(*m, d, name);
    require_symmetric(*m, name);
    double ev = min_eigenvalue(*m);
    if (!(ev > 0)) fail(ErrorKind::NotPSD, std::string(name) + " is not positive definite (eigenvalue " + std::to_string(ev) + ")");
  }
}

void validate(const CovSplit& split, const GaussChannel& ch) {
  Index d = ch.S.rows();
  require_split_shapes(split, d);
  auto check = [&](const MatrixXd& m, const char* name) {
    require_symmetric(m, name);
    double ev = min_eigenvalue(m);
    if (ev < -psd_slack(m)) fail(ErrorKind::NotPSD, std::string(name) + " has eigenvalue " + std::to_string(ev));
  };
  MatrixXd total;
  if (split.general) {
    check(split.K0, "K0");
    check(split.K1, "K1");
    check(split.K2, "K2");
    total = split.K0 + split.K1 + split.K2;
  } else {
    check(split.K, "K");
    total = split.K;
  }
  MatrixXd gap = ch.S - total;
  double ev = min_eigenvalue(gap);
  if (ev < -psd_slack(ch.S)) fail(ErrorKind::CapExceeded, "covariance exceeds S (eigenvalue " + std::to_string(ev) + ")");
}

bool check_degraded_order(const GaussChannel& ch) {
  Index d = ch.Sigma1.rows();
  if (ch.Sigma2.rows() != d || ch.SigmaZ.rows() != d) return false;
  if (!(min_eigenvalue(ch.Sigma1) > 0)) return false;
  return min_eigenvalue(ch.Sigma2 - ch.Sigma1) >= -kPsdTol && min_eigenvalue(ch.SigmaZ - ch.Sigma2) >= -kPsdTol;
}

HDegradedWitness check_degraded_H(const HGaussChannel& ch) {
  if (ch.H1.cols() != ch.H2.cols() || ch.H1.cols() != ch.HZ.cols())
    fail(ErrorKind::DimensionMismatch, "H matrices need the same column count");
  auto pinv = [](const MatrixXd& m) { return m.completeOrthogonalDecomposition().pseudoInverse(); };
  HDegradedWitness w;
  w.D21 = ch.H2 * pinv(ch.H1);
  w.DZ2 = ch.HZ * pinv(ch.H2);
  w.residual21 = (ch.H2 - w.D21 * ch.H1).norm();
  w.residualZ2 = (ch.HZ - w.DZ2 * ch.H2).norm();
  auto contraction = [](const MatrixXd& D) {
    MatrixXd g = MatrixXd::Identity(D.rows(), D.rows()) - D * D.transpose();
    return min_eigenvalue(g) >= -kPsdTol;
  };
  w.degraded = w.residual21 <= 1e-9 && w.residualZ2 <= 1e-9 && contraction(w.D21) && contraction(w.DZ2);
  return w;
}

MatrixXd construct_joint_noise(const GaussChannel& ch) {
  if (!check_degraded_order(ch)) fail(ErrorKind::NotDegraded, "noise covariances are not ordered");
  Index d = ch.Sigma1.rows();
  MatrixXd J(3 * d, 3 * d);
  const MatrixXd* blk[3] = {&ch.Sigma1, &ch.Sigma2, &ch.SigmaZ};
  // Cov(N_a, N_b) is the covariance of the less noisy of the two.
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) J.block(a * d, b * d, d, d) = *blk[std::min(a, b)];
  return J;
}

RegionPoint gauss_constants(const CovSplit& split, const GaussChannel& ch) {
  if (split.general) fail(ErrorKind::InvalidArgument, "expected a single covariance K");
  validate(ch);
  validate(split, ch);
  if (!check_degraded_order(ch)) fail(ErrorKind::NotDegraded, "need Sigma1 <= Sigma2 <= SigmaZ");
  const MatrixXd& S = ch.S;
  const MatrixXd& K = split.K;
  double cloud = half_log_ratio(S + ch.Sigma2, K + ch.Sigma2);
  double priv = half_log_ratio(K + ch.Sigma1, ch.Sigma1);
  RegionPoint p;
  for (const auto& r : degraded_rows()) {
    std::string l;
    for (const auto& v : r) l += (l.empty() ? "" : "+") + v;
    p.labels.push_back(l);
  }
  p.values = {cloud - half_log_ratio(S + ch.SigmaZ, K + ch.SigmaZ),
              cloud + priv - half_log_ratio(S + ch.SigmaZ, ch.SigmaZ),
              cloud,
              cloud + priv - half_log_ratio(K + ch.SigmaZ, ch.SigmaZ),
              cloud + priv};
  return p;
}

IneqSystem eval_gauss_inner(const CovSplit& split, const GaussChannel& ch) {
  return rate_system(degraded_rows(), gauss_constants(split, ch).values);
}

IneqSystem eval_gauss_outer(const CovSplit& split, const GaussChannel& ch) {
  auto v = gauss_constants(split, ch).values;
  auto rows = degraded_rows();
  rows.erase(rows.begin() + 3);
  v.erase(v.begin() + 3);
  return rate_system(rows, v);
}

GaussCorollary parse_gauss_corollary(const std::string& name) {
  if (name == "cor4") return GaussCorollary::Cor4;
  if (name == "cor5") return GaussCorollary::Cor5;
  if (name == "cor6") return GaussCorollary::Cor6;
  if (name == "cor6_alt") return GaussCorollary::Cor6Alt;
  fail(ErrorKind::UnknownCorollary, "unknown corollary '" + name + "'");
}

IneqSystem specialize_gauss_corollary(const IneqSystem& sys, GaussCorollary which, double tol) {
  // Same rate structure as the discrete corollaries.
  switch (which) {
    case GaussCorollary::Cor4:
      return specialize_corollary(sys, Corollary::Cor1, tol);
    case GaussCorollary::Cor5:
      return specialize_corollary(sys, Corollary::Cor2, tol);
    case GaussCorollary::Cor6:
      return specialize_corollary(sys, Corollary::Cor3, tol);
    case GaussCorollary::Cor6Alt:
      return specialize_corollary(sys, Corollary::Cor3Alt, tol);
  }
  fail(ErrorKind::UnknownCorollary, "unknown corollary");
}

MatrixXd dpc_matrix(const MatrixXd& K1, const MatrixXd& Sigma1) {
  MatrixXd m = K1 + Sigma1;
  Eigen::LLT<MatrixXd> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) fail(ErrorKind::SingularMatrix, "K1 + Sigma1 is not invertible");
  // A = K1 (K1+S1)^-1, solved from (K1+S1) A^T = K1^T.
  return llt.solve(K1.transpose()).transpose();
}

double gauss_mi(const MatrixXd& cov, const std::vector<int>& a, const std::vector<int>& b,
                const std::vector<int>& c) {
  if (a.empty() || b.empty()) fail(ErrorKind::EmptyArgument, "mutual information needs nonempty sets");
  std::vector<int> bc = b;
  bc.insert(bc.end(), c.begin(), c.end());
  auto [l1, r1] = log_pdet(conditional_cov(cov, a, c));
  auto [l2, r2] = log_pdet(conditional_cov(cov, a, bc));
  if (r1 != r2)
    fail(ErrorKind::SingularConditionalCovariance, "conditioning removes a direction: mutual information is infinite");
  return std::max(0.0, 0.5 * (l1 - l2));
}

DpcCheck dpc_identity_check(const MatrixXd& K1, const MatrixXd& K2, const MatrixXd& K0, const GaussChannel& ch) {
  validate(ch);
  CovSplit split = CovSplit::triple(K0, K1, K2);
  validate(split, ch);
  const Index d = ch.S.rows();
  // Given U = Q + Q' the cloud terms cancel, leaving V1 = A U2 + U1, V2 = U2
  // and Y1 = U2 + U1 + N1. With K1 = L L^T (L over the positive eigenvalues)
  // and U1 = L g, V1 = L T for T = L^T (K1 + Sigma1)^-1 U2 + g. L has full
  // column rank, so T carries the same information as V1 without the
  // ill-conditioning of tiny K1 eigenvalues.
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (K1 + K1.transpose()));
  const double floor = 1e-14 * std::max(1.0, K1.trace());
  std::vector<Index> keep;
  for (Index i = 0; i < d; ++i)
    if (es.eigenvalues()(i) > floor) keep.push_back(i);
  DpcCheck r;
  if (!keep.empty()) {
    const Index k = static_cast<Index>(keep.size());
    MatrixXd L(d, k);
    for (Index j = 0; j < k; ++j) L.col(j) = es.eigenvectors().col(keep[j]) * std::sqrt(es.eigenvalues()(keep[j]));
    MatrixXd B = L.transpose() * (K1 + ch.Sigma1).llt().solve(MatrixXd::Identity(d, d));
    MatrixXd covT = B * K2 * B.transpose() + MatrixXd::Identity(k, k);
    MatrixXd cTY = B * K2 + L.transpose();
    MatrixXd covY = K2 + K1 + ch.Sigma1;
    MatrixXd condY = covT - cTY * covY.llt().solve(cTY.transpose());
    // I(T;Y1) - I(T;U2) = h(T|U2) - h(T|Y1), and Cov(T|U2) = I
    r.lhs = -0.5 * logdet(0.5 * (condY + condY.transpose()));
  }
  r.rhs = half_log_ratio(K1 + ch.Sigma1, ch.Sigma1);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

RegionPoint general_gauss_constants(const CovSplit& split, const GaussChannel& ch, GaussOrder order) {
  if (!split.general) fail(ErrorKind::InvalidArgument, "expected a three-layer split");
  validate(ch);
  validate(split, ch);
  const bool swap = order == GaussOrder::O12;
  // Roles: "a" is the user whose layer is coded last, "b" the other.
  const MatrixXd& Ka = swap ? split.K2 : split.K1;
  const MatrixXd& Sa = swap ? ch.Sigma2 : ch.Sigma1;
  const MatrixXd& Sb = swap ? ch.Sigma1 : ch.Sigma2;
  const MatrixXd& SZ = ch.SigmaZ;
  const MatrixXd T = split.K0 + split.K1 + split.K2;
  const MatrixXd P = split.K1 + split.K2;
  double mT = std::min(half_log_ratio(T + ch.Sigma1, P + ch.Sigma1), half_log_ratio(T + ch.Sigma2, P + ch.Sigma2));
  double mS = std::min(half_log_ratio(ch.S + ch.Sigma1, P + ch.Sigma1), half_log_ratio(ch.S + ch.Sigma2, P + ch.Sigma2));
  double ea = half_log_ratio(Ka + Sa, Sa);
  double eb = half_log_ratio(P + Sb, Ka + Sb);
  std::string pa = swap ? "Rp2" : "Rp1", sa = swap ? "Rs2" : "Rs1";
  std::string pb = swap ? "Rp1" : "Rp2", sb = swap ? "Rs1" : "Rs2";
  RegionPoint p;
  p.labels = {sa,
              sb,
              sa + "+" + sb,
              pa + "+" + sa,
              pb + "+" + sb,
              pa + "+" + sa + "+" + sb,
              sa + "+" + pb + "+" + sb,
              pa + "+" + sa + "+" + pb + "+" + sb};
  p.values = {mT + ea - half_log_ratio(T + SZ, P + SZ) - half_log_ratio(Ka + SZ, SZ),
              mT + eb - half_log_ratio(T + SZ, Ka + SZ),
              mT + eb + ea - half_log_ratio(T + SZ, SZ),
              mS + ea,
              mS + eb,
              mS + ea + eb - half_log_ratio(P + SZ, Ka + SZ),
              mS + eb + ea - half_log_ratio(Ka + SZ, SZ),
              mS + eb + ea};
  return p;
}

IneqSystem eval_general_gauss(const CovSplit& split, const GaussChannel& ch, GaussOrder order) {
  RegionPoint p = general_gauss_constants(split, ch, order);
  std::vector<std::vector<std::string>> rows;
  for (const auto& l : p.labels) {
    std::vector<std::string> r;
    std::size_t b = 0;
    while (b <= l.size()) {
      auto e = l.find('+', b);
      if (e == std::string::npos) e = l.size();
      r.push_back(l.substr(b, e - b));
      b = e + 1;
    }
    rows.push_back(r);
  }
  return rate_system(rows, p.values);
}

MatrixXd random_psd(int d, Rng& rng) {
  MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  return g * g.transpose() / static_cast<double>(d);
}

MatrixXd random_pd(int d, Rng& rng, double floor) {
  return random_psd(d, rng) + floor * MatrixXd::Identity(d, d);
}

MatrixXd random_below(const MatrixXd& S, Rng& rng) {
  int d = static_cast<int>(S.rows());
  MatrixXd Q = orthogonal(d, rng);
  Eigen::VectorXd lam(d);
  for (int i = 0; i < d; ++i) lam(i) = rng.uniform();
  MatrixXd R = sqrt_psd(S);
  MatrixXd K = R * Q * lam.asDiagonal() * Q.transpose() * R;
  return 0.5 * (K + K.transpose());
}

GaussChannel random_degraded_gauss(int d, Rng& rng) {
  GaussChannel ch;
  ch.S = random_pd(d, rng, 0.2);
  ch.Sigma1 = random_pd(d, rng, 0.1);
  ch.Sigma2 = ch.Sigma1 + (rng.uniform() < 0.1 ? MatrixXd::Zero(d, d) : random_psd(d, rng));
  ch.SigmaZ = ch.Sigma2 + (rng.uniform() < 0.1 ? MatrixXd::Zero(d, d) : random_psd(d, rng));
  return ch;
}

CovSplit random_triple(const MatrixXd& S, Rng& rng) {
  int d = static_cast<int>(S.rows());
  MatrixXd W[3];
  for (auto& w : W) w = random_psd(d, rng);
  MatrixXd sum = W[0] + W[1] + W[2];
  SelfAdjointEigenSolver<MatrixXd> es(sum, Eigen::EigenvaluesOnly);
  double scale = rng.uniform(0.3, 1.0) / std::max(1e-12, es.eigenvalues().maxCoeff());
  MatrixXd R = sqrt_psd(S);
  auto place = [&](const MatrixXd& w) {
    MatrixXd k = R * (scale * w) * R;
    return MatrixXd(0.5 * (k + k.transpose()));
  };
  return CovSplit::triple(place(W[0]), place(W[1]), place(W[2]));
}

CovSweepResult sweep_covariances(const GaussChannel& ch, const CovSweepConfig& cfg) {
  if (cfg.budget == 0) fail(ErrorKind::BudgetZero, "sweep budget must be at least 1");
  validate(ch);
  CovSweepResult out;
  out.vars = kRateVars;
  const int d = ch.dim();
  std::size_t total = cfg.mode == CovSweepMode::TraceP ? 2 * cfg.budget : cfg.budget;
  for (std::size_t i = 0; i < total; ++i) {
    CovSweepSample s;
    GaussChannel c = ch;
    if (i < cfg.budget) {
      Rng rng = Rng::stream(cfg.seed, i);
      s.K = i == 0 ? MatrixXd(0.5 * ch.S) : random_below(ch.S, rng);
    } else {
      // Random S on the trace shell, then a K below it.
      Rng rng = Rng::stream(cfg.seed ^ 0x5452414345ULL, i - cfg.budget);
      MatrixXd S = random_pd(d, rng, 0.05);
      S *= ch.S.trace() / S.trace();
      c.S = S;
      s.K = random_below(S, rng);
    }
    s.S = c.S;
    s.constants = gauss_constants(CovSplit::single(s.K), c);
    s.polytope = vertices(rate_system(degraded_rows(), s.constants.values), cfg.tol);
    for (const auto& v : s.polytope.vertices) out.cloud.push_back(v);
    out.samples.push_back(std::move(s));
  }
  out.hull = hull_extreme_points(out.cloud, cfg.tol);
  return out;
}

ScalarDiscretization discretize_scalar(const GaussChannel& ch, double K, double input_step, double output_step,
                                       double span) {
  validate(ch);
  if (ch.dim() != 1) fail(ErrorKind::DimensionMismatch, "scalar discretization needs a 1x1 channel");
  if (!check_degraded_order(ch)) fail(ErrorKind::NotDegraded, "need Sigma1 <= Sigma2 <= SigmaZ");
  double S = ch.S(0, 0), s1 = ch.Sigma1(0, 0), s2 = ch.Sigma2(0, 0), sz = ch.SigmaZ(0, 0);
  if (K < 0 || K > S) fail(ErrorKind::CapExceeded, "need 0 <= K <= S");
  if (!(input_step > 0) || !(output_step > 0) || !(span > 0))
    fail(ErrorKind::InvalidArgument, "steps and span must be positive");

  // Lattice Gaussian weights on k*h, |k*h| <= span*sigma.
  auto lattice = [&](double var) {
    std::vector<double> w;
    if (var <= 1e-14) return std::vector<double>{1.0};
    int n = static_cast<int>(std::floor(span * std::sqrt(var) / input_step));
    double tot = 0.0;
    for (int k = -n; k <= n; ++k) {
      double x = k * input_step;
      w.push_back(std::exp(-x * x / (2 * var)));
      tot += w.back();
    }
    for (auto& v : w) v /= tot;
    return w;
  };
  std::vector<double> wu = lattice(S - K), wp = lattice(K);
  int nu = static_cast<int>(wu.size()), np = static_cast<int>(wp.size());
  int hu = nu / 2, hp = np / 2, hx = hu + hp;
  int nx = 2 * hx + 1;
  std::vector<double> p(static_cast<std::size_t>(nu * nx), 0.0);
  for (int a = 0; a < nu; ++a)
    for (int b = 0; b < np; ++b) p[static_cast<std::size_t>(a * nx + (a - hu) + (b - hp) + hx)] = wu[a] * wp[b];
  ProbTable aux({{"U", static_cast<std::size_t>(nu)}, {"X", static_cast<std::size_t>(nx)}}, std::move(p));

  // Output bins shared by all three receivers.
  double half = span * std::sqrt(S + sz);
  int nb = static_cast<int>(std::ceil(half / output_step));
  int ny = 2 * nb + 1;
  auto centre = [&](int b) { return (b - nb) * output_step; };
  auto binned = [&](const std::vector<double>& from, double var) {
    Kernel k = Kernel::Zero(static_cast<Index>(from.size()), ny);
    if (var <= 1e-14) {
      for (std::size_t r = 0; r < from.size(); ++r) {
        int b = static_cast<int>(std::lround(from[r] / output_step)) + nb;
        k(static_cast<Index>(r), std::clamp(b, 0, ny - 1)) = 1.0;
      }
      return k;
    }
    boost::math::normal_distribution<double> nd(0.0, std::sqrt(var));
    for (std::size_t r = 0; r < from.size(); ++r) {
      double prev = 0.0;
      for (int b = 0; b < ny; ++b) {
        double upper = b == ny - 1 ? 1.0 : boost::math::cdf(nd, centre(b) + 0.5 * output_step - from[r]);
        k(static_cast<Index>(r), b) = std::max(0.0, upper - prev);
        prev = std::max(prev, upper);
      }
      k.row(static_cast<Index>(r)) /= k.row(static_cast<Index>(r)).sum();
    }
    return k;
  };
  std::vector<double> xs(static_cast<std::size_t>(nx)), ys(static_cast<std::size_t>(ny));
  for (int i = 0; i < nx; ++i) xs[static_cast<std::size_t>(i)] = (i - hx) * input_step;
  for (int b = 0; b < ny; ++b) ys[static_cast<std::size_t>(b)] = centre(b);
  std::array<Kernel, 3> stages = {binned(xs, s1), binned(ys, s2 - s1), binned(ys, sz - s2)};
  VarId x{"X", static_cast<std::size_t>(nx)};
  std::array<VarId, 3> outs{VarId{"Y1", static_cast<std::size_t>(ny)}, VarId{"Y2", static_cast<std::size_t>(ny)},
                            VarId{"Z", static_cast<std::size_t>(ny)}};
  return {make_degraded_aux(std::move(aux)), ChannelSpec::from_cascade(x, outs, stages)};
}

}  // namespace wtap
