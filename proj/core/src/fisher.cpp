#include "wtap/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "wtap/error.hpp"

namespace wtap {

namespace {

using Eigen::Index;
using Eigen::VectorXd;
constexpr double kTwoPiE = 2.0 * M_PI * M_E;

std::vector<int> range(int from, int n) {
  std::vector<int> r(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = from + i;
  return r;
}

MatrixXd block(const MatrixXd& m, const std::vector<int>& r, const std::vector<int>& c) {
  MatrixXd out(static_cast<Index>(r.size()), static_cast<Index>(c.size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = m(r[i], c[j]);
  return out;
}

// Cov(A|C) by Schur complement; C must be nonsingular here.
MatrixXd schur(const MatrixXd& cov, const std::vector<int>& a, const std::vector<int>& c) {
  MatrixXd aa = block(cov, a, a);
  if (c.empty()) return aa;
  MatrixXd ac = block(cov, a, c);
  Eigen::LLT<MatrixXd> llt(block(cov, c, c));
  if (llt.info() != Eigen::Success) fail(ErrorKind::SingularConditionalCovariance, "conditioning block is singular");
  return aa - ac * llt.solve(ac.transpose());
}

MatrixXd inverse_pd(const MatrixXd& m) {
  Eigen::LLT<MatrixXd> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) fail(ErrorKind::SingularMatrix, "matrix is not positive definite");
  return llt.solve(MatrixXd::Identity(m.rows(), m.cols()));
}

// Conditional components of a scalar mixture: per label, mass and atoms.
struct Component {
  double mass = 0;
  std::vector<double> x, a;  // atoms and conditional weights
};

std::vector<Component> components(const ScalarMixture& m) {
  std::map<int, Component> by;
  for (std::size_t k = 0; k < m.x.size(); ++k) {
    if (m.w[k] <= 0) continue;
    auto& c = by[m.u[k]];
    c.mass += m.w[k];
    c.x.push_back(m.x[k]);
    c.a.push_back(m.w[k]);
  }
  std::vector<Component> out;
  for (auto& [_, c] : by) {
    for (double& a : c.a) a /= c.mass;
    out.push_back(std::move(c));
  }
  return out;
}

// log density of sum_k a_k N(x_k, var) at y, and the score d/dy log f.
std::pair<double, double> log_density_score(const Component& c, double var, double y) {
  double mx = -std::numeric_limits<double>::infinity();
  thread_local std::vector<double> e;
  e.resize(c.x.size());
  for (std::size_t k = 0; k < c.x.size(); ++k) {
    double d = y - c.x[k];
    e[k] = std::log(c.a[k]) - d * d / (2 * var);
    mx = std::max(mx, e[k]);
  }
  double s = 0, sc = 0;
  for (std::size_t k = 0; k < c.x.size(); ++k) {
    double r = std::exp(e[k] - mx);
    s += r;
    sc += r * (c.x[k] - y);
  }
  return {mx + std::log(s) - 0.5 * std::log(2 * M_PI * var), sc / (s * var)};
}

// Integral over the real line of g(y) for a smooth integrand that is
// negligible beyond 10 standard deviations of every atom.
template <class F>
double integrate(const Component& c, double var, F g) {
  double sd = std::sqrt(var);
  double lo = *std::min_element(c.x.begin(), c.x.end()) - 10 * sd;
  double hi = *std::max_element(c.x.begin(), c.x.end()) + 10 * sd;
  int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / sd)));
  double w = (hi - lo) / panels, total = 0;
  for (int p = 0; p < panels; ++p) {
    double err = 0, l1 = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, lo + p * w, lo + (p + 1) * w, 6,
                                                                              1e-13, &err, &l1);
    if (err > kQuadTol * std::max(1.0, l1))
      fail(ErrorKind::QuadratureNonConvergent, "quadrature error " + std::to_string(err));
    total += v;
  }
  return total;
}

double component_entropy(const Component& c, double var) {
  return integrate(c, var, [&](double y) {
    double lf = log_density_score(c, var, y).first;
    return -std::exp(lf) * lf;
  });
}

double component_fisher(const Component& c, double var) {
  return integrate(c, var, [&](double y) {
    auto [lf, s] = log_density_score(c, var, y);
    return std::exp(lf) * s * s;
  });
}

void require_var(double var) {
  if (!(var > 0) || !std::isfinite(var)) fail(ErrorKind::InvalidArgument, "noise variance must be positive");
}

DeBruijnResult finish(double r, double rh) {
  DeBruijnResult out{r, rh, rh > 0 ? r / rh : std::numeric_limits<double>::infinity()};
  // Halving should shrink a truncation-dominated residual; if it grows,
  // the step is too coarse for the curvature.
  if (r > 1e-6 && rh > r) fail(ErrorKind::StepTooLarge, "central difference does not converge under halving");
  return out;
}

double gaussian_residual(const GaussPair& p, const MatrixXd& SigmaN, double eps) {
  MatrixXd J = gaussian_fisher(p, SigmaN);
  double worst = 0;
  for (int i = 0; i < p.dx; ++i)
    for (int j = i; j < p.dx; ++j) {
      MatrixXd E = MatrixXd::Zero(p.dx, p.dx);
      E(i, j) += 1;
      if (i != j) E(j, i) += 1;
      MatrixXd lo = SigmaN - eps * E;
      if (min_eigenvalue(lo) <= 0) fail(ErrorKind::StepTooLarge, "perturbed noise covariance is not positive");
      double fd = (gaussian_cond_entropy(p, SigmaN + eps * E) - gaussian_cond_entropy(p, lo)) / (2 * eps);
      double expect = i == j ? 0.5 * J(i, i) : J(i, j);
      worst = std::max(worst, std::abs(fd - expect));
    }
  return worst;
}

double mixture_residual(const ScalarMixture& m, double var, double eps) {
  if (eps >= var) fail(ErrorKind::StepTooLarge, "step exceeds the noise variance");
  double fd = (mixture_cond_entropy(m, var + eps) - mixture_cond_entropy(m, var - eps)) / (2 * eps);
  return std::abs(fd - 0.5 * mixture_cond_fisher(m, var));
}

template <class G>
double bisect(G g, double lo, double hi, double tol) {
  double glo = g(lo);
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi), gm = g(mid);
    if ((gm <= 0) == (glo <= 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TStar solve_t(double a, double b, double s2, double sz, double target, double S) {
  auto f = [&](double t) {
    double K1 = (1 - t) * a + t * b;
    return 0.5 * std::log((K1 + sz) / (K1 + s2)) - target;
  };
  double g0 = f(0), g1 = f(1);
  TStar out;
  constexpr double flat = 1e-12;
  if (std::abs(g0) <= flat) out.t = 0;
  else if (std::abs(g1) <= flat) out.t = 1;
  else if ((g0 < 0) == (g1 < 0)) fail(ErrorKind::NoRoot, "no sign change on [0, 1]");
  else out.t = bisect(f, 0.0, 1.0, 1e-10);
  out.K1 = (1 - out.t) * a + out.t * b;
  out.lower = b;
  out.S = S;
  out.order_ok = out.K1 >= b - 1e-8 && out.K1 <= S + 1e-8;
  return out;
}

}  // namespace

MatrixXd conditional_cov_x(const GaussPair& p) {
  if (p.cov.rows() != p.du + p.dx || p.cov.cols() != p.du + p.dx)
    fail(ErrorKind::DimensionMismatch, "pair covariance has the wrong size");
  return schur(p.cov, range(p.du, p.dx), range(0, p.du));
}

MatrixXd gaussian_fisher(const GaussPair& p, const MatrixXd& SigmaN) {
  MatrixXd c = conditional_cov_x(p) + SigmaN;
  Eigen::LLT<MatrixXd> llt(0.5 * (c + c.transpose()));
  if (llt.info() != Eigen::Success) fail(ErrorKind::SingularConditionalCovariance, "Cov(X+N|U) is singular");
  return llt.solve(MatrixXd::Identity(c.rows(), c.cols()));
}

double gaussian_cond_entropy(const GaussPair& p, const MatrixXd& SigmaN) {
  MatrixXd c = conditional_cov_x(p) + SigmaN;
  return 0.5 * (p.dx * std::log(kTwoPiE) + logdet(c));
}

void ScalarMixture::validate() const {
  if (x.empty() || x.size() != w.size() || x.size() != u.size())
    fail(ErrorKind::ShapeMismatch, "mixture needs matching u, x, w");
  double s = 0;
  for (double v : w) {
    if (v < 0) fail(ErrorKind::NegativeMass, "negative mixture weight");
    s += v;
  }
  if (std::abs(s - 1) > 1e-9) fail(ErrorKind::NotNormalized, "mixture weights sum to " + std::to_string(s));
  if (!(s1 > 0 && s2 > 0 && sz > 0)) fail(ErrorKind::InvalidArgument, "noise variances must be positive");
}

double ScalarMixture::second_moment() const {
  double m = 0;
  for (std::size_t k = 0; k < x.size(); ++k) m += w[k] * x[k] * x[k];
  return m;
}

double ScalarMixture::conditional_variance() const {
  double v = 0;
  for (const auto& c : components(*this)) {
    double mu = 0, m2 = 0;
    for (std::size_t k = 0; k < c.x.size(); ++k) {
      mu += c.a[k] * c.x[k];
      m2 += c.a[k] * c.x[k] * c.x[k];
    }
    v += c.mass * (m2 - mu * mu);
  }
  return v;
}

double mixture_entropy(const ScalarMixture& m, double var) {
  require_var(var);
  Component all;
  all.mass = 1;
  for (std::size_t k = 0; k < m.x.size(); ++k)
    if (m.w[k] > 0) {
      all.x.push_back(m.x[k]);
      all.a.push_back(m.w[k]);
    }
  return component_entropy(all, var);
}

double mixture_cond_entropy(const ScalarMixture& m, double var) {
  require_var(var);
  double h = 0;
  for (const auto& c : components(m)) h += c.mass * component_entropy(c, var);
  return h;
}

double mixture_cond_fisher(const ScalarMixture& m, double var) {
  require_var(var);
  double j = 0;
  for (const auto& c : components(m)) j += c.mass * component_fisher(c, var);
  return j;
}

DeBruijnResult debruijn_check(const GaussPair& p, const MatrixXd& SigmaN, double step) {
  if (!(step > 0)) fail(ErrorKind::InvalidArgument, "step must be positive");
  double scale = std::max(1e-12, SigmaN.trace() / std::max(1, p.dx));
  return finish(gaussian_residual(p, SigmaN, step * scale), gaussian_residual(p, SigmaN, 0.5 * step * scale));
}

DeBruijnResult debruijn_check(const ScalarMixture& m, double var, double step) {
  if (!(step > 0)) fail(ErrorKind::InvalidArgument, "step must be positive");
  m.validate();
  require_var(var);
  return finish(mixture_residual(m, var, step * var), mixture_residual(m, var, 0.5 * step * var));
}

double LemmaReport::min_slack(const std::string& lemma) const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& r : rows)
    if (r.lemma == lemma) s = std::min(s, r.slack);
  return s;
}

bool LemmaReport::pass(double tol) const {
  return std::all_of(rows.begin(), rows.end(), [tol](const LemmaSlack& r) { return r.slack >= -tol; });
}

LemmaReport lemma_suite_check(std::size_t count, std::uint64_t seed) {
  LemmaReport rep;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = Rng::stream(seed, i);
    int d = 1 + static_cast<int>(i % 3);
    auto push = [&](const char* l, double s) { rep.rows.push_back({l, i, d, s}); };

    // Cramer-Rao, conditional: J(X+N|U) - Cov(X+N|U)^-1 >= 0. The covariance
    // side is read off the joint (U, X+N) matrix.
    GaussPair p = random_gauss_pair(d, d, rng);
    MatrixXd SN = random_pd(d, rng, 0.1);
    MatrixXd joint = p.cov;
    joint.bottomRightCorner(d, d) += SN;
    MatrixXd cxn = schur(joint, range(d, d), range(0, d));
    push("6", min_eigenvalue(gaussian_fisher(p, SN) - inverse_pd(cxn)));

    // J^-1(U+V2|T) - S2 >= J^-1(U+V1|T) - S1 when S1 <= S2.
    MatrixXd S1 = random_pd(d, rng, 0.05);
    MatrixXd S2 = S1 + random_psd(d, rng);
    push("7", min_eigenvalue((inverse_pd(gaussian_fisher(p, S2)) - S2) - (inverse_pd(gaussian_fisher(p, S1)) - S1)));

    // U -> V -> X: J(X|V) >= J(X|U).
    {
      MatrixXd A = MatrixXd::NullaryExpr(d, d, [&] { return rng.normal(); });
      MatrixXd B = MatrixXd::NullaryExpr(d, d, [&] { return rng.normal(); });
      MatrixXd CU = random_pd(d, rng, 0.1), W1 = random_pd(d, rng, 0.1), W2 = random_pd(d, rng, 0.1);
      MatrixXd CV = A * CU * A.transpose() + W1;
      MatrixXd cov(3 * d, 3 * d);
      cov.block(0, 0, d, d) = CU;
      cov.block(d, d, d, d) = CV;
      cov.block(2 * d, 2 * d, d, d) = B * CV * B.transpose() + W2;
      cov.block(d, 0, d, d) = A * CU;
      cov.block(2 * d, 0, d, d) = B * A * CU;
      cov.block(2 * d, d, d, d) = B * CV;
      cov.block(0, d, d, d) = cov.block(d, 0, d, d).transpose();
      cov.block(0, 2 * d, d, d) = cov.block(2 * d, 0, d, d).transpose();
      cov.block(d, 2 * d, d, d) = cov.block(2 * d, d, d, d).transpose();
      MatrixXd jv = inverse_pd(schur(cov, range(2 * d, d), range(d, d)));
      MatrixXd ju = inverse_pd(schur(cov, range(2 * d, d), range(0, d)));
      push("8", min_eigenvalue(jv - ju));
    }

    // Line integral of tr(f(K) dK) with f(K) = (K + Sigma)^-1 >= 0 between
    // ordered endpoints.
    {
      MatrixXd K1 = random_psd(d, rng), K2 = K1 + random_psd(d, rng), Sg = random_pd(d, rng, 0.1);
      MatrixXd dK = K2 - K1;
      double err = 0;
      double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double t) { return (inverse_pd(K1 + t * dK + Sg) * dK).trace(); }, 0.0, 1.0, 8, 1e-13, &err);
      push("9", v);
    }

    // h(X+N|U) >= 0.5 log|2 pi e J^-1|.
    push("11", gaussian_cond_entropy(p, SN) - 0.5 * (d * std::log(kTwoPiE) - logdet(gaussian_fisher(p, SN))));

    {
      MatrixXd A = random_pd(d, rng, 0.1), B = A + random_psd(d, rng);
      push("12", min_eigenvalue(inverse_pd(A) - inverse_pd(B)));
    }

    if (d != 1) continue;
    // Scalar mixtures give strict gaps where Gaussians are tight.
    ScalarMixture m = random_mixture(rng);
    double var = m.s1;
    double J = mixture_cond_fisher(m, var);
    push("6", J - 1.0 / (m.conditional_variance() + var));
    push("7", (1.0 / mixture_cond_fisher(m, m.s2) - m.s2) - (1.0 / J - m.s1));
    {
      double err = 0;
      double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          [&](double s) { return 0.5 * mixture_cond_fisher(m, s); }, m.s1, m.s2, 3, 1e-10, &err);
      push("9", v);
    }
    push("11", mixture_cond_entropy(m, var) - 0.5 * std::log(kTwoPiE / J));
  }
  return rep;
}

TStar interpolation_t_star(const ScalarMixture& m, double S) {
  m.validate();
  if (!(m.s2 <= m.sz)) fail(ErrorKind::NotDegraded, "need s2 <= sz");
  if (S < 0) S = m.second_moment();
  double a = 1.0 / mixture_cond_fisher(m, m.sz) - m.sz;
  double b = 1.0 / mixture_cond_fisher(m, m.s2) - m.s2;
  double target = mixture_cond_entropy(m, m.sz) - mixture_cond_entropy(m, m.s2);
  return solve_t(a, b, m.s2, m.sz, target, S);
}

TStar interpolation_t_star(const GaussPair& p, double s2, double sz, double S) {
  if (p.dx != 1) fail(ErrorKind::DimensionMismatch, "interpolation is scalar");
  if (!(s2 > 0 && s2 <= sz)) fail(ErrorKind::NotDegraded, "need 0 < s2 <= sz");
  MatrixXd n2 = MatrixXd::Constant(1, 1, s2), nz = MatrixXd::Constant(1, 1, sz);
  double a = 1.0 / gaussian_fisher(p, nz)(0, 0) - sz;
  double b = 1.0 / gaussian_fisher(p, n2)(0, 0) - s2;
  double target = gaussian_cond_entropy(p, nz) - gaussian_cond_entropy(p, n2);
  return solve_t(a, b, s2, sz, target, S);
}

std::vector<double> mixture_degraded_constants(const ScalarMixture& m) {
  m.validate();
  double hY2 = mixture_entropy(m, m.s2), hY2U = mixture_cond_entropy(m, m.s2);
  double hY1U = mixture_cond_entropy(m, m.s1);
  double hZ = mixture_entropy(m, m.sz), hZU = mixture_cond_entropy(m, m.sz);
  double hNZ = 0.5 * std::log(kTwoPiE * m.sz), hN1 = 0.5 * std::log(kTwoPiE * m.s1);
  double iUY2 = hY2 - hY2U, iXY1U = hY1U - hN1, iUZ = hZ - hZU, iXZ = hZ - hNZ, iXZU = hZU - hNZ;
  return {iUY2 - iUZ, iUY2 + iXY1U - iXZ, iUY2, iUY2 + iXY1U - iXZU, iUY2 + iXY1U};
}

EvidenceReport sufficiency_evidence_scalar(const ScalarMixture& m, double S, double tol, std::size_t grid) {
  m.validate();
  if (grid < 2) fail(ErrorKind::InvalidArgument, "grid needs at least two points");
  if (S < 0) S = m.second_moment();
  if (S < m.second_moment() - 1e-12) fail(ErrorKind::CapExceeded, "mixture power exceeds S");
  GaussChannel ch;
  auto scal = [](double v) { return MatrixXd::Constant(1, 1, v); };
  ch.S = scal(S);
  ch.Sigma1 = scal(m.s1);
  ch.Sigma2 = scal(m.s2);
  ch.SigmaZ = scal(m.sz);

  EvidenceReport rep;
  rep.mixture = mixture_degraded_constants(m);
  auto excess = [&](double K) {
    auto g = gauss_constants(CovSplit::single(scal(std::clamp(K, 0.0, S))), ch).values;
    double w = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) w = std::max(w, rep.mixture[i] - g[i]);
    return w;
  };
  double bestK = 0, best = std::numeric_limits<double>::infinity();
  double h = S / static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < grid; ++i) {
    double K = static_cast<double>(i) * h, e = excess(K);
    if (e < best) {
      best = e;
      bestK = K;
    }
  }
  auto [k2, e2] = boost::math::tools::brent_find_minima(excess, std::max(0.0, bestK - h), std::min(S, bestK + h), 40);
  if (e2 < best) {
    best = e2;
    bestK = k2;
  }
  auto gp = gauss_constants(CovSplit::single(scal(bestK)), ch);
  rep.labels = gp.labels;
  rep.gaussian = gp.values;
  rep.best_K = bestK;
  rep.slack = best;
  rep.dominated = best <= tol;
  return rep;
}

ScalarMixture random_mixture(Rng& rng, double S) {
  ScalarMixture m;
  std::size_t labels = 1 + rng.index(3);
  for (std::size_t l = 0; l < labels; ++l) {
    std::size_t atoms = 1 + rng.index(3);
    for (std::size_t a = 0; a < atoms; ++a) {
      m.u.push_back(static_cast<int>(l));
      m.x.push_back(rng.normal());
    }
  }
  m.w = rng.dirichlet(m.x.size());
  double p = m.second_moment();
  double target = S * rng.uniform(0.5, 1.0);
  if (p > 0)
    for (double& v : m.x) v *= std::sqrt(target / p);
  m.s1 = rng.uniform(0.1, 1.0);
  m.s2 = m.s1 + rng.uniform(0.0, 1.0);
  m.sz = m.s2 + rng.uniform(0.0, 1.0);
  return m;
}

GaussPair random_gauss_pair(int du, int dx, Rng& rng) {
  return {random_pd(du + dx, rng, 0.1), du, dx};
}

}  // namespace wtap
