#include "wtap/sweep.hpp"

#include <algorithm>

#include "wtap/error.hpp"
#include "wtap/lp.hpp"
#include "wtap/text_doc.hpp"

namespace wtap {

namespace {

ProbTable degraded_sample(std::size_t cu, std::size_t cx, std::size_t index, Rng& rng) {
  std::vector<VarId> vars = {{"U", cu}, {"X", cx}};
  std::vector<double> p(cu * cx, 0.0);
  if (index == 0) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(cu * cx));
  } else if (index == 1) {
    for (std::size_t x = 0; x < cx; ++x) p[(x % cu) * cx + x] = 1.0 / static_cast<double>(cx);
  } else if (index == 2) {
    for (std::size_t x = 0; x < cx; ++x) p[x] = 1.0 / static_cast<double>(cx);
  } else {
    p = rng.dirichlet(cu * cx);
  }
  return ProbTable(std::move(vars), std::move(p));
}

ProbTable general_sample(std::size_t cq, std::size_t cu, std::size_t cv, std::size_t cx, std::size_t index,
                         Rng& rng) {
  std::vector<VarId> vars = {{"Q", cq}, {"U", cu}, {"V1", cv}, {"V2", cv}, {"X", cx}};
  if (index == 0) {
    double n = static_cast<double>(cell_count(vars));
    return ProbTable::from_function(vars, [n](const std::vector<std::size_t>&) { return 1.0 / n; });
  }
  if (index == 1) {
    // Q constant and every layer a copy of X.
    double w = 1.0 / static_cast<double>(cx);
    return ProbTable::from_function(vars, [&](const std::vector<std::size_t>& i) {
      std::size_t x = i[4];
      bool hit = i[0] == 0 && i[1] == x % cu && i[2] == x % cv && i[3] == x % cv;
      return hit ? w : 0.0;
    });
  }
  std::vector<double> qu = rng.dirichlet(cq * cu);
  std::vector<std::vector<double>> rest(cu);
  for (auto& r : rest) r = rng.dirichlet(cv * cv * cx);
  return ProbTable::from_function(vars, [&](const std::vector<std::size_t>& i) {
    return qu[i[0] * cu + i[1]] * rest[i[1]][(i[2] * cv + i[3]) * cx + i[4]];
  });
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t aux_hash(const ProbTable& t) {
  std::string s;
  for (const auto& v : t.vars()) s += v.name + ":" + std::to_string(v.card) + ";";
  for (double p : t.probs()) s += format_exact(p) + ",";
  return fnv1a(s);
}

AuxJoint sweep_aux(const ChannelSpec& ch, const SweepConfig& cfg, std::size_t index) {
  std::size_t cx = ch.input().card;
  std::size_t cu = cfg.card_u ? cfg.card_u : cx + 3;
  std::size_t cv = cfg.card_v ? cfg.card_v : cx + 1;
  Rng rng = Rng::stream(cfg.seed, index);
  ProbTable t;
  AuxJoint aux;
  if (cfg.region == SweepRegion::GeneralInner) {
    aux = {general_sample(cfg.card_q, cu, cv, cx, index, rng), AuxJoint::Kind::General};
  } else {
    aux = {degraded_sample(cu, cx, index, rng), AuxJoint::Kind::Degraded};
  }
  // Rename the input column to match the channel.
  if (ch.input().name != "X") {
    auto vars = aux.table.vars();
    for (auto& v : vars)
      if (v.name == "X") v.name = ch.input().name;
    aux.table = ProbTable(vars, aux.table.probs());
  }
  return aux;
}

bool hull_contains(const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& x, double tol) {
  if (pts.empty()) return false;
  const auto n = static_cast<Eigen::Index>(pts.size());
  const auto d = x.size();
  Eigen::MatrixXd A(2 * d, n);
  Eigen::VectorXd b(2 * d);
  for (Eigen::Index j = 0; j < n; ++j) {
    A.block(0, j, d, 1) = pts[static_cast<std::size_t>(j)];
    A.block(d, j, d, 1) = -pts[static_cast<std::size_t>(j)];
  }
  b << x.array() + tol, -x.array() + tol;
  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Ones(1, n);
  Eigen::VectorXd beq = Eigen::VectorXd::Ones(1);
  return lp_maximize(Eigen::VectorXd::Zero(n), A, b, Aeq, beq).status == LpStatus::Optimal;
}

std::vector<Eigen::VectorXd> hull_extreme_points(const std::vector<Eigen::VectorXd>& pts, double tol) {
  std::vector<Eigen::VectorXd> uniq;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : uniq) dup = dup || (p - q).cwiseAbs().maxCoeff() <= tol;
    if (!dup) uniq.push_back(p);
  }
  // Grow a candidate set, then drop candidates the others already span.
  std::vector<Eigen::VectorXd> h;
  for (const auto& p : uniq)
    if (!hull_contains(h, p, tol)) h.push_back(p);
  for (std::size_t i = 0; i < h.size();) {
    std::vector<Eigen::VectorXd> rest;
    for (std::size_t j = 0; j < h.size(); ++j)
      if (j != i) rest.push_back(h[j]);
    if (hull_contains(rest, h[i], tol))
      h.erase(h.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  std::sort(h.begin(), h.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return h;
}

SweepResult sweep_inner_region(const ChannelSpec& ch, const SweepConfig& cfg) {
  if (cfg.budget == 0) fail(ErrorKind::BudgetZero, "sweep budget must be at least 1");
  SweepResult out;
  out.vars = kRateVars;
  for (std::size_t i = 0; i < cfg.budget; ++i) {
    SweepSample s;
    AuxJoint aux = sweep_aux(ch, cfg, i);
    s.aux_hash = aux_hash(aux.table);
    IneqSystem sys;
    switch (cfg.region) {
      case SweepRegion::DegradedInner:
        s.constants = degraded_constants(aux, ch);
        sys = eval_degraded_inner(aux, ch);
        break;
      case SweepRegion::DegradedOuter:
        s.constants = degraded_constants(aux, ch);
        sys = eval_degraded_outer(aux, ch);
        break;
      case SweepRegion::GeneralInner:
        s.constants = general_constants(aux, ch);
        sys = eval_general_inner(aux, ch);
        break;
    }
    s.polytope = vertices(sys, cfg.tol);
    for (const auto& v : s.polytope.vertices) out.cloud.push_back(v);
    out.samples.push_back(std::move(s));
  }
  out.hull = hull_extreme_points(out.cloud, cfg.tol);
  return out;
}

}  // namespace wtap
