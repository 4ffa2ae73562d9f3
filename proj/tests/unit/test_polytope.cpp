#include <gtest/gtest.h>

#include <algorithm>

#include "wtap/error.hpp"
#include "wtap/lp.hpp"
#include "wtap/polytope.hpp"
#include "wtap/regions_discrete.hpp"

using namespace wtap;

namespace {

IneqSystem sys_of(std::vector<std::string> vars, std::vector<LinIneq> rows) {
  IneqSystem s;
  for (auto& v : vars) s.add_var(v);
  for (auto& r : rows) s.add(std::move(r));
  return s;
}

IneqSystem unit_square() { return sys_of({"x", "y"}, {le({{"x", 1}}, 1.0), le({{"y", 1}}, 1.0)}); }

bool in(const IneqSystem& s, std::vector<double> p) {
  Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
  return contains(s, s.vars, x, 1e-9);
}

// Brute force: every square subset of the rows (with x >= 0 added) that is
// nonsingular gives a candidate point; keep the feasible ones.
std::vector<Eigen::VectorXd> active_set_vertices(const IneqSystem& s) {
  auto n = static_cast<Eigen::Index>(s.vars.size());
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (const auto& q : s.ineqs) {
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i) a(i) = to_double(q.coeff(s.vars[static_cast<std::size_t>(i)]));
    rows.push_back(a);
    rhs.push_back(q.value);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    rows.push_back(-Eigen::VectorXd::Unit(n, i));
    rhs.push_back(0);
  }
  std::vector<Eigen::VectorXd> out;
  std::vector<int> pick(rows.size(), 0);
  std::fill(pick.begin(), pick.begin() + n, 1);
  std::sort(pick.begin(), pick.end(), std::greater<>());
  do {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (pick[k]) {
        A.row(r) = rows[k].transpose();
        b(r++) = rhs[k];
      }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < n) continue;
    Eigen::VectorXd x = lu.solve(b);
    bool ok = true;
    for (std::size_t k = 0; k < rows.size() && ok; ++k) ok = rows[k].dot(x) <= rhs[k] + 1e-9;
    if (!ok) continue;
    if (std::none_of(out.begin(), out.end(), [&](const Eigen::VectorXd& y) { return (y - x).norm() < 1e-9; }))
      out.push_back(x);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

}  // namespace

TEST(FmEliminate, ProjectionMatchesSampling) {
  IneqSystem s = sys_of({"x", "y"}, {le({{"x", 1}, {"y", 1}}, 2.0), le({{"x", -1}}, 0.0), le({{"y", -1}}, 0.0),
                                     le({{"x", 1}, {"y", -1}}, 1.0)});
  IneqSystem p = fm_eliminate(s, "x");
  EXPECT_FALSE(p.has_var("x"));
  // oracle: y is feasible when some x on a fine grid satisfies all rows
  for (int i = 0; i < 200; ++i) {
    double y = -1.0 + 4.0 * i / 199.0;
    bool want = false;
    for (int k = 0; k <= 3000 && !want; ++k) {
      double x = 3.0 * k / 3000.0;
      want = x + y <= 2 + 1e-12 && x - y <= 1 + 1e-12 && y >= 0;
    }
    EXPECT_EQ(in(p, {y}), want) << "y = " << y;
  }
}

TEST(FmEliminate, AbsentVariableIsNoOp) {
  IneqSystem s = unit_square();
  IneqSystem p = fm_eliminate(s, "z");
  EXPECT_EQ(p.ineqs.size(), s.ineqs.size());
  EXPECT_TRUE(region_equal(s, p));
}

TEST(FmEliminate, ProjectionContainsShadow) {
  // property: the shadow of every feasible point lies in the projection
  IneqSystem s = sys_of({"a", "b", "c"}, {le({{"a", 1}, {"b", 2}, {"c", 1}}, 3.0), le({{"a", 1}, {"c", -1}}, 0.5),
                                          le({{"b", 1}, {"c", 1}}, 2.0)});
  IneqSystem p = fm_eliminate(s, "c");
  for (double a = 0; a <= 3; a += 0.25)
    for (double b = 0; b <= 2; b += 0.25)
      for (double c = 0; c <= 2; c += 0.25)
        if (in(s, {a, b, c})) EXPECT_TRUE(in(p, {a, b}));
}

TEST(SubstituteEquality, FixesOneVariable) {
  IneqSystem s = sys_of({"x", "y"}, {le({{"x", 1}, {"y", 1}}, 3.0)});
  LinIneq e = le({{"x", 1}}, 1.0);
  e.rel = Rel::Eq;
  IneqSystem r = substitute_equality(s, e, "x");
  EXPECT_TRUE(region_equal(r, sys_of({"y"}, {le({{"y", 1}}, 2.0)})));
}

TEST(SubstituteEquality, AbsentVariableIsNoOp) {
  IneqSystem s = unit_square();
  LinIneq e = le({{"z", 1}}, 1.0);
  e.rel = Rel::Eq;
  EXPECT_TRUE(region_equal(substitute_equality(s, e, "z"), s));
}

TEST(RateTransfer, ZeroTransferKeepsOriginal) {
  IneqSystem s = sys_of({"Rp", "Rs"}, {le({{"Rp", 1}, {"Rs", 1}}, 1.0), le({{"Rs", 1}}, 0.4)});
  IneqSystem t = fm_eliminate(apply_rate_transfer(s, {{"Rs", "Rp", "t"}}), "t");
  EXPECT_TRUE(contains(t, vertices(s), 1e-9));
}

TEST(RateTransfer, SingleTransferIntoNewRate) {
  IneqSystem s = sys_of({"Rs"}, {le({{"Rs", 1}}, 0.7)});
  IneqSystem t = fm_eliminate(apply_rate_transfer(s, {{"Rs", "Rp", "t"}}), "t");
  IneqSystem want = sys_of({"Rp", "Rs"}, {le({{"Rp", 1}, {"Rs", 1}}, 0.7), le({{"Rs", 1}}, 0.7)});
  EXPECT_TRUE(region_equal(t, want));
  // oracle: a point is reachable when moving some of Rs onto Rp stays feasible
  for (double rp = 0; rp <= 1; rp += 0.05)
    for (double rs = 0; rs <= 1; rs += 0.05) EXPECT_EQ(in(t, {rp, rs}), rp + rs <= 0.7 + 1e-9);
}

TEST(Vertices, UnitSquare) { EXPECT_EQ(vertices(unit_square()).vertices.size(), 4u); }

TEST(Vertices, Simplex) {
  IneqSystem s = sys_of({"x", "y", "z"}, {le({{"x", 1}, {"y", 1}, {"z", 1}}, 1.0)});
  EXPECT_EQ(vertices(s).vertices.size(), 4u);
}

TEST(Vertices, DegradedInstanceMatchesActiveSets) {
  // I(U;Y2)=0.3, I(U;Z)=0.1, I(X;Y1|U)=0.5, I(X;Z)=0.25, I(X;Z|U)=0.15
  IneqSystem s = rate_system(degraded_rows(), {0.2, 0.55, 0.3, 0.65, 0.8});
  VPolytope p = vertices(s);
  auto want = active_set_vertices(s);
  ASSERT_EQ(p.vertices.size(), want.size());
  for (const auto& w : want)
    EXPECT_TRUE(std::any_of(p.vertices.begin(), p.vertices.end(), [&](const Eigen::VectorXd& v) { return (v - w).norm() < 1e-9; }));
}

TEST(RegionEqual, Basics) {
  IneqSystem sq = unit_square();
  EXPECT_TRUE(region_equal(sq, sq));
  IneqSystem extra = sq;
  extra.add(le({{"x", 1}, {"y", 1}}, 5.0));
  EXPECT_TRUE(region_equal(sq, extra));
  IneqSystem tri = sys_of({"x", "y"}, {le({{"x", 1}, {"y", 1}}, 1.0)});
  EXPECT_FALSE(region_equal(sq, tri));
}

TEST(RemoveRedundant, KeepsRegion) {
  IneqSystem s = unit_square();
  s.add(le({{"x", 1}, {"y", 1}}, 5.0));
  s.add(le({{"x", 2}}, 4.0));
  IneqSystem r = remove_redundant(s);
  EXPECT_EQ(r.ineqs.size(), 2u);
  EXPECT_TRUE(region_equal(r, s));
}

TEST(Lp, SmallProblem) {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6
  Eigen::MatrixXd A(2, 2);
  A << 1, 2, 3, 1;
  LpResult r = lp_maximize(Eigen::Vector2d(1, 1), A, Eigen::Vector2d(4, 6));
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.value, 2.8, 1e-12);
}

TEST(Lp, InfeasibleAndUnbounded) {
  Eigen::MatrixXd A(1, 1);
  A << 1;
  Eigen::MatrixXd Aeq(1, 1);
  Aeq << 1;
  EXPECT_EQ(lp_maximize(Eigen::VectorXd::Ones(1), A, Eigen::VectorXd::Ones(1), Aeq, Eigen::VectorXd::Constant(1, 2)).status,
            LpStatus::Infeasible);
  Eigen::MatrixXd B(1, 2);
  B << 1, -1;
  EXPECT_EQ(lp_maximize(Eigen::Vector2d(1, 1), B, Eigen::VectorXd::Ones(1)).status, LpStatus::Unbounded);
}
