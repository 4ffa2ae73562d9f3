#include <gtest/gtest.h>

#include "oracle.hpp"
#include "wtap/entropy_algebra.hpp"
#include "wtap/error.hpp"
#include "wtap/factorization.hpp"

using namespace wtap;

namespace {

InfoExpr H(VarSet s) { return InfoExpr::entropy(s); }

std::map<std::string, std::size_t> binary(const Factorization& f) {
  std::map<std::string, std::size_t> c;
  for (const auto& n : f.nodes) c[n] = 2;
  return c;
}

oracle::Joint to_oracle(const ProbTable& t) {
  oracle::Joint j;
  const auto& vars = t.vars();
  std::vector<int> idx(vars.size(), 0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    j.add(idx, t.probs()[k]);
    for (std::size_t i = vars.size(); i-- > 0;) {
      if (++idx[i] < static_cast<int>(vars[i].card)) break;
      idx[i] = 0;
    }
  }
  return j;
}

std::vector<int> positions(const ProbTable& t, const VarSet& names) {
  std::vector<int> out;
  for (const auto& n : names) out.push_back(static_cast<int>(t.position(n)));
  return out;
}

}  // namespace

TEST(ExpandMi, Unconditional) { EXPECT_EQ(expand_mi({"U"}, {"Z"}), H({"U"}) + H({"Z"}) - H({"U", "Z"})); }

TEST(ExpandMi, Conditional) {
  EXPECT_EQ(expand_mi({"U"}, {"Y2"}, {"Q"}), H({"U", "Q"}) + H({"Y2", "Q"}) - H({"U", "Y2", "Q"}) - H({"Q"}));
}

TEST(ExpandMi, OverlapRejected) {
  try {
    expand_mi({"A"}, {"A"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OverlappingSets);
  }
}

TEST(DeriveEqualities, ThreeNodeChain) {
  Factorization f;
  f.name = "chain";
  f.nodes = {"Q", "U", "X"};
  f.parents = {{"Q", {}}, {"U", {"Q"}}, {"X", {"U"}}};
  EqualitySet eqs = derive_equalities(f);
  EXPECT_TRUE(eqs.in_span(expand_mi({"Q"}, {"X"}, {"U"})));
  EXPECT_FALSE(eqs.in_span(expand_mi({"Q"}, {"X"})));
}

TEST(DeriveEqualities, GeneralStructure) {
  EqualitySet eqs = derive_equalities(general_structure());
  EXPECT_TRUE(eqs.in_span(expand_mi({"Q"}, {"V1", "V2", "X", "Y1", "Y2", "Z"}, {"U"})));
  EXPECT_TRUE(eqs.in_span(expand_mi({"U", "V1", "V2", "Q"}, {"Y1", "Y2", "Z"}, {"X"})));
}

TEST(ExprsEqual, ChainRuleNeedsNoEqualities) {
  EqualitySet none;
  EXPECT_TRUE(exprs_equal(expand_mi({"U", "V1"}, {"Z"}, {"Q"}),
                          expand_mi({"U"}, {"Z"}, {"Q"}) + expand_mi({"V1"}, {"Z"}, {"U", "Q"}), none));
}

TEST(ExprsEqual, DropsQUnderGeneralStructure) {
  Factorization f = general_structure();
  EqualitySet eqs = derive_equalities(f);
  InfoExpr a = expand_mi({"V1"}, {"Z"}, {"U", "Q"}), b = expand_mi({"V1"}, {"Z"}, {"U"});
  ASSERT_TRUE(exprs_equal(a, b, eqs));
  // oracle: the two sides agree on random joints with this structure
  Rng rng(20);
  for (int i = 0; i < 20; ++i) {
    ProbTable t = random_factored_joint(f, binary(f), rng);
    oracle::Joint j = to_oracle(t);
    auto lhs = oracle::mi(j, positions(t, {"V1"}), positions(t, {"Z"}), positions(t, {"U", "Q"}));
    auto rhs = oracle::mi(j, positions(t, {"V1"}), positions(t, {"Z"}), positions(t, {"U"}));
    EXPECT_LT(std::abs(static_cast<double>(lhs - rhs)), 1e-10);
    EXPECT_NEAR(evaluate(a, t), static_cast<double>(lhs), 1e-12);
  }
}

TEST(ExprsEqual, NotImplied) {
  EqualitySet eqs = derive_equalities(general_structure());
  EXPECT_FALSE(exprs_equal(H({"X"}), H({"Y1"}), eqs));
}

TEST(ExprsEqual, EqualitiesAreSoundOnSamples) {
  // every derived identity vanishes numerically on factored joints
  Factorization f = degraded_chain_structure();
  EqualitySet eqs = derive_equalities(f);
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    ProbTable t = random_factored_joint(f, binary(f), rng);
    for (const auto& e : eqs.equalities()) EXPECT_NEAR(evaluate(e, t), 0.0, 1e-12) << e.str();
  }
}

TEST(DSeparation, ColliderBlocks) {
  Factorization f;
  f.nodes = {"A", "B", "C"};
  f.parents = {{"A", {}}, {"B", {}}, {"C", {"A", "B"}}};
  EXPECT_TRUE(d_separated(f, {"A"}, {"B"}, {}));
  EXPECT_FALSE(d_separated(f, {"A"}, {"B"}, {"C"}));
}
