#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "wtap/channel.hpp"
#include "wtap/error.hpp"
#include "wtap/prob_table.hpp"
#include "wtap/rng.hpp"

using namespace wtap;

namespace {

ProbTable xy(std::vector<double> p) { return ProbTable({{"X", 2}, {"Y", 2}}, std::move(p)); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

ProbTable random_table(Rng& rng, std::vector<VarId> vars) {
  std::size_t n = cell_count(vars);
  return ProbTable(std::move(vars), rng.dirichlet(n));
}

}  // namespace

TEST(ValidateTable, UniformIsFine) { EXPECT_NO_THROW(validate_table(xy({0.25, 0.25, 0.25, 0.25}))); }

TEST(ValidateTable, NegativeEntry) {
  EXPECT_EQ(kind_of([] { validate_table(xy({-0.1, 0.5, 0.3, 0.3})); }), ErrorKind::NegativeMass);
}

TEST(ValidateTable, SumBelowOne) {
  EXPECT_EQ(kind_of([] { validate_table(xy({0.2, 0.2, 0.25, 0.25})); }), ErrorKind::NotNormalized);
}

TEST(MutualInformation, IndependentIsZero) {
  EXPECT_NEAR(mutual_information(xy({0.25, 0.25, 0.25, 0.25}), {"X"}, {"Y"}), 0.0, 1e-15);
}

TEST(MutualInformation, CopyIsLn2) {
  EXPECT_NEAR(mutual_information(xy({0.5, 0, 0, 0.5}), {"X"}, {"Y"}), std::log(2.0), 1e-15);
}

TEST(MutualInformation, Bsc01) {
  // ln 2 - h_b(0.1), frozen from the oracle
  double want = static_cast<double>(std::log(2.0L) - oracle::hb(0.1L));
  EXPECT_NEAR(want, 0.368064, 5e-7);
  EXPECT_NEAR(mutual_information(xy({0.45, 0.05, 0.05, 0.45}), {"X"}, {"Y"}), want, 1e-14);
}

TEST(MutualInformation, OverlapRejected) {
  EXPECT_EQ(kind_of([] { mutual_information(xy({0.25, 0.25, 0.25, 0.25}), {"X"}, {"X", "Y"}); }),
            ErrorKind::OverlappingSets);
}

TEST(MutualInformation, PropertiesOnRandomTables) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    ProbTable t = random_table(rng, {{"A", 2}, {"B", 3}, {"C", 2}});
    double iab = mutual_information(t, {"A"}, {"B"});
    EXPECT_GE(iab, 0.0);
    EXPECT_NEAR(iab, mutual_information(t, {"B"}, {"A"}), 1e-14);
    // chain rule I(A;B,C) = I(A;C) + I(A;B|C)
    EXPECT_NEAR(mutual_information(t, {"A"}, {"B", "C"}),
                mutual_information(t, {"A"}, {"C"}) + mutual_information(t, {"A"}, {"B"}, {"C"}), 1e-13);
    EXPECT_GE(mutual_information(t, {"A"}, {"B"}, {"C"}), 0.0);
  }
}

TEST(DegradedJoint, IdentityCascadeIsDiagonal) {
  ChannelSpec ch = build_degraded_joint(identity_kernel(2), identity_kernel(2), identity_kernel(2));
  Kernel k = ch.joint_kernel();
  ASSERT_EQ(k.rows(), 2);
  ASSERT_EQ(k.cols(), 8);
  EXPECT_DOUBLE_EQ(k(0, 0), 1.0);  // (0,0,0)
  EXPECT_DOUBLE_EQ(k(1, 7), 1.0);  // (1,1,1)
  EXPECT_DOUBLE_EQ(k.sum(), 2.0);
}

TEST(DegradedJoint, CascadeIsMarkov) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    ChannelSpec ch = build_degraded_joint(random_kernel(3, 2, rng), random_kernel(2, 3, rng), random_kernel(3, 2, rng));
    ProbTable t = uniform_input_joint(ch);
    EXPECT_TRUE(check_markov(t, {"X", "Y1", "Y2", "Z"}, 1e-12));
    EXPECT_TRUE(is_degraded(ch));
  }
}

TEST(CheckMarkov, BrokenChain) {
  // Y1 = X, Z = X, Y2 independent noise
  ProbTable t = ProbTable::from_function({{"X", 2}, {"Y1", 2}, {"Y2", 2}, {"Z", 2}}, [](const auto& v) {
    return (v[0] == v[1] && v[0] == v[3]) ? 0.25 : 0.0;
  });
  EXPECT_FALSE(check_markov(t, {"X", "Y1", "Y2", "Z"}, 1e-9));
}

TEST(CheckMarkov, ShortChainVacuous) {
  Rng rng(2);
  EXPECT_TRUE(check_markov(random_table(rng, {{"A", 3}, {"B", 2}}), {"A", "B"}, 1e-12));
}

TEST(Compose, MatchesOracleJoint) {
  ChannelSpec ch = build_degraded_joint(bsc(0.05), bsc(0.1), bsc(0.15));
  ProbTable aux({{"U", 2}, {"X", 2}}, {0.3, 0.2, 0.1, 0.4});
  ProbTable j = compose(aux, ch, {0, 1, 2});
  auto oj = oracle::cascade_joint({{0.3, 0.2}, {0.1, 0.4}}, oracle::bsc(0.05), oracle::bsc(0.1), oracle::bsc(0.15));
  EXPECT_NEAR(mutual_information(j, {"U"}, {"Z"}), static_cast<double>(oracle::mi(oj, {0}, {4})), 1e-14);
  EXPECT_NEAR(mutual_information(j, {"X"}, {"Y1"}, {"U"}), static_cast<double>(oracle::mi(oj, {1}, {2}, {0})), 1e-14);
}

TEST(Rng, StreamsAreReproducible) {
  Rng a = Rng::stream(42, 3), b = Rng::stream(42, 3), c = Rng::stream(42, 4);
  auto x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
}

TEST(DegradedJoint, DataProcessing) {
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    ChannelSpec ch = build_degraded_joint(random_kernel(3, 3, rng), random_kernel(3, 2, rng), random_kernel(2, 3, rng));
    ProbTable t = uniform_input_joint(ch);
    double y1 = mutual_information(t, {"X"}, {"Y1"}), y2 = mutual_information(t, {"X"}, {"Y2"});
    EXPECT_LE(y2, y1 + 1e-10);
    EXPECT_LE(mutual_information(t, {"X"}, {"Z"}), y2 + 1e-10);
  }
}

namespace {

// Q, W and two length-n binary sequences A1..An, B1..Bn with an arbitrary joint.
std::vector<VarId> sequence_vars(int n) {
  std::vector<VarId> v{{"Q", 2}, {"W", 2}};
  for (int i = 1; i <= n; ++i) v.push_back({"A" + std::to_string(i), 2});
  for (int i = 1; i <= n; ++i) v.push_back({"B" + std::to_string(i), 2});
  return v;
}

// names p1..p2 inclusive; empty when p1 > p2
VarSet run(const std::string& p, int from, int to) {
  VarSet s;
  for (int i = from; i <= to; ++i) s.push_back(p + std::to_string(i));
  return s;
}

VarSet join(VarSet a, const VarSet& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

double mi0(const ProbTable& t, const VarSet& a, const VarSet& b, const VarSet& c) {
  return a.empty() || b.empty() ? 0.0 : mutual_information(t, a, b, c);
}

}  // namespace

TEST(SequenceIdentities, SumOfPastFutureTermsBalances) {
  Rng rng(31);
  for (int n = 1; n <= 4; ++n)
    for (int rep = 0; rep < 5; ++rep) {
      ProbTable t = random_table(rng, sequence_vars(n));
      double lhs = 0, rhs = 0;
      for (int i = 1; i <= n; ++i) {
        lhs += mi0(t, run("A", i + 1, n), {"B" + std::to_string(i)}, join({"Q"}, run("B", 1, i - 1)));
        rhs += mi0(t, run("B", 1, i - 1), {"A" + std::to_string(i)}, join({"Q"}, run("A", i + 1, n)));
      }
      EXPECT_NEAR(lhs, rhs, 1e-10) << "n = " << n;
    }
}

TEST(SequenceIdentities, DifferenceTelescopes) {
  Rng rng(32);
  for (int n = 1; n <= 4; ++n)
    for (int rep = 0; rep < 5; ++rep) {
      ProbTable t = random_table(rng, sequence_vars(n));
      double lhs = mutual_information(t, {"W"}, run("A", 1, n), {"Q"}) - mutual_information(t, {"W"}, run("B", 1, n), {"Q"});
      double rhs = 0;
      for (int i = 1; i <= n; ++i) {
        VarSet c = join(join({"Q"}, run("A", 1, i - 1)), run("B", i + 1, n));
        rhs += mutual_information(t, {"W"}, {"A" + std::to_string(i)}, c) -
               mutual_information(t, {"W"}, {"B" + std::to_string(i)}, c);
      }
      EXPECT_NEAR(lhs, rhs, 1e-10) << "n = " << n;
    }
}
