#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "wtap/error.hpp"
#include "wtap/io.hpp"

using namespace wtap;
using Eigen::MatrixXd;

namespace {

const std::string kDir = WTAP_FIXTURE_DIR;

ErrorKind kind_of_failure(const std::string& text) {
  try {
    parse_channel_text(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;  // sentinel: no throw
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_kind(const Table& t, const std::string& kind) {
  std::size_t n = 0;
  for (const auto& r : t.rows) n += r.at(0) == kind;
  return n;
}

}  // namespace

TEST(ParseChannel, MinimalIdentity) {
  ChannelFile f = parse_channel_text(
      "kind discrete\ninput X 2\noutputs Y1 2 Y2 2 Z 2\n"
      "[stage Y1]\n1 0\n0 1\n[stage Y2]\n1 0\n0 1\n[stage Z]\n1 0\n0 1\n");
  const auto& d = std::get<DiscreteChannelFile>(f);
  ASSERT_TRUE(d.channel.degraded_flag.has_value());
  EXPECT_TRUE(*d.channel.degraded_flag);
  EXPECT_EQ(d.channel.input().name, "X");
}

TEST(ParseChannel, IndefiniteNoiseIsValidationError) {
  std::string text =
      "kind gauss\ndim 2\n[S]\n1 0\n0 1\n[Sigma1]\n1 2\n2 1\n[Sigma2]\n3 0\n0 3\n[SigmaZ]\n4 0\n0 4\n";
  try {
    parse_channel_text(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
    EXPECT_NE(std::string(e.what()).find("NonPSD"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("Sigma1"), std::string::npos) << e.what();
  }
}

TEST(ParseChannel, BadNumberReportsPosition) {
  std::string text = "kind gauss\ndim 1\n[S]\n1x\n[Sigma1]\n1\n[Sigma2]\n1\n[SigmaZ]\n1\n";
  try {
    parse_channel_text(text, "t.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("t.txt:4:1"), std::string::npos) << e.what();
  }
}

TEST(ParseChannel, StructuralErrors) {
  EXPECT_EQ(kind_of_failure("kind teapot\n"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of_failure("kind discrete\ninput X 2\noutputs Y1 2 Y2 2 Z 2\n[stage Y1]\n1 0\n"),
            ErrorKind::ParseError);
  // rows that do not sum to one
  EXPECT_EQ(kind_of_failure("kind discrete\ninput X 2\noutputs Y1 2 Y2 2 Z 2\n[stage Y1]\n0.5 0\n0 1\n"
                            "[stage Y2]\n1 0\n0 1\n[stage Z]\n1 0\n0 1\n"),
            ErrorKind::ValidationError);
}

TEST(ParseChannel, MissingFile) {
  try {
    parse_channel_file(kDir + "/does_not_exist.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}

TEST(RoundTrip, ScalarFixtureIsBitExact) {
  auto f = std::get<GaussChannelFile>(parse_channel_file(kDir + "/channels/gauss_scalar.txt"));
  std::string once = emit_channel(f);
  EXPECT_EQ(once, slurp(kDir + "/channels/gauss_scalar.txt"));
  auto g = std::get<GaussChannelFile>(parse_channel_text(once));
  EXPECT_EQ(emit_channel(g), once);
}

TEST(RoundTrip, RandomGaussianIsBitExact) {
  Rng rng(21);
  for (int i = 0; i < 10; ++i) {
    GaussChannelFile f{random_degraded_gauss(1 + i % 3, rng), {"r", 7}};
    auto g = std::get<GaussChannelFile>(parse_channel_text(emit_channel(f)));
    EXPECT_EQ(g.channel.S, f.channel.S);
    EXPECT_EQ(g.channel.Sigma1, f.channel.Sigma1);
    EXPECT_EQ(g.channel.SigmaZ, f.channel.SigmaZ);
    EXPECT_EQ(g.meta.name, "r");
    EXPECT_EQ(g.meta.seed, std::optional<std::uint64_t>(7));
  }
}

TEST(RoundTrip, DiscreteFixtures) {
  for (const char* name : {"bsc_chain", "identity2", "joint_example"}) {
    auto f = std::get<DiscreteChannelFile>(parse_channel_file(kDir + "/channels/" + name + ".txt"));
    std::string once = emit_channel(f);
    auto g = std::get<DiscreteChannelFile>(parse_channel_text(once));
    EXPECT_EQ(emit_channel(g), once) << name;
    for (int k = 0; k < 3; ++k) EXPECT_EQ(g.channel.marginal(k), f.channel.marginal(k)) << name;
  }
}

TEST(RoundTrip, HChannel) {
  auto f = std::get<HGaussChannelFile>(parse_channel_file(kDir + "/channels/gauss_h.txt"));
  auto g = std::get<HGaussChannelFile>(parse_channel_text(emit_channel(f)));
  EXPECT_EQ(g.channel.H2, f.channel.H2);
}

TEST(RoundTrip, AuxSplitMixture) {
  AuxJoint a = parse_aux_file(kDir + "/aux/degraded_u2.txt");
  AuxJoint a2 = parse_aux(parse_text_doc(emit_aux(a), "<aux>"));
  EXPECT_EQ(a2.table.probs(), a.table.probs());
  EXPECT_EQ(a2.kind, a.kind);

  CovSplit s = parse_split_file(kDir + "/splits/scalar_triple.txt");
  ASSERT_TRUE(s.general);
  CovSplit s2 = parse_split(parse_text_doc(emit_split(s), "<split>"));
  EXPECT_EQ(s2.K0, s.K0);
  EXPECT_EQ(s2.K1, s.K1);
  EXPECT_EQ(s2.K2, s.K2);

  ScalarMixture m = parse_mixture_file(kDir + "/mixtures/bpsk.txt");
  ScalarMixture m2 = parse_mixture(parse_text_doc(emit_mixture(m), "<mix>"));
  EXPECT_EQ(m2.x, m.x);
  EXPECT_EQ(m2.w, m.w);
  EXPECT_EQ(m2.u, m.u);
  EXPECT_EQ(m2.sz, m.sz);
}

TEST(Csv, UnitSquareVertices) {
  IneqSystem s;
  s.add_var("x");
  s.add_var("y");
  s.add(le({{"x", 1}}, 1.0));
  s.add(le({{"y", 1}}, 1.0));
  VPolytope p = vertices(s);
  Table t = vertex_table(p);
  EXPECT_EQ(t.rows.size(), 4u);
  std::string csv = t.csv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Csv, ScalarGaussianRegion) {
  auto f = std::get<GaussChannelFile>(parse_channel_file(kDir + "/channels/gauss_scalar.txt"));
  IneqSystem sys = eval_gauss_inner(CovSplit::single(MatrixXd::Constant(1, 1, 0.5)), f.channel);
  Table t = region_table(sys);
  EXPECT_EQ(count_kind(t, "constraint"), 5u);
  EXPECT_EQ(count_kind(t, "nonneg"), 4u);
  EXPECT_EQ(t.header.front(), "kind");
  EXPECT_EQ(t.header.back(), "rhs");
  EXPECT_EQ(t.rows[0].back(), "0.0526802578289");
}

TEST(Csv, EmptyPolytope) {
  IneqSystem s;
  s.add_var("x");
  s.add(le({{"x", 1}}, -1.0));
  VPolytope p = vertices(s);
  ASSERT_TRUE(p.empty());
  Table t = region_table(s, &p);
  EXPECT_EQ(count_kind(t, "EMPTY"), 1u);
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(fmt_num(-0.0), "0");
  EXPECT_EQ(fmt_num(0.5), "0.5");
  EXPECT_EQ(fmt_num(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(parse_format("pretty"), OutFormat::Pretty);
  EXPECT_THROW(parse_format("xml"), Error);
}

TEST(Csv, PrettyAligns) {
  Table t{{"a", "bbb"}, {{"1", "2"}, {"333", "4"}}};
  std::istringstream in(t.pretty());
  std::string l1, l2;
  std::getline(in, l1);
  std::getline(in, l2);
  EXPECT_EQ(l1.size(), l2.size());
}
