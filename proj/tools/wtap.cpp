// Command-line front end. Tables go to --out (stdout by default); one-line
// summaries go to stderr so piped CSV stays clean.
//
// Exit status: 0 pass, 1 property violation, 2 input error.

#include <cstdio>
#include <iostream>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "wtap/error.hpp"
#include "wtap/fisher.hpp"
#include "wtap/fm_script.hpp"
#include "wtap/gaussian.hpp"
#include "wtap/io.hpp"
#include "wtap/regions_discrete.hpp"
#include "wtap/sweep.hpp"

#ifndef WTAP_FIXTURE_DIR
#define WTAP_FIXTURE_DIR "fixtures"
#endif

using namespace wtap;

namespace {

struct Opts {
  std::string channel, aux, split, mixture, out, hull_out, format = "csv";
  std::string corollary, region = "inner", mode = "fixed", order = "o21";
  std::string script = std::string(WTAP_FIXTURE_DIR) + "/elimination_chain.txt";
  std::string factorizations = std::string(WTAP_FIXTURE_DIR) + "/factorizations.txt";
  std::uint64_t seed = 1;
  std::size_t budget = 0;
  double tol = 0;
  bool outer = false, keep_going = false;
};

int violation(const std::string& invariant, const std::string& detail) {
  std::cerr << "FAIL " << invariant << ": " << detail << "\n";
  return 1;
}

void summary(const std::string& s) { std::cerr << s << "\n"; }

double tol_or(const Opts& o, double d) { return o.tol > 0 ? o.tol : d; }
std::size_t budget_or(const Opts& o, std::size_t d) { return o.budget > 0 ? o.budget : d; }

void emit(const Table& t, const Opts& o) { write_table(t, o.out, parse_format(o.format)); }

void require(const std::string& v, const std::string& flag) {
  if (v.empty()) fail(ErrorKind::InvalidArgument, flag + " is required");
}

ChannelSpec discrete_channel(const Opts& o) {
  require(o.channel, "--channel");
  auto f = parse_channel_file(o.channel);
  if (!std::holds_alternative<DiscreteChannelFile>(f))
    fail(ErrorKind::InvalidArgument, o.channel + " is not a discrete channel");
  return std::get<DiscreteChannelFile>(f).channel;
}

GaussChannel gauss_channel(const Opts& o) {
  require(o.channel, "--channel");
  auto f = parse_channel_file(o.channel);
  if (!std::holds_alternative<GaussChannelFile>(f)) fail(ErrorKind::InvalidArgument, o.channel + " is not a gauss channel");
  return std::get<GaussChannelFile>(f).channel;
}

IneqSystem finish_region(const IneqSystem& sys, const Opts& o) {
  if (o.corollary.empty()) return sys;
  return specialize_corollary(sys, parse_corollary(o.corollary), tol_or(o, 1e-9));
}

int region_eval(const Opts& o, const std::string& which) {
  ChannelSpec ch = discrete_channel(o);
  require(o.aux, "--aux");
  AuxJoint aux = parse_aux_file(o.aux);
  IneqSystem sys;
  if (which == "inner") sys = finish_region(eval_degraded_inner(aux, ch), o);
  else if (which == "outer") sys = finish_region(eval_degraded_outer(aux, ch), o);
  else sys = eval_general_inner(aux, ch);
  VPolytope p = vertices(sys, tol_or(o, 1e-9));
  emit(region_table(sys, &p), o);
  summary("region " + which + ": " + std::to_string(sys.ineqs.size()) + " constraints, " +
          std::to_string(p.vertices.size()) + " vertices");
  return 0;
}

int region_sweep(const Opts& o) {
  ChannelSpec ch = discrete_channel(o);
  SweepConfig cfg;
  cfg.budget = budget_or(o, 64);
  cfg.seed = o.seed;
  cfg.tol = tol_or(o, 1e-9);
  if (o.region == "inner") cfg.region = SweepRegion::DegradedInner;
  else if (o.region == "outer") cfg.region = SweepRegion::DegradedOuter;
  else if (o.region == "general") cfg.region = SweepRegion::GeneralInner;
  else fail(ErrorKind::InvalidArgument, "--region must be inner, outer or general");
  SweepResult r = sweep_inner_region(ch, cfg);
  emit(sweep_table(r), o);
  if (!o.hull_out.empty()) write_table(hull_table(r.vars, r.hull), o.hull_out, parse_format(o.format));
  summary("sweep: " + std::to_string(r.samples.size()) + " samples, " + std::to_string(r.hull.size()) +
          " hull points");
  return 0;
}

int fm_verify(const Opts& o) {
  ElimScript s = load_elim_script(o.script);
  ScriptReport r = run_elim_script(s, o.factorizations, o.seed, o.keep_going);
  std::string text = format_report(r);
  if (o.out.empty() || o.out == "-") std::cout << text;
  else write_file(o.out, text);
  if (!r.pass) return violation("elimination replay", "first failing step " + std::to_string(r.first_failure));
  summary("fm verify-appendix: PASS (" + std::to_string(r.steps.size()) + " steps)");
  return 0;
}

int gauss_eval(const Opts& o) {
  GaussChannel ch = gauss_channel(o);
  require(o.split, "--split");
  CovSplit s = parse_split_file(o.split);
  IneqSystem sys;
  if (s.general) {
    GaussOrder ord;
    if (o.order == "o21") ord = GaussOrder::O21;
    else if (o.order == "o12") ord = GaussOrder::O12;
    else fail(ErrorKind::InvalidArgument, "--order must be o21 or o12");
    sys = eval_general_gauss(s, ch, ord);
  } else {
    sys = o.outer ? eval_gauss_outer(s, ch) : eval_gauss_inner(s, ch);
    if (!o.corollary.empty()) sys = specialize_gauss_corollary(sys, parse_gauss_corollary(o.corollary), tol_or(o, 1e-9));
  }
  VPolytope p = vertices(sys, tol_or(o, 1e-9));
  emit(region_table(sys, &p), o);
  summary("gauss eval: " + std::to_string(sys.ineqs.size()) + " constraints, " + std::to_string(p.vertices.size()) +
          " vertices");
  return 0;
}

int gauss_sweep(const Opts& o) {
  GaussChannel ch = gauss_channel(o);
  CovSweepConfig cfg;
  cfg.budget = budget_or(o, 64);
  cfg.seed = o.seed;
  cfg.tol = tol_or(o, 1e-9);
  if (o.mode == "fixed") cfg.mode = CovSweepMode::FixedS;
  else if (o.mode == "trace") cfg.mode = CovSweepMode::TraceP;
  else fail(ErrorKind::InvalidArgument, "--mode must be fixed or trace");
  CovSweepResult r = sweep_covariances(ch, cfg);
  emit(cov_sweep_table(r), o);
  if (!o.hull_out.empty()) write_table(hull_table(r.vars, r.hull), o.hull_out, parse_format(o.format));
  summary("gauss sweep: " + std::to_string(r.samples.size()) + " samples, " + std::to_string(r.hull.size()) +
          " hull points");
  return 0;
}

int gauss_dpc(const Opts& o) {
  GaussChannel ch = gauss_channel(o);
  double tol = tol_or(o, 1e-9);
  Table t{{"instance", "lhs", "rhs", "residual"}, {}};
  double worst = 0;
  auto row = [&](std::size_t i, const CovSplit& s) {
    DpcCheck c = dpc_identity_check(s.K1, s.K2, s.K0, ch);
    worst = std::max(worst, c.residual);
    t.rows.push_back({std::to_string(i), fmt_num(c.lhs), fmt_num(c.rhs), fmt_num(c.residual)});
  };
  if (!o.split.empty()) {
    CovSplit s = parse_split_file(o.split);
    if (!s.general) fail(ErrorKind::InvalidArgument, "dpc-check needs a K0/K1/K2 split");
    row(0, s);
  } else {
    for (std::size_t i = 0; i < budget_or(o, 100); ++i) {
      Rng rng = Rng::stream(o.seed, i);
      row(i, random_triple(ch.S, rng));
    }
  }
  emit(t, o);
  if (worst > tol) return violation("dirty-paper identity", "max residual " + fmt_num(worst));
  summary("gauss dpc-check: PASS, max residual " + fmt_num(worst));
  return 0;
}

int gauss_degraded(const Opts& o) {
  require(o.channel, "--channel");
  auto f = parse_channel_file(o.channel);
  Table t{{"check", "value"}, {}};
  bool ok = false;
  if (auto* g = std::get_if<GaussChannelFile>(&f)) {
    ok = check_degraded_order(g->channel);
    t.rows.push_back({"order", ok ? "yes" : "no"});
  } else if (auto* h = std::get_if<HGaussChannelFile>(&f)) {
    HDegradedWitness w = check_degraded_H(h->channel);
    ok = w.degraded;
    t.rows.push_back({"degraded", ok ? "yes" : "no"});
    t.rows.push_back({"residual21", fmt_num(w.residual21)});
    t.rows.push_back({"residualZ2", fmt_num(w.residualZ2)});
  } else {
    fail(ErrorKind::InvalidArgument, "degraded-check needs a gauss or gauss_h channel");
  }
  emit(t, o);
  if (!ok) return violation("degradedness", "channel is not degraded");
  summary("gauss degraded-check: degraded");
  return 0;
}

int fisher_debruijn(const Opts& o) {
  double tg = tol_or(o, 1e-5), tm = tol_or(o, 1e-4);
  Table t{{"instance", "kind", "dim", "residual", "residual_half", "ratio"}, {}};
  bool ok = true;
  auto add = [&](std::size_t i, const char* kind, int d, const DeBruijnResult& r, double tol) {
    ok = ok && r.residual <= tol;
    t.rows.push_back({std::to_string(i), kind, std::to_string(d), fmt_num(r.residual), fmt_num(r.residual_half),
                      fmt_num(r.ratio)});
  };
  if (!o.mixture.empty()) {
    ScalarMixture m = parse_mixture_file(o.mixture);
    add(0, "mixture", 1, debruijn_check(m, m.s1), tm);
  } else {
    for (std::size_t i = 0; i < budget_or(o, 30); ++i) {
      Rng rng = Rng::stream(o.seed, i);
      int d = 1 + static_cast<int>(i % 3);
      GaussPair p = random_gauss_pair(d, d, rng);
      add(i, "gauss", d, debruijn_check(p, random_pd(d, rng, 0.1)), tg);
      ScalarMixture m = random_mixture(rng);
      add(i, "mixture", 1, debruijn_check(m, m.s1), tm);
    }
  }
  emit(t, o);
  if (!ok) return violation("de Bruijn identity", "residual above tolerance");
  summary("fisher debruijn: PASS");
  return 0;
}

int fisher_lemmas(const Opts& o) {
  double tol = tol_or(o, 1e-8);
  LemmaReport r = lemma_suite_check(budget_or(o, 200), o.seed);
  Table t{{"lemma", "instance", "dim", "slack"}, {}};
  for (const auto& s : r.rows) t.rows.push_back({s.lemma, std::to_string(s.seed), std::to_string(s.dim), fmt_num(s.slack)});
  emit(t, o);
  std::string mins;
  for (const char* l : {"6", "7", "8", "9", "11", "12"}) mins += std::string(" L") + l + "=" + fmt_num(r.min_slack(l));
  if (!r.pass(tol)) return violation("Fisher lemma slack", mins);
  summary("fisher lemmas: PASS" + mins);
  return 0;
}

int fisher_evidence(const Opts& o) {
  double tol = tol_or(o, 1e-3);
  Table t{{"instance", "best_K", "slack", "dominated", "t_star", "K1", "order_ok"}, {}};
  bool ok = true;
  auto add = [&](std::size_t i, const ScalarMixture& m) {
    EvidenceReport e = sufficiency_evidence_scalar(m, -1, tol);
    TStar ts = interpolation_t_star(m);
    ok = ok && e.dominated && ts.order_ok;
    t.rows.push_back({std::to_string(i), fmt_num(e.best_K), fmt_num(e.slack), e.dominated ? "yes" : "no",
                      fmt_num(ts.t), fmt_num(ts.K1), ts.order_ok ? "yes" : "no"});
  };
  if (!o.mixture.empty()) {
    add(0, parse_mixture_file(o.mixture));
  } else {
    for (std::size_t i = 0; i < budget_or(o, 50); ++i) {
      Rng rng = Rng::stream(o.seed, i);
      add(i, random_mixture(rng));
    }
  }
  emit(t, o);
  if (!ok) return violation("Gaussian envelope", "a mixture region escapes the K sweep");
  summary("fisher evidence: PASS (numerical evidence only)");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wiretap rate-region toolkit"};
  app.require_subcommand(1);
  Opts o;
  int rc = 0;

  auto common = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "64-bit seed");
    c->add_option("--budget", o.budget, "number of samples or instances")->check(CLI::PositiveNumber);
    c->add_option("--tol", o.tol, "tolerance")->check(CLI::PositiveNumber);
    c->add_option("--out", o.out, "output path (default stdout)");
    c->add_option("--format", o.format, "csv or pretty")->check(CLI::IsMember({"csv", "pretty"}));
  };
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, auto fn) {
    CLI::App* c = parent->add_subcommand(name, help);
    common(c);
    c->callback([&rc, fn]() { rc = fn(); });
    return c;
  };

  CLI::App* region = app.add_subcommand("region", "discrete regions")->require_subcommand(1);
  for (const char* w : {"inner", "outer", "general"}) {
    std::string which = w;
    auto* c = leaf(region, "eval-" + which, "evaluate the " + which + " region for one aux",
                   [&o, which] { return region_eval(o, which); });
    c->add_option("--channel", o.channel, "channel file")->required();
    c->add_option("--aux", o.aux, "aux distribution file")->required();
    if (which != "general") c->add_option("--corollary", o.corollary, "cor1, cor2, cor3 or cor3_alt");
  }
  {
    auto* c = leaf(region, "sweep", "sweep random aux distributions", [&o] { return region_sweep(o); });
    c->add_option("--channel", o.channel, "channel file")->required();
    c->add_option("--region", o.region, "inner, outer or general");
    c->add_option("--hull-out", o.hull_out, "write hull vertices here");
  }

  CLI::App* fm = app.add_subcommand("fm", "Fourier-Motzkin scripts")->require_subcommand(1);
  {
    auto* c = leaf(fm, "verify-appendix", "replay the recorded elimination", [&o] { return fm_verify(o); });
    c->add_option("--script", o.script, "elimination script (default: bundled chain)");
    c->add_option("--factorizations", o.factorizations, "factorization file");
    c->add_flag("--keep-going", o.keep_going, "report every step after a failure");
  }

  CLI::App* gauss = app.add_subcommand("gauss", "Gaussian channels")->require_subcommand(1);
  {
    auto* c = leaf(gauss, "eval", "evaluate a region for one covariance split", [&o] { return gauss_eval(o); });
    c->add_option("--channel", o.channel, "channel file")->required();
    c->add_option("--split", o.split, "covariance split file")->required();
    c->add_flag("--outer", o.outer, "evaluate the outer bound");
    c->add_option("--corollary", o.corollary, "cor4, cor5, cor6 or cor6_alt");
    c->add_option("--order", o.order, "o21 or o12 for three-layer splits");
  }
  {
    auto* c = leaf(gauss, "sweep", "sweep covariance splits", [&o] { return gauss_sweep(o); });
    c->add_option("--channel", o.channel, "channel file")->required();
    c->add_option("--mode", o.mode, "fixed or trace");
    c->add_option("--hull-out", o.hull_out, "write hull vertices here");
  }
  {
    auto* c = leaf(gauss, "dpc-check", "dirty-paper identity", [&o] { return gauss_dpc(o); });
    c->add_option("--channel", o.channel, "channel file")->required();
    c->add_option("--split", o.split, "K0/K1/K2 split file (default: random splits)");
  }
  {
    auto* c = leaf(gauss, "degraded-check", "degradedness test", [&o] { return gauss_degraded(o); });
    c->add_option("--channel", o.channel, "channel file")->required();
  }

  CLI::App* fisher = app.add_subcommand("fisher", "Fisher information checks")->require_subcommand(1);
  leaf(fisher, "debruijn", "de Bruijn identity", [&o] { return fisher_debruijn(o); })
      ->add_option("--mixture", o.mixture, "mixture file (default: random mixtures)");
  leaf(fisher, "lemmas", "matrix and Fisher inequalities", [&o] { return fisher_lemmas(o); });
  leaf(fisher, "evidence", "Gaussian envelope of scalar mixtures", [&o] { return fisher_evidence(o); })
      ->add_option("--mixture", o.mixture, "mixture file (default: random mixtures)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return is_input_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
