#include "wtap/regions_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wtap/error.hpp"

namespace wtap {

namespace {

std::string join_rates(const std::vector<std::string>& r) {
  std::string s;
  for (const auto& v : r) s += (s.empty() ? "" : "+") + v;
  return s;
}

std::string input_name(const AuxJoint& aux) {
  for (const auto& v : aux.table.vars())
    if (v.name != "Q" && v.name != "U" && v.name != "V1" && v.name != "V2") return v.name;
  fail(ErrorKind::InconsistentAux, "aux table has no channel input variable");
}

void require_vars(const ProbTable& t, const std::set<std::string>& want, const std::string& input) {
  std::set<std::string> have;
  for (const auto& v : t.vars()) have.insert(v.name);
  std::set<std::string> need = want;
  need.insert(input);
  if (have != need) {
    std::string list;
    for (const auto& n : need) list += " " + n;
    fail(ErrorKind::InconsistentAux, "aux table must hold exactly:" + list);
  }
}

// Joints of the aux with each single output, composed once.
struct Composed {
  std::array<ProbTable, 3> t;
  std::array<std::string, 3> out;

  Composed(const AuxJoint& aux, const ChannelSpec& ch) {
    check_aux(aux, ch);
    for (int k = 0; k < 3; ++k) {
      t[static_cast<std::size_t>(k)] = compose(aux.table, ch, {k});
      out[static_cast<std::size_t>(k)] = ch.outputs()[static_cast<std::size_t>(k)].name;
    }
  }
  double mi(int k, VarSet a, VarSet b, VarSet c = {}) const {
    auto& name = out[static_cast<std::size_t>(k)];
    for (auto* s : {&a, &b, &c})
      for (auto& v : *s)
        if (v == "@") v = name;
    return mutual_information(t[static_cast<std::size_t>(k)], a, b, c);
  }
};

constexpr int kY1 = 0, kY2 = 1, kZ = 2;

void require_degraded(const ChannelSpec& ch) {
  bool ok = ch.degraded_flag ? *ch.degraded_flag : (ch.is_cascade() || is_degraded(ch));
  if (!ok) fail(ErrorKind::NotDegraded, "channel is not degraded X -> Y1 -> Y2 -> Z");
}

const std::vector<std::vector<std::string>> kDegradedRows = {
    {"Rs2"}, {"Rs1", "Rs2"}, {"Rp2", "Rs2"}, {"Rs1", "Rp2", "Rs2"}, {"Rp1", "Rs1", "Rp2", "Rs2"}};

}  // namespace

const std::vector<std::vector<std::string>>& degraded_rows() { return kDegradedRows; }

AuxJoint make_degraded_aux(ProbTable t, const std::string& input) {
  validate_table(t);
  require_vars(t, {"U"}, input);
  return {std::move(t), AuxJoint::Kind::Degraded};
}

AuxJoint make_general_aux(ProbTable t, const std::string& input) {
  validate_table(t);
  require_vars(t, {"Q", "U", "V1", "V2"}, input);
  double leak = mutual_information(t, {"Q"}, {"V1", "V2", input}, {"U"});
  if (leak > kAuxMarkovTol)
    fail(ErrorKind::InconsistentAux, "aux does not factor as p(q,u)p(v1,v2,x|u): residual " + std::to_string(leak));
  return {std::move(t), AuxJoint::Kind::General};
}

void check_aux(const AuxJoint& aux, const ChannelSpec& ch) {
  const std::string& x = ch.input().name;
  if (aux.kind == AuxJoint::Kind::Degraded)
    require_vars(aux.table, {"U"}, x);
  else
    require_vars(aux.table, {"Q", "U", "V1", "V2"}, x);
  if (aux.table.card(x) != ch.input().card)
    fail(ErrorKind::InconsistentAux, "aux input alphabet differs from the channel input");
  if (input_name(aux) != x) fail(ErrorKind::InconsistentAux, "aux input variable differs from channel input");
}

double RegionPoint::at(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) fail(ErrorKind::UnknownVariable, "no bound labelled " + label);
  return values[static_cast<std::size_t>(it - labels.begin())];
}

IneqSystem rate_system(const std::vector<std::vector<std::string>>& lhs, const std::vector<double>& rhs,
                       const std::vector<std::string>& vars) {
  if (lhs.size() != rhs.size()) fail(ErrorKind::ShapeMismatch, "row count differs from rhs count");
  IneqSystem s;
  s.vars = vars;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    Coeffs c;
    for (const auto& v : lhs[i]) {
      if (!s.has_var(v)) fail(ErrorKind::UnknownVariable, "rate variable " + v);
      c[v] += 1;
    }
    s.add(le(std::move(c), rhs[i], join_rates(lhs[i])));
  }
  return s;
}

RegionPoint degraded_constants(const AuxJoint& aux, const ChannelSpec& ch) {
  if (aux.kind != AuxJoint::Kind::Degraded) fail(ErrorKind::InconsistentAux, "expected an aux over (U,X)");
  require_degraded(ch);
  Composed c(aux, ch);
  const std::string x = ch.input().name;
  double uy2 = c.mi(kY2, {"U"}, {"@"});
  double xy1u = c.mi(kY1, {x}, {"@"}, {"U"});
  double uz = c.mi(kZ, {"U"}, {"@"});
  double xz = c.mi(kZ, {x}, {"@"});
  double xzu = c.mi(kZ, {x}, {"@"}, {"U"});
  RegionPoint p;
  for (const auto& r : kDegradedRows) p.labels.push_back(join_rates(r));
  p.values = {uy2 - uz, uy2 + xy1u - xz, uy2, uy2 + xy1u - xzu, uy2 + xy1u};
  return p;
}

IneqSystem eval_degraded_inner(const AuxJoint& aux, const ChannelSpec& ch) {
  return rate_system(kDegradedRows, degraded_constants(aux, ch).values);
}

IneqSystem eval_degraded_outer(const AuxJoint& aux, const ChannelSpec& ch) {
  auto v = degraded_constants(aux, ch).values;
  auto rows = kDegradedRows;
  rows.erase(rows.begin() + 3);
  v.erase(v.begin() + 3);
  return rate_system(rows, v);
}

RegionPoint original_constants(const AuxJoint& aux, const ChannelSpec& ch) {
  if (aux.kind != AuxJoint::Kind::Degraded) fail(ErrorKind::InconsistentAux, "expected an aux over (U,X)");
  require_degraded(ch);
  Composed c(aux, ch);
  const std::string x = ch.input().name;
  double uz = c.mi(kZ, {"U"}, {"@"});
  double xzu = c.mi(kZ, {x}, {"@"}, {"U"});
  RegionPoint p;
  p.labels = {"Rp2", "Rs2", "Rp1", "Rs1"};
  p.values = {uz, c.mi(kY2, {"U"}, {"@"}) - uz, xzu, c.mi(kY1, {x}, {"@"}, {"U"}) - xzu};
  return p;
}

IneqSystem eval_original_inner(const AuxJoint& aux, const ChannelSpec& ch) {
  RegionPoint p = original_constants(aux, ch);
  std::vector<std::vector<std::string>> rows;
  for (const auto& l : p.labels) rows.push_back({l});
  return rate_system(rows, p.values);
}

IneqSystem transfer_rates(const IneqSystem& original, double tol) {
  std::vector<Transfer> moves = {{"Rs1", "Rp1", "_t1"},
                                 {"Rs2", "Rp2", "_t2"},
                                 {"Rs2", "Rp1", "_t3"},
                                 {"Rs2", "Rs1", "_t4"},
                                 {"Rp2", "Rp1", "_t5"}};
  IneqSystem s = apply_rate_transfer(original, moves);
  for (const auto& m : moves) s = fm_eliminate(s, m.slack);
  return remove_redundant(s, tol);
}

RegionPoint general_constants(const AuxJoint& aux, const ChannelSpec& ch) {
  if (aux.kind != AuxJoint::Kind::General)
    fail(ErrorKind::InconsistentAux, "expected an aux over (Q,U,V1,V2,X)");
  Composed c(aux, ch);
  const ProbTable& t = aux.table;
  double mq = std::min(c.mi(kY1, {"U"}, {"@"}, {"Q"}), c.mi(kY2, {"U"}, {"@"}, {"Q"}));
  double m = std::min(c.mi(kY1, {"U"}, {"@"}), c.mi(kY2, {"U"}, {"@"}));
  double a1 = c.mi(kY1, {"V1"}, {"@"}, {"U"});
  double a2 = c.mi(kY2, {"V2"}, {"@"}, {"U"});
  double v12 = mutual_information(t, {"V1"}, {"V2"}, {"U"});
  double zq1 = c.mi(kZ, {"U", "V1"}, {"@"}, {"Q"});
  double zq2 = c.mi(kZ, {"U", "V2"}, {"@"}, {"Q"});
  double zq12 = c.mi(kZ, {"U", "V1", "V2"}, {"@"}, {"Q"});
  double z1 = c.mi(kZ, {"V1"}, {"@"}, {"U"});
  double z2 = c.mi(kZ, {"V2"}, {"@"}, {"U"});
  double z12 = c.mi(kZ, {"V1", "V2"}, {"@"}, {"U"});
  RegionPoint p;
  p.labels = {"Rs1",          "Rs2",          "Rs1+Rs2",          "Rp1+Rs1",          "Rp2+Rs2",
              "Rp1+Rs1+Rs2#1", "Rp1+Rs1+Rs2#2", "Rs1+Rp2+Rs2#1", "Rs1+Rp2+Rs2#2", "Rp1+Rs1+Rp2+Rs2"};
  p.values = {mq + a1 - zq1,
              mq + a2 - zq2,
              mq + a1 + a2 - v12 - zq12,
              m + a1,
              m + a2,
              m + a1 + a2 - z2,
              m + 2 * a1 + a2 - v12 - z12,
              m + a1 + a2 - z1,
              m + a1 + 2 * a2 - v12 - z12,
              m + a1 + a2 - v12};
  return p;
}

IneqSystem eval_general_inner(const AuxJoint& aux, const ChannelSpec& ch) {
  RegionPoint p = general_constants(aux, ch);
  std::vector<std::vector<std::string>> rows;
  for (const auto& l : p.labels) {
    std::vector<std::string> r;
    std::string body = l.substr(0, l.find('#'));
    std::size_t b = 0;
    while (b <= body.size()) {
      auto e = body.find('+', b);
      if (e == std::string::npos) e = body.size();
      r.push_back(body.substr(b, e - b));
      b = e + 1;
    }
    rows.push_back(r);
  }
  IneqSystem s = rate_system(rows, p.values);
  for (std::size_t i = 0; i < s.ineqs.size(); ++i) s.ineqs[i].label = p.labels[i];
  return s;
}

Corollary parse_corollary(const std::string& name) {
  if (name == "cor1") return Corollary::Cor1;
  if (name == "cor2") return Corollary::Cor2;
  if (name == "cor3") return Corollary::Cor3;
  if (name == "cor3_alt") return Corollary::Cor3Alt;
  fail(ErrorKind::UnknownCorollary, "unknown corollary '" + name + "'");
}

IneqSystem specialize_corollary(const IneqSystem& sys, Corollary which, double tol) {
  for (const auto& v : kRateVars)
    if (!sys.has_var(v)) fail(ErrorKind::InvalidArgument, "corollaries need a system over all four rates");
  switch (which) {
    case Corollary::Cor1:
      return remove_redundant(set_zero(sys, {"Rs1"}), tol);
    case Corollary::Cor2:
      return remove_redundant(set_zero(sys, {"Rp2"}), tol);
    case Corollary::Cor3:
      return remove_redundant(set_zero(sys, {"Rp1", "Rp2"}), tol);
    case Corollary::Cor3Alt: {
      auto row = [&](const Coeffs& want) {
        for (const auto& q : sys.ineqs)
          if (q.rel == Rel::Le && q.coeffs == want) return q.value;
        fail(ErrorKind::InvalidArgument, "system lacks a row needed for the alternate form");
      };
      double c_s2 = row({{"Rs2", 1}});
      double c_sum = row({{"Rs1", 1}, {"Rs2", 1}});
      return rate_system({{"Rs2"}, {"Rs1"}}, {c_s2, c_sum - c_s2}, {"Rs1", "Rs2"});
    }
  }
  fail(ErrorKind::UnknownCorollary, "unknown corollary");
}

std::array<double, 4> to_equivocation(const std::array<double, 4>& r) {
  for (double v : r)
    if (!(v >= 0)) fail(ErrorKind::NegativeRate, "rates must be nonnegative");
  return {r[0] + r[1], r[1], r[2] + r[3], r[3]};
}

}  // namespace wtap
