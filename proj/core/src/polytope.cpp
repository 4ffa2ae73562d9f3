#include "wtap/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "wtap/error.hpp"
#include "wtap/lp.hpp"

namespace wtap {

namespace {

constexpr double kTrivialTol = 1e-12;

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }

void add_scaled(LinIneq& dst, const LinIneq& src, const Rational& s) {
  for (const auto& [v, c] : src.coeffs) {
    Rational& slot = dst.coeffs[v];
    slot += s * c;
    if (slot == 0) dst.coeffs.erase(v);
  }
  dst.rhs += s * src.rhs;
  dst.value += to_double(s) * src.value;
}

LinIneq nonneg(const std::string& v) {
  LinIneq q;
  q.coeffs[v] = -1;
  q.label = v + ">=0";
  return q;
}

// A row with no coefficients: true rows vanish, false ones stay so the
// region reads as empty.
bool trivially_true(const LinIneq& q, bool symbolic, const EqualitySet* eqs) {
  if (!q.is_trivial()) return false;
  if (symbolic) {
    InfoExpr r = eqs ? eqs->normal_form(q.rhs) : q.rhs;
    return r.is_zero();
  }
  if (q.rel == Rel::Eq) return std::abs(q.value) <= kTrivialTol;
  return q.value >= -kTrivialTol;
}

struct Dense {
  Eigen::MatrixXd A, Aeq;
  Eigen::VectorXd b, beq;
  bool trivially_infeasible = false;
};

Dense to_dense(const IneqSystem& sys, int skip = -1) {
  const auto d = static_cast<Eigen::Index>(sys.vars.size());
  std::vector<const LinIneq*> le_rows, eq_rows;
  Dense out;
  for (std::size_t i = 0; i < sys.ineqs.size(); ++i) {
    if (static_cast<int>(i) == skip) continue;
    const auto& q = sys.ineqs[i];
    if (q.is_trivial()) {
      if (!trivially_true(q, false, nullptr)) out.trivially_infeasible = true;
      continue;
    }
    (q.rel == Rel::Eq ? eq_rows : le_rows).push_back(&q);
  }
  auto fill = [&](const std::vector<const LinIneq*>& rows, Eigen::MatrixXd& M, Eigen::VectorXd& v) {
    M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), d);
    v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (const auto& [name, c] : rows[r]->coeffs)
        M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(sys.index_of(name))) = to_double(c);
      v(static_cast<Eigen::Index>(r)) = rows[r]->value;
    }
  };
  fill(le_rows, out.A, out.b);
  fill(eq_rows, out.Aeq, out.beq);
  return out;
}

}  // namespace

Rational LinIneq::coeff(const std::string& v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? Rational(0) : it->second;
}

std::string LinIneq::lhs_str() const {
  if (coeffs.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : coeffs) {
    Rational mag = abs_r(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    if (mag != 1) os << mag << "*";
    os << v;
    first = false;
  }
  return os.str();
}

std::string LinIneq::str(bool symbolic) const {
  std::ostringstream os;
  os << lhs_str() << (rel == Rel::Le ? " <= " : " = ");
  if (symbolic) {
    os << rhs.str();
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    os << buf;
  }
  return os.str();
}

bool IneqSystem::has_var(const std::string& v) const {
  return std::find(vars.begin(), vars.end(), v) != vars.end();
}

std::size_t IneqSystem::index_of(const std::string& v) const {
  auto it = std::find(vars.begin(), vars.end(), v);
  if (it == vars.end()) fail(ErrorKind::UnknownVariable, "rate variable '" + v + "' not in system");
  return static_cast<std::size_t>(it - vars.begin());
}

void IneqSystem::add_var(const std::string& v) {
  if (!has_var(v)) vars.push_back(v);
}

void IneqSystem::add(LinIneq q) {
  for (const auto& [v, c] : q.coeffs)
    if (!has_var(v)) fail(ErrorKind::UnknownVariable, "rate variable '" + v + "' not in system");
  ineqs.push_back(std::move(q));
}

LinIneq le(Coeffs c, double value, std::string label) {
  LinIneq q;
  q.coeffs = std::move(c);
  q.value = value;
  q.label = std::move(label);
  return q;
}

LinIneq le(Coeffs c, InfoExpr rhs, std::string label) {
  LinIneq q;
  q.coeffs = std::move(c);
  q.rhs = std::move(rhs);
  q.label = std::move(label);
  return q;
}

LinIneq eq(Coeffs c, InfoExpr rhs, std::string label) {
  LinIneq q = le(std::move(c), std::move(rhs), std::move(label));
  q.rel = Rel::Eq;
  return q;
}

LinIneq normalized(const LinIneq& q, const EqualitySet* eqs) {
  LinIneq out = q;
  if (eqs) out.rhs = eqs->normal_form(q.rhs);
  if (q.coeffs.empty()) return out;
  Rational lead = q.coeffs.begin()->second;
  Rational s = 1 / abs_r(lead);
  if (q.rel == Rel::Eq && lead < 0) s = -s;
  for (auto& [v, c] : out.coeffs) c *= s;
  out.rhs *= s;
  out.value *= to_double(s);
  return out;
}

std::string canonical_key(const LinIneq& q, bool symbolic, const EqualitySet* eqs) {
  LinIneq n = normalized(q, eqs);
  std::string key = n.lhs_str() + (n.rel == Rel::Le ? "<=" : "=");
  if (symbolic) key += n.rhs.str();
  return key;
}

void dedup(IneqSystem& sys, const EqualitySet* eqs) {
  std::vector<LinIneq> out;
  std::map<std::string, std::size_t> seen;
  for (const auto& q : sys.ineqs) {
    if (trivially_true(q, sys.symbolic, eqs)) continue;
    std::string key = canonical_key(q, sys.symbolic, eqs);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(key, out.size());
      out.push_back(q);
      continue;
    }
    if (sys.symbolic || q.rel == Rel::Eq) continue;
    // Numeric duplicate: keep the tighter one.
    LinIneq a = normalized(out[it->second]), b = normalized(q);
    if (b.value < a.value) out[it->second] = q;
  }
  sys.ineqs = std::move(out);
}

IneqSystem substitute_equality(const IneqSystem& sys, const LinIneq& e, const std::string& var,
                               const EqualitySet* eqs) {
  if (e.rel != Rel::Eq) fail(ErrorKind::InvalidArgument, "substitution needs an equality");
  Rational c = e.coeff(var);
  if (c == 0) fail(ErrorKind::ZeroCoefficient, "equality has no coefficient on " + var);
  if (!sys.has_var(var)) return sys;
  IneqSystem out;
  out.symbolic = sys.symbolic;
  for (const auto& v : sys.vars)
    if (v != var) out.vars.push_back(v);
  std::vector<LinIneq> rows = sys.ineqs;
  rows.push_back(nonneg(var));
  for (auto q : rows) {
    Rational d = q.coeff(var);
    if (d != 0) add_scaled(q, e, -d / c);
    out.ineqs.push_back(std::move(q));
  }
  dedup(out, eqs);
  return out;
}

IneqSystem fm_eliminate(const IneqSystem& sys, const std::string& var, const EqualitySet* eqs) {
  if (!sys.has_var(var)) return sys;
  for (const auto& q : sys.ineqs)
    if (q.rel == Rel::Eq && q.has(var)) return substitute_equality(sys, q, var, eqs);

  std::vector<LinIneq> pos, neg;
  IneqSystem out;
  out.symbolic = sys.symbolic;
  for (const auto& v : sys.vars)
    if (v != var) out.vars.push_back(v);
  std::vector<LinIneq> rows = sys.ineqs;
  rows.push_back(nonneg(var));
  for (auto& q : rows) {
    Rational c = q.coeff(var);
    if (c > 0)
      pos.push_back(q);
    else if (c < 0)
      neg.push_back(q);
    else
      out.ineqs.push_back(q);
  }
  for (const auto& p : pos)
    for (const auto& n : neg) {
      LinIneq comb;
      comb.label = p.label + "+" + n.label;
      comb.background = p.background && n.background;
      add_scaled(comb, p, 1 / p.coeff(var));
      add_scaled(comb, n, 1 / -n.coeff(var));
      comb.coeffs.erase(var);
      out.ineqs.push_back(std::move(comb));
    }
  dedup(out, eqs);
  return out;
}

IneqSystem apply_rate_transfer(const IneqSystem& sys, const std::vector<Transfer>& transfers,
                               bool zero_source) {
  std::set<std::string> slacks;
  for (const auto& t : transfers) {
    if (t.source == t.dest) fail(ErrorKind::InvalidArgument, "transfer source equals destination");
    if (sys.has_var(t.slack) || !slacks.insert(t.slack).second)
      fail(ErrorKind::DuplicateSlackName, "slack name '" + t.slack + "' already in use");
    if (!sys.has_var(t.source)) fail(ErrorKind::UnknownVariable, "transfer source " + t.source);
  }
  // A destination missing from the system was identically zero before.
  std::vector<std::string> fresh;
  for (const auto& t : transfers)
    if (!sys.has_var(t.dest) && std::find(fresh.begin(), fresh.end(), t.dest) == fresh.end()) {
      if (std::any_of(transfers.begin(), transfers.end(), [&](const Transfer& o) { return o.source == t.dest; }))
        fail(ErrorKind::UnknownVariable, "transfer source " + t.dest);
      fresh.push_back(t.dest);
    }
  // Old variable expressed in new variables.
  std::map<std::string, Coeffs> old;
  for (const auto& v : sys.vars) old[v][v] = 1;
  std::set<std::string> zeroed;
  for (const auto& t : transfers) {
    if (zero_source && zeroed.insert(t.source).second) old[t.source].erase(t.source);
    old[t.source][t.slack] += 1;
    old[t.dest][t.slack] -= 1;
  }
  IneqSystem out;
  out.symbolic = sys.symbolic;
  for (const auto& v : sys.vars)
    if (!zeroed.count(v)) out.vars.push_back(v);
  for (const auto& v : fresh) {
    out.vars.push_back(v);
    old[v][v] = 1;
  }
  for (const auto& t : transfers) out.vars.push_back(t.slack);

  auto rewrite = [&](const Coeffs& cs) {
    Coeffs r;
    for (const auto& [v, c] : cs)
      for (const auto& [w, k] : old[v]) {
        r[w] += c * k;
        if (r[w] == 0) r.erase(w);
      }
    return r;
  };
  for (const auto& q : sys.ineqs) {
    LinIneq n = q;
    n.coeffs = rewrite(q.coeffs);
    out.ineqs.push_back(std::move(n));
  }
  // Each destination must have been nonnegative before the transfer.
  std::set<std::string> dests;
  for (const auto& t : transfers) dests.insert(t.dest);
  for (const auto& t : transfers) {
    if (!dests.erase(t.dest)) continue;
    LinIneq q;
    q.coeffs = rewrite({{t.dest, Rational(-1)}});
    q.label = t.dest + "_old>=0";
    if (std::find(fresh.begin(), fresh.end(), t.dest) != fresh.end()) {
      q.rel = Rel::Eq;
      q.label = t.dest + "_old=0";
    }
    out.ineqs.push_back(std::move(q));
  }
  dedup(out);
  return out;
}

IneqSystem set_zero(const IneqSystem& sys, const std::vector<std::string>& vars) {
  IneqSystem out = sys;
  for (const auto& v : vars) {
    if (!out.has_var(v)) fail(ErrorKind::UnknownVariable, "rate variable '" + v + "' not in system");
    out.vars.erase(std::find(out.vars.begin(), out.vars.end(), v));
    for (auto& q : out.ineqs) q.coeffs.erase(v);
  }
  dedup(out);
  return out;
}

std::optional<double> support(const IneqSystem& sys, const std::map<std::string, double>& w) {
  Dense D = to_dense(sys);
  if (D.trivially_infeasible) return std::nullopt;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.vars.size()));
  for (const auto& [v, x] : w) c(static_cast<Eigen::Index>(sys.index_of(v))) = x;
  LpResult r = lp_maximize(c, D.A, D.b, D.Aeq, D.beq);
  if (r.status == LpStatus::Infeasible) return std::nullopt;
  if (r.status == LpStatus::Unbounded) return std::numeric_limits<double>::infinity();
  return r.value;
}

VPolytope vertices(const IneqSystem& sys, double tol) {
  if (sys.symbolic) fail(ErrorKind::InvalidArgument, "vertex enumeration needs a numeric system");
  const int d = static_cast<int>(sys.vars.size());
  if (d > kMaxVertexDim) fail(ErrorKind::DimensionTooLarge, "vertex enumeration limited to dimension 6");
  VPolytope out;
  out.vars = sys.vars;

  std::map<std::string, double> ones;
  for (const auto& v : sys.vars) ones[v] = 1.0;
  auto sup = support(sys, ones);
  if (!sup) return out;
  if (std::isinf(*sup)) fail(ErrorKind::UnboundedRegion, "region is unbounded in the nonnegative orthant");

  Dense D = to_dense(sys);
  const Eigen::Index m0 = D.A.rows(), me = D.Aeq.rows();
  const Eigen::Index m = m0 + 2 * me + d;
  Eigen::MatrixXd A(m, d);
  Eigen::VectorXd b(m);
  A.topRows(m0) = D.A;
  b.head(m0) = D.b;
  A.middleRows(m0, me) = D.Aeq;
  b.segment(m0, me) = D.beq;
  A.middleRows(m0 + me, me) = -D.Aeq;
  b.segment(m0 + me, me) = -D.beq;
  A.bottomRows(d) = -Eigen::MatrixXd::Identity(d, d);
  b.tail(d).setZero();

  if (d == 0) {
    out.vertices.emplace_back(0);
    return out;
  }
  // Count bases up front so a pathological system fails loudly.
  double combos = 1.0;
  for (int k = 0; k < d; ++k) combos = combos * static_cast<double>(m - k) / (k + 1);
  if (combos > 2e7) fail(ErrorKind::TooLarge, "too many candidate bases for vertex enumeration");

  std::vector<int> idx(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) idx[static_cast<std::size_t>(k)] = k;
  Eigen::MatrixXd M(d, d);
  Eigen::VectorXd rhs(d);
  while (true) {
    for (int k = 0; k < d; ++k) {
      M.row(k) = A.row(idx[static_cast<std::size_t>(k)]);
      rhs(k) = b(idx[static_cast<std::size_t>(k)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-12);
    if (lu.rank() == d) {
      Eigen::VectorXd x = lu.solve(rhs);
      if ((A * x - b).maxCoeff() <= tol) {
        bool dup = false;
        for (const auto& v : out.vertices)
          if ((v - x).cwiseAbs().maxCoeff() <= tol) {
            dup = true;
            break;
          }
        if (!dup) out.vertices.push_back(x);
      }
    }
    int k = d - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - d + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  for (auto& v : out.vertices)
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v(i)) < 1e-15) v(i) = 0.0;
  std::sort(out.vertices.begin(), out.vertices.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return out;
}

bool contains(const IneqSystem& sys, const std::vector<std::string>& vars, const Eigen::VectorXd& x,
              double tol) {
  std::map<std::string, double> at;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    double xi = x(static_cast<Eigen::Index>(i));
    if (xi < -tol) return false;
    at[vars[i]] = xi;
  }
  for (const auto& v : sys.vars)
    if (!at.count(v)) fail(ErrorKind::DimensionMismatch, "point has no coordinate for " + v);
  for (const auto& q : sys.ineqs) {
    double lhs = 0.0;
    for (const auto& [v, c] : q.coeffs) lhs += to_double(c) * at[v];
    double r = lhs - q.value;
    if (q.rel == Rel::Eq ? std::abs(r) > tol : r > tol) return false;
  }
  return true;
}

bool contains(const IneqSystem& sys, const VPolytope& p, double tol) {
  for (const auto& v : p.vertices)
    if (!contains(sys, p.vars, v, tol)) return false;
  return true;
}

bool region_equal(const IneqSystem& a, const IneqSystem& b, double tol) {
  std::set<std::string> va(a.vars.begin(), a.vars.end()), vb(b.vars.begin(), b.vars.end());
  if (va != vb) fail(ErrorKind::DimensionMismatch, "regions are over different rate variables");
  return contains(b, vertices(a, tol), tol) && contains(a, vertices(b, tol), tol);
}

IneqSystem remove_redundant(const IneqSystem& sys, double tol) {
  IneqSystem cur = sys;
  dedup(cur);
  for (std::size_t i = 0; i < cur.ineqs.size();) {
    const LinIneq& q = cur.ineqs[i];
    if (q.rel == Rel::Eq) {
      ++i;
      continue;
    }
    Dense D = to_dense(cur, static_cast<int>(i));
    if (D.trivially_infeasible) return cur;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cur.vars.size()));
    for (const auto& [v, k] : q.coeffs) c(static_cast<Eigen::Index>(cur.index_of(v))) = to_double(k);
    LpResult r = lp_maximize(c, D.A, D.b, D.Aeq, D.beq);
    if (r.status == LpStatus::Infeasible) return cur;
    if (r.status == LpStatus::Optimal && r.value <= q.value + tol)
      cur.ineqs.erase(cur.ineqs.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  return cur;
}

}  // namespace wtap
