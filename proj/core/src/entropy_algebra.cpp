#include "wtap/entropy_algebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "wtap/error.hpp"

namespace wtap {

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

Atom make_atom(VarSet names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

std::string atom_string(const Atom& a) {
  std::string s = "H(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + a[i];
  return s + ")";
}

InfoExpr InfoExpr::entropy(const VarSet& set) {
  InfoExpr e;
  Atom a = make_atom(set);
  if (!a.empty()) e.terms_[a] = 1;
  return e;
}

InfoExpr InfoExpr::constant(const Rational& c) {
  InfoExpr e;
  e.constant_ = c;
  return e;
}

void InfoExpr::add_term(const Atom& atom, const Rational& coeff) {
  if (coeff == 0 || atom.empty()) return;
  auto it = terms_.find(atom);
  if (it == terms_.end()) {
    terms_.emplace(atom, coeff);
    return;
  }
  it->second += coeff;
  if (it->second == 0) terms_.erase(it);
}

InfoExpr& InfoExpr::operator+=(const InfoExpr& o) {
  for (const auto& [a, c] : o.terms_) add_term(a, c);
  constant_ += o.constant_;
  return *this;
}

InfoExpr& InfoExpr::operator-=(const InfoExpr& o) {
  for (const auto& [a, c] : o.terms_) add_term(a, -c);
  constant_ -= o.constant_;
  return *this;
}

InfoExpr& InfoExpr::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [a, c] : terms_) c *= s;
  constant_ *= s;
  return *this;
}

bool operator<(const InfoExpr& a, const InfoExpr& b) {
  if (a.constant_ != b.constant_) return a.constant_ < b.constant_;
  return a.terms_ < b.terms_;
}


std::string InfoExpr::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, c] : terms_) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    if (mag != 1) os << mag << "*";
    os << atom_string(a);
    first = false;
  }
  if (constant_ != 0 || first) {
    if (first)
      os << constant_;
    else
      os << (constant_ < 0 ? " - " : " + ") << (constant_ < 0 ? Rational(-constant_) : constant_);
  }
  return os.str();
}

InfoExpr expand_mi(const VarSet& a, const VarSet& b, const VarSet& c) {
  if (a.empty() || b.empty()) fail(ErrorKind::EmptyArgument, "mutual information needs nonempty A and B");
  std::set<std::string> seen;
  for (const VarSet* s : {&a, &b, &c})
    for (const auto& n : *s)
      if (!seen.insert(n).second)
        fail(ErrorKind::OverlappingSets, "variable '" + n + "' repeated in I(A;B|C)");
  VarSet ac = a, bc = b, abc = a;
  ac.insert(ac.end(), c.begin(), c.end());
  bc.insert(bc.end(), c.begin(), c.end());
  abc.insert(abc.end(), b.begin(), b.end());
  abc.insert(abc.end(), c.begin(), c.end());
  InfoExpr e = InfoExpr::entropy(ac);
  e += InfoExpr::entropy(bc);
  e -= InfoExpr::entropy(abc);
  e -= InfoExpr::entropy(c);
  return e;
}

double EntropyCache::entropy(const Atom& a) {
  auto it = cache_.find(a);
  if (it != cache_.end()) return it->second;
  double h = table_->entropy(a);
  cache_.emplace(a, h);
  return h;
}

double EntropyCache::evaluate(const InfoExpr& e) {
  double v = to_double(e.constant_term());
  for (const auto& [a, c] : e.terms()) v += to_double(c) * entropy(a);
  return v;
}

double evaluate(const InfoExpr& e, const ProbTable& t) {
  EntropyCache cache(t);
  return cache.evaluate(e);
}

namespace {

bool atom_priority_less(const Atom& x, const Atom& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return x < y;
}

}  // namespace

EqualitySet::EqualitySet(std::vector<InfoExpr> equalities, std::string ground)
    : eqs_(std::move(equalities)), ground_(std::move(ground)) {
  std::set<Atom> all;
  for (const auto& e : eqs_)
    for (const auto& [a, c] : e.terms()) all.insert(a);
  atoms_.assign(all.begin(), all.end());
  std::sort(atoms_.begin(), atoms_.end(), atom_priority_less);
  for (std::size_t i = 0; i < atoms_.size(); ++i) col_of_[atoms_[i]] = static_cast<int>(i);

  for (const auto& e : eqs_) {
    Row row = to_row(e, false);
    if (e.constant_term() != 0)
      fail(ErrorKind::InvalidArgument, "equalities must not carry a constant term");
    reduce(row);
    if (row.empty()) continue;
    int pivot = row.rbegin()->first;
    Rational inv = 1 / row.rbegin()->second;
    for (auto& [c, v] : row) v *= inv;
    for (auto& [p, other] : rows_) {
      auto it = other.find(pivot);
      if (it == other.end()) continue;
      Rational f = it->second;
      for (const auto& [c, v] : row) {
        auto jt = other.find(c);
        if (jt == other.end()) {
          other.emplace(c, -f * v);
        } else {
          jt->second -= f * v;
          if (jt->second == 0) other.erase(jt);
        }
      }
    }
    rows_.emplace(pivot, std::move(row));
  }
}

int EqualitySet::column(const Atom& a) const {
  auto it = col_of_.find(a);
  return it == col_of_.end() ? -1 : it->second;
}

EqualitySet::Row EqualitySet::to_row(const InfoExpr& e, bool) {
  Row row;
  for (const auto& [a, c] : e.terms()) row[column(a)] = c;
  return row;
}

void EqualitySet::reduce(Row& row) const {
  std::vector<int> pivots;
  for (const auto& [c, v] : row)
    if (rows_.count(c)) pivots.push_back(c);
  for (int p : pivots) {
    auto it = row.find(p);
    if (it == row.end()) continue;
    Rational f = it->second;
    for (const auto& [c, v] : rows_.at(p)) {
      auto jt = row.find(c);
      if (jt == row.end()) {
        row.emplace(c, -f * v);
      } else {
        jt->second -= f * v;
        if (jt->second == 0) row.erase(jt);
      }
    }
  }
}

InfoExpr EqualitySet::normal_form(const InfoExpr& e) const {
  if (rows_.empty()) return e;
  Row row;
  InfoExpr out = InfoExpr::constant(e.constant_term());
  for (const auto& [a, c] : e.terms()) {
    int col = column(a);
    if (col < 0)
      out.add_term(a, c);
    else
      row[col] = c;
  }
  reduce(row);
  for (const auto& [c, v] : row) out.add_term(atoms_[static_cast<std::size_t>(c)], v);
  return out;
}

bool exprs_equal(const InfoExpr& e1, const InfoExpr& e2, const EqualitySet& eqs) {
  return eqs.in_span(e1 - e2);
}

}  // namespace wtap
