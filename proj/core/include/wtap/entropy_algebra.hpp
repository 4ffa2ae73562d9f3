#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "wtap/prob_table.hpp"

namespace wtap {

using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);
std::string to_string(const Rational& r);

// Sorted, duplicate-free, nonempty set of variable names.
using Atom = VarSet;
Atom make_atom(VarSet names);
std::string atom_string(const Atom& a);

// Rational combination of joint-entropy atoms plus a rational constant.
class InfoExpr {
 public:
  InfoExpr() = default;
  static InfoExpr entropy(const VarSet& set);
  static InfoExpr constant(const Rational& c);

  const std::map<Atom, Rational>& terms() const { return terms_; }
  const Rational& constant_term() const { return constant_; }

  void add_term(const Atom& atom, const Rational& coeff);
  InfoExpr& operator+=(const InfoExpr& o);
  InfoExpr& operator-=(const InfoExpr& o);
  InfoExpr& operator*=(const Rational& s);

  bool is_zero() const { return terms_.empty() && constant_ == 0; }
  bool is_constant() const { return terms_.empty(); }
  std::string str() const;

  friend bool operator==(const InfoExpr& a, const InfoExpr& b) {
    return a.constant_ == b.constant_ && a.terms_ == b.terms_;
  }
  friend bool operator<(const InfoExpr& a, const InfoExpr& b);
  // Hidden friends, so generic operators elsewhere never see a Rational overload.
  friend InfoExpr operator+(InfoExpr a, const InfoExpr& b) { return a += b; }
  friend InfoExpr operator-(InfoExpr a, const InfoExpr& b) { return a -= b; }
  friend InfoExpr operator*(const Rational& s, InfoExpr a) { return a *= s; }

 private:
  std::map<Atom, Rational> terms_;
  Rational constant_ = 0;
};


// I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C).
InfoExpr expand_mi(const VarSet& a, const VarSet& b, const VarSet& c = {});

// Memoized numeric evaluation of entropy atoms on one joint table.
class EntropyCache {
 public:
  explicit EntropyCache(const ProbTable& t) : table_(&t) {}
  double entropy(const Atom& a);
  double evaluate(const InfoExpr& e);

 private:
  const ProbTable* table_;
  std::map<Atom, double> cache_;
};

double evaluate(const InfoExpr& e, const ProbTable& t);

// Linear span of entropy identities asserted to vanish. Normal forms are
// taken against the reduced row-echelon basis, so two expressions are equal
// modulo the set exactly when their normal forms coincide.
class EqualitySet {
 public:
  EqualitySet() = default;
  EqualitySet(std::vector<InfoExpr> equalities, std::string ground = {});

  const std::vector<InfoExpr>& equalities() const { return eqs_; }
  const std::string& ground() const { return ground_; }
  std::size_t rank() const { return rows_.size(); }

  InfoExpr normal_form(const InfoExpr& e) const;
  bool in_span(const InfoExpr& e) const { return normal_form(e).is_zero(); }

 private:
  using Row = std::map<int, Rational>;
  int column(const Atom& a) const;
  Row to_row(const InfoExpr& e, bool extend);
  void reduce(Row& row) const;

  std::vector<InfoExpr> eqs_;
  std::string ground_;
  std::map<Atom, int> col_of_;
  std::vector<Atom> atoms_;
  std::map<int, Row> rows_;  // pivot column -> row with unit pivot
};

bool exprs_equal(const InfoExpr& e1, const InfoExpr& e2, const EqualitySet& eqs);

}  // namespace wtap
