#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wtap/entropy_algebra.hpp"

namespace wtap {

using Coeffs = std::map<std::string, Rational>;

enum class Rel { Le, Eq };

// sum coeffs[v]*v (<= | =) rhs. Symbolic systems carry the rhs as an
// InfoExpr; numeric ones use `value`. Both are combined alongside each other.
struct LinIneq {
  Coeffs coeffs;
  InfoExpr rhs;
  double value = 0.0;
  Rel rel = Rel::Le;
  std::string label;
  bool background = false;  // kept for elimination, ignored when comparing

  Rational coeff(const std::string& v) const;
  bool has(const std::string& v) const { return coeffs.count(v) > 0; }
  bool is_trivial() const { return coeffs.empty(); }
  std::string lhs_str() const;
  std::string str(bool symbolic) const;
};

// All variables are implicitly nonnegative; operations that remove a variable
// account for its own nonnegativity before removing it.
struct IneqSystem {
  std::vector<std::string> vars;
  std::vector<LinIneq> ineqs;
  bool symbolic = false;

  bool has_var(const std::string& v) const;
  std::size_t index_of(const std::string& v) const;
  void add(LinIneq q);
  void add_var(const std::string& v);
};

// Builders for short hand-written systems.
LinIneq le(Coeffs c, double value, std::string label = {});
LinIneq le(Coeffs c, InfoExpr rhs, std::string label = {});
LinIneq eq(Coeffs c, InfoExpr rhs, std::string label = {});

// Scale so the first nonzero coefficient has magnitude one (and is positive for
// equalities); the rhs is put in normal form when an equality set is given.
LinIneq normalized(const LinIneq& q, const EqualitySet* eqs = nullptr);
std::string canonical_key(const LinIneq& q, bool symbolic, const EqualitySet* eqs = nullptr);

// Drops syntactic duplicates; numeric systems keep the tightest copy and drop
// trivially true rows.
void dedup(IneqSystem& sys, const EqualitySet* eqs = nullptr);

IneqSystem substitute_equality(const IneqSystem& sys, const LinIneq& eq, const std::string& var,
                               const EqualitySet* eqs = nullptr);
IneqSystem fm_eliminate(const IneqSystem& sys, const std::string& var, const EqualitySet* eqs = nullptr);

struct Transfer {
  std::string source, dest, slack;
};
// old_source = source + sum of its slacks, old_dest = dest - slack, with
// slack <= dest keeping the original destination nonnegative. A destination
// absent from `sys` is added with old_dest = 0, so it equals its slacks. When
// zero_source is set the source variable is replaced entirely by its slacks.
IneqSystem apply_rate_transfer(const IneqSystem& sys, const std::vector<Transfer>& transfers,
                               bool zero_source = false);

IneqSystem set_zero(const IneqSystem& sys, const std::vector<std::string>& vars);

struct VPolytope {
  std::vector<std::string> vars;
  std::vector<Eigen::VectorXd> vertices;
  int dim() const { return static_cast<int>(vars.size()); }
  bool empty() const { return vertices.empty(); }
};

inline constexpr int kMaxVertexDim = 6;

VPolytope vertices(const IneqSystem& sys, double tol = 1e-9);

// Point given in the order of `vars`; names missing from sys must be zero.
bool contains(const IneqSystem& sys, const std::vector<std::string>& vars, const Eigen::VectorXd& x,
              double tol);
bool contains(const IneqSystem& sys, const VPolytope& p, double tol);
bool region_equal(const IneqSystem& a, const IneqSystem& b, double tol = 1e-9);

// LP maximum of sum w[v]*v over the system; nullopt when infeasible,
// +inf when unbounded.
std::optional<double> support(const IneqSystem& sys, const std::map<std::string, double>& w);

// Removes constraints implied by the rest (LP check), one at a time.
IneqSystem remove_redundant(const IneqSystem& sys, double tol = 1e-9);

// Numeric copy of a symbolic system.
template <class Eval>
IneqSystem instantiate(const IneqSystem& sys, Eval&& eval) {
  IneqSystem out = sys;
  out.symbolic = false;
  for (auto& q : out.ineqs) q.value = eval(q.rhs);
  return out;
}

}  // namespace wtap
