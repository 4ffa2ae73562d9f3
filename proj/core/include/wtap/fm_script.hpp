#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wtap/entropy_algebra.hpp"
#include "wtap/polytope.hpp"
#include "wtap/rng.hpp"
#include "wtap/text_doc.hpp"

namespace wtap {

// Constraint text such as
//   Rp1 + D1 + 2*L1 <= min_j I(U;Yj|Q) + 2I(V1;Y1|U) - H(Z)
// Rate variables and information terms may appear on either side; a min_j
// marker expands the row into one copy per j in {1,2}, rewriting every
// variable name ending in 'j' inside I(...)/H(...).
std::vector<LinIneq> parse_constraint(const std::string& text, const std::set<std::string>& rate_vars,
                                      const std::string& source = "<string>", std::size_t line = 0);
InfoExpr parse_info_expr(const std::string& text, const std::string& source = "<string>",
                         std::size_t line = 0);

struct ScriptStep {
  enum class Kind { Eliminate, Transfer, TransferZero, Drop, Check };
  Kind kind = Kind::Check;
  std::string var;                 // Eliminate
  std::vector<Transfer> transfers; // Transfer, TransferZero
  bool constant_drop = false;      // Drop: "constant" or "redundant"
  std::vector<LinIneq> drop;
  std::string check;               // Check: system name
  std::string text;
  std::size_t line = 0;
};

struct ElimScript {
  std::vector<std::string> vars;
  std::map<std::string, IneqSystem> systems;
  std::vector<LinIneq> background;
  std::string start, target, factorization;
  std::vector<ScriptStep> steps;
};

ElimScript parse_elim_script(const TextDoc& doc);
ElimScript load_elim_script(const std::string& path);

// Rows reduced modulo the system's own equalities (pivot on the last variable
// in `order`), scaled, and keyed with the rhs in normal form. Rows flagged as
// background, rows matching `background`, and bare nonnegativity rows are
// left out.
std::map<std::string, std::string> canonical_rows(const IneqSystem& sys, const EqualitySet& eqs,
                                                  const std::vector<std::string>& order,
                                                  const std::vector<LinIneq>& background = {});

struct StepReport {
  std::size_t index = 0;
  std::size_t line = 0;
  std::string step;
  bool ok = true;
  std::string note;
  std::vector<std::string> missing;  // expected but not produced
  std::vector<std::string> extra;    // produced but not expected
};

struct ScriptReport {
  bool pass = true;
  long first_failure = -1;
  std::vector<StepReport> steps;
  IneqSystem final_system;
};

struct VerifyOptions {
  std::map<std::string, IneqSystem> named;
  std::vector<LinIneq> background;
  std::vector<std::string> order;
  // Draws a joint consistent with the factorization; drop steps are checked
  // numerically when set.
  std::function<ProbTable(Rng&)> sampler;
  int drop_samples = 24;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  bool keep_going = false;
};

ScriptReport verify_elimination_script(const IneqSystem& start, const std::vector<ScriptStep>& script,
                                       const IneqSystem& target, const EqualitySet& eqs,
                                       const VerifyOptions& opt = {});

// Convenience wrapper: loads the script, derives equalities from the named
// factorization in `factorization_file`, and samples joints with binary
// alphabets.
ScriptReport run_elim_script(const ElimScript& s, const std::string& factorization_file,
                             std::uint64_t seed, bool keep_going = false);

std::string format_report(const ScriptReport& r);

}  // namespace wtap
