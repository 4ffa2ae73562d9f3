#include "wtap/prob_table.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wtap/error.hpp"

namespace wtap {

std::size_t cell_count(const std::vector<VarId>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) {
    if (v.card == 0) fail(ErrorKind::ShapeMismatch, "variable " + v.name + " has cardinality 0");
    if (n > kMaxCells / v.card)
      fail(ErrorKind::TooLarge, "alphabet product exceeds " + std::to_string(kMaxCells) + " cells");
    n *= v.card;
  }
  return n;
}

ProbTable::ProbTable(std::vector<VarId> vars, std::vector<double> probs)
    : vars_(std::move(vars)), probs_(std::move(probs)) {
  std::set<std::string> names;
  for (const auto& v : vars_)
    if (!names.insert(v.name).second) fail(ErrorKind::ShapeMismatch, "duplicate variable " + v.name);
  if (cell_count(vars_) != probs_.size())
    fail(ErrorKind::ShapeMismatch, "tensor has " + std::to_string(probs_.size()) +
                                       " entries, shape needs " + std::to_string(cell_count(vars_)));
}

ProbTable ProbTable::from_function(std::vector<VarId> vars,
                                   const std::function<double(const std::vector<std::size_t>&)>& fn) {
  std::size_t n = cell_count(vars);
  std::vector<double> p(n);
  std::vector<std::size_t> idx(vars.size(), 0);
  for (std::size_t cell = 0; cell < n; ++cell) {
    p[cell] = fn(idx);
    for (std::size_t k = vars.size(); k-- > 0;) {
      if (++idx[k] < vars[k].card) break;
      idx[k] = 0;
    }
  }
  return ProbTable(std::move(vars), std::move(p));
}

bool ProbTable::has(const std::string& name) const {
  return std::any_of(vars_.begin(), vars_.end(), [&](const VarId& v) { return v.name == name; });
}

std::size_t ProbTable::position(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  fail(ErrorKind::UnknownVariable, "variable '" + name + "' not in table");
}

double ProbTable::sum() const {
  double s = 0.0;
  for (double p : probs_) s += p;
  return s;
}

ProbTable ProbTable::marginal(const VarSet& keep) const {
  std::vector<std::size_t> pos;
  std::vector<VarId> out_vars;
  for (const auto& name : keep) {
    pos.push_back(position(name));
    out_vars.push_back(vars_[pos.back()]);
  }
  std::size_t r = vars_.size();
  // Stride of each source axis inside the output tensor (0 when dropped).
  std::vector<std::size_t> out_stride(r, 0);
  std::size_t s = 1;
  for (std::size_t k = pos.size(); k-- > 0;) {
    out_stride[pos[k]] = s;
    s *= out_vars[k].card;
  }
  std::vector<double> out(s, 0.0);
  std::vector<std::size_t> idx(r, 0);
  std::size_t target = 0;
  for (std::size_t cell = 0; cell < probs_.size(); ++cell) {
    out[target] += probs_[cell];
    for (std::size_t k = r; k-- > 0;) {
      ++idx[k];
      target += out_stride[k];
      if (idx[k] < vars_[k].card) break;
      target -= out_stride[k] * idx[k];
      idx[k] = 0;
    }
  }
  return ProbTable(std::move(out_vars), std::move(out));
}

double ProbTable::entropy(const VarSet& set) const {
  if (set.empty()) return 0.0;
  ProbTable m = marginal(set);
  double h = 0.0;
  for (double p : m.probs_)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

void validate_table(const ProbTable& t) {
  if (cell_count(t.vars()) != t.size()) fail(ErrorKind::ShapeMismatch, "tensor shape mismatch");
  for (double p : t.probs()) {
    if (!std::isfinite(p)) fail(ErrorKind::NegativeMass, "non-finite entry");
    if (p < kNegativeMassTol) fail(ErrorKind::NegativeMass, "entry " + std::to_string(p) + " < 0");
  }
  double s = t.sum();
  if (std::abs(s - 1.0) > kNormTol)
    fail(ErrorKind::NotNormalized, "entries sum to " + std::to_string(s));
}

namespace {

void check_sets(const ProbTable& t, const VarSet& a, const VarSet& b, const VarSet& c) {
  std::set<std::string> seen;
  for (const VarSet* s : {&a, &b, &c})
    for (const auto& n : *s) {
      t.position(n);
      if (!seen.insert(n).second)
        fail(ErrorKind::OverlappingSets, "variable '" + n + "' appears in more than one argument");
    }
}

VarSet join(const VarSet& x, const VarSet& y) {
  VarSet out = x;
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

}  // namespace

double mutual_information(const ProbTable& t, const VarSet& a, const VarSet& b, const VarSet& c) {
  check_sets(t, a, b, c);
  if (a.empty() || b.empty()) return 0.0;
  double v = t.entropy(join(a, c)) + t.entropy(join(b, c)) - t.entropy(join(join(a, b), c)) -
             t.entropy(c);
  return v < 0.0 ? 0.0 : v;
}

bool check_markov(const ProbTable& t, const VarSet& chain, double tol) {
  for (const auto& n : chain) t.position(n);
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
    VarSet past(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(i));
    VarSet future(chain.begin() + static_cast<std::ptrdiff_t>(i) + 1, chain.end());
    if (mutual_information(t, past, future, {chain[i]}) > tol) return false;
  }
  return true;
}

}  // namespace wtap
