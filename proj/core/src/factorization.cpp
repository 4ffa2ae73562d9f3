#include "wtap/factorization.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "wtap/error.hpp"

namespace wtap {

namespace {

void check_acyclic(const Factorization& f) {
  std::map<std::string, int> state;  // 0 new, 1 active, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    int& s = state[n];
    if (s == 2) return;
    if (s == 1) fail(ErrorKind::CyclicStructure, "cycle through node " + n);
    s = 1;
    auto it = f.parents.find(n);
    if (it != f.parents.end())
      for (const auto& p : it->second) visit(p);
    state[n] = 2;
  };
  for (const auto& n : f.nodes) visit(n);
}

std::vector<VarSet> expand_family(const Factorization::Family& fam) {
  if (!fam.all_subsets) return {fam.names};
  std::vector<VarSet> out;
  std::size_t n = fam.names.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    VarSet s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(fam.names[i]);
    out.push_back(s);
  }
  return out;
}

}  // namespace

bool d_separated(const Factorization& f, const VarSet& a, const VarSet& b, const VarSet& c) {
  check_acyclic(f);
  std::set<std::string> known(f.nodes.begin(), f.nodes.end());
  for (const VarSet* s : {&a, &b, &c})
    for (const auto& n : *s)
      if (!known.count(n)) fail(ErrorKind::UnknownVariable, "node '" + n + "' not in structure");

  // Ancestral closure of A u B u C.
  std::set<std::string> anc;
  std::vector<std::string> stack;
  for (const VarSet* s : {&a, &b, &c}) stack.insert(stack.end(), s->begin(), s->end());
  while (!stack.empty()) {
    std::string n = stack.back();
    stack.pop_back();
    if (!anc.insert(n).second) continue;
    auto it = f.parents.find(n);
    if (it != f.parents.end())
      for (const auto& p : it->second) stack.push_back(p);
  }
  // Moral graph on the ancestral set.
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& n : anc) {
    adj[n];
    auto it = f.parents.find(n);
    if (it == f.parents.end()) continue;
    const auto& ps = it->second;
    for (const auto& p : ps) {
      adj[n].insert(p);
      adj[p].insert(n);
    }
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        adj[ps[i]].insert(ps[j]);
        adj[ps[j]].insert(ps[i]);
      }
  }
  std::set<std::string> blocked(c.begin(), c.end());
  std::set<std::string> targets(b.begin(), b.end());
  std::set<std::string> seen;
  stack.assign(a.begin(), a.end());
  while (!stack.empty()) {
    std::string n = stack.back();
    stack.pop_back();
    if (blocked.count(n) || !seen.insert(n).second) continue;
    if (targets.count(n)) return false;
    for (const auto& m : adj[n]) stack.push_back(m);
  }
  return true;
}

EqualitySet derive_equalities(const Factorization& f) {
  check_acyclic(f);
  std::vector<InfoExpr> eqs;
  const auto& v = f.nodes;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (d_separated(f, {v[i]}, {v[j]}, {})) eqs.push_back(expand_mi({v[i]}, {v[j]}, {}));
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k == i || k == j) continue;
        if (d_separated(f, {v[i]}, {v[j]}, {v[k]})) eqs.push_back(expand_mi({v[i]}, {v[j]}, {v[k]}));
      }
    }
  for (const auto& g : f.grouped)
    for (const auto& a : expand_family(g.a))
      for (const auto& b : expand_family(g.b)) {
        if (!d_separated(f, a, b, g.c))
          fail(ErrorKind::ValidationError, "grouped triple is not implied by the structure " + f.name);
        eqs.push_back(expand_mi(a, b, g.c));
      }
  return EqualitySet(std::move(eqs), f.name);
}

Factorization general_structure() {
  Factorization f;
  f.name = "general";
  f.nodes = {"Q", "U", "V1", "V2", "X", "Y1", "Y2", "Z"};
  f.parents = {{"Q", {}},
               {"U", {"Q"}},
               {"V1", {"U"}},
               {"V2", {"U", "V1"}},
               {"X", {"U", "V1", "V2"}},
               {"Y1", {"X"}},
               {"Y2", {"X", "Y1"}},
               {"Z", {"X", "Y1", "Y2"}}};
  f.grouped.push_back({{{"Q"}, false}, {{"V1", "V2", "X", "Y1", "Y2", "Z"}, true}, {"U"}});
  f.grouped.push_back({{{"Q", "U", "V1", "V2"}, true}, {{"Y1", "Y2", "Z"}, true}, {"X"}});
  return f;
}

Factorization degraded_chain_structure() {
  Factorization f;
  f.name = "degraded";
  f.nodes = {"U", "X", "Y1", "Y2", "Z"};
  f.parents = {{"U", {}}, {"X", {"U"}}, {"Y1", {"X"}}, {"Y2", {"Y1"}}, {"Z", {"Y2"}}};
  f.grouped.push_back({{{"U"}, false}, {{"Y1", "Y2", "Z"}, true}, {"X"}});
  f.grouped.push_back({{{"U", "X"}, true}, {{"Y2", "Z"}, true}, {"Y1"}});
  f.grouped.push_back({{{"U", "X", "Y1"}, true}, {{"Z"}, false}, {"Y2"}});
  return f;
}

ProbTable random_factored_joint(const Factorization& f, const std::map<std::string, std::size_t>& cards,
                                Rng& rng, const std::map<std::string, double>& flatten) {
  check_acyclic(f);
  // Topological order, stable in declaration order.
  std::vector<std::string> order;
  std::set<std::string> placed;
  while (order.size() < f.nodes.size()) {
    for (const auto& n : f.nodes) {
      if (placed.count(n)) continue;
      auto it = f.parents.find(n);
      bool ready = true;
      if (it != f.parents.end())
        for (const auto& p : it->second) ready = ready && placed.count(p);
      if (ready) {
        order.push_back(n);
        placed.insert(n);
      }
    }
  }
  std::vector<VarId> vars;
  std::map<std::string, std::size_t> pos;
  for (const auto& n : order) {
    auto it = cards.find(n);
    if (it == cards.end()) fail(ErrorKind::UnknownVariable, "no cardinality for node " + n);
    pos[n] = vars.size();
    vars.push_back({n, it->second});
  }
  struct Cond {
    std::vector<std::size_t> parent_pos, parent_card;
    std::vector<std::vector<double>> rows;
  };
  std::vector<Cond> conds;
  for (const auto& n : order) {
    Cond c;
    std::size_t configs = 1;
    auto it = f.parents.find(n);
    if (it != f.parents.end())
      for (const auto& p : it->second) {
        c.parent_pos.push_back(pos[p]);
        c.parent_card.push_back(cards.at(p));
        configs *= cards.at(p);
      }
    auto fl = flatten.find(n);
    double m = fl == flatten.end() ? 0.0 : fl->second;
    for (std::size_t k = 0; k < configs; ++k) {
      auto row = rng.dirichlet(cards.at(n));
      for (auto& v : row) v = (1.0 - m) * v + m / static_cast<double>(row.size());
      c.rows.push_back(std::move(row));
    }
    conds.push_back(std::move(c));
  }
  return ProbTable::from_function(vars, [&](const std::vector<std::size_t>& idx) {
    double p = 1.0;
    for (std::size_t i = 0; i < conds.size(); ++i) {
      std::size_t cfg = 0;
      for (std::size_t k = 0; k < conds[i].parent_pos.size(); ++k)
        cfg = cfg * conds[i].parent_card[k] + idx[conds[i].parent_pos[k]];
      p *= conds[i].rows[cfg][idx[i]];
    }
    return p;
  });
}

namespace {

Factorization::Family parse_family(const std::string& text, const std::string& src, std::size_t line) {
  Factorization::Family fam;
  std::string t = text;
  auto open = t.find('{');
  if (open != std::string::npos) {
    auto close = t.find('}');
    if (close == std::string::npos) parse_error(src, line, open + 1, "unterminated '{'");
    fam.all_subsets = true;
    t = t.substr(open + 1, close - open - 1);
  }
  std::istringstream in(t);
  for (std::string tok; in >> tok;) fam.names.push_back(tok);
  return fam;
}

}  // namespace

std::vector<Factorization> parse_factorizations(const TextDoc& doc) {
  std::vector<Factorization> out;
  for (const auto& sec : doc.sections) {
    if (sec.name != "factorization") continue;
    if (sec.args.size() != 1) parse_error(doc.source, sec.line, 1, "factorization needs a name");
    Factorization f;
    f.name = sec.args[0];
    for (const auto& l : sec.lines) {
      f.nodes.push_back(l.tokens[0]);
      f.parents[l.tokens[0]] = VarSet(l.tokens.begin() + 1, l.tokens.end());
    }
    out.push_back(std::move(f));
  }
  for (const auto& sec : doc.sections) {
    if (sec.name != "grouped") continue;
    if (sec.args.size() != 1) parse_error(doc.source, sec.line, 1, "grouped needs a name");
    auto it = std::find_if(out.begin(), out.end(), [&](const Factorization& f) { return f.name == sec.args[0]; });
    if (it == out.end()) parse_error(doc.source, sec.line, 1, "unknown factorization " + sec.args[0]);
    for (const auto& l : sec.lines) {
      auto semi = l.raw.find(';');
      auto bar = l.raw.find('|');
      if (semi == std::string::npos || bar == std::string::npos || bar < semi)
        parse_error(doc.source, l.line, 1, "expected 'A ; B | C'");
      Factorization::Grouped g;
      g.a = parse_family(l.raw.substr(0, semi), doc.source, l.line);
      g.b = parse_family(l.raw.substr(semi + 1, bar - semi - 1), doc.source, l.line);
      g.c = parse_family(l.raw.substr(bar + 1), doc.source, l.line).names;
      it->grouped.push_back(std::move(g));
    }
  }
  for (const auto& f : out) check_acyclic(f);
  return out;
}

Factorization load_factorization(const std::string& path, const std::string& name) {
  for (auto& f : parse_factorizations(read_text_doc(path)))
    if (f.name == name) return f;
  throw Error(ErrorKind::ValidationError, "factorization '" + name + "' not found in " + path);
}

}  // namespace wtap
