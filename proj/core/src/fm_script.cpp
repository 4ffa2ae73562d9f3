#include "wtap/fm_script.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <sstream>

#include "wtap/error.hpp"
#include "wtap/factorization.hpp"

namespace wtap {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

Rational parse_rational(const std::string& tok, const std::string& src, std::size_t line) {
  using boost::multiprecision::cpp_int;
  try {
    auto slash = tok.find('/');
    if (slash != std::string::npos)
      return Rational(cpp_int(tok.substr(0, slash)), cpp_int(tok.substr(slash + 1)));
    auto dot = tok.find('.');
    if (dot == std::string::npos) return Rational(cpp_int(tok));
    std::string digits = tok.substr(0, dot) + tok.substr(dot + 1);
    cpp_int den = 1;
    for (std::size_t k = dot + 1; k < tok.size(); ++k) den *= 10;
    return Rational(cpp_int(digits.empty() ? "0" : digits), den);
  } catch (const std::exception&) {
    parse_error(src, line, 1, "bad number '" + tok + "'");
  }
}

VarSet parse_set(const std::string& s, const std::string& src, std::size_t line) {
  VarSet out;
  for (const auto& n : split(s, ',')) {
    if (n.empty()) parse_error(src, line, 1, "empty variable name in '" + s + "'");
    out.push_back(n);
  }
  return out;
}

struct Side {
  Coeffs rates;
  InfoExpr info;
};

Side parse_side(const std::string& s, const std::set<std::string>& rate_vars, const std::string& src,
                std::size_t line) {
  Side out;
  std::size_t i = 0;
  bool first = true;
  auto ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  while (true) {
    ws();
    if (i >= s.size()) break;
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
      ws();
    } else if (!first) {
      parse_error(src, line, i + 1, "expected '+' or '-' in '" + s + "'");
    }
    first = false;
    Rational coef = sign;
    bool have_number = false;
    std::size_t nb = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.' || s[i] == '/')) ++i;
    if (i > nb) {
      coef *= parse_rational(s.substr(nb, i - nb), src, line);
      have_number = true;
      ws();
      if (i < s.size() && s[i] == '*') {
        ++i;
        ws();
      }
    }
    if (i < s.size() && (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
      std::size_t ib = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      std::string id = s.substr(ib, i - ib);
      if ((id == "I" || id == "H") && i < s.size() && s[i] == '(') {
        auto close = s.find(')', i);
        if (close == std::string::npos) parse_error(src, line, i + 1, "unterminated '('");
        std::string inner = s.substr(i + 1, close - i - 1);
        i = close + 1;
        if (id == "H") {
          out.info += coef * InfoExpr::entropy(parse_set(inner, src, line));
          continue;
        }
        auto semi = inner.find(';');
        if (semi == std::string::npos) parse_error(src, line, ib + 1, "I(...) needs ';'");
        std::string a = inner.substr(0, semi), rest = inner.substr(semi + 1), c;
        auto bar = rest.find('|');
        if (bar != std::string::npos) {
          c = rest.substr(bar + 1);
          rest = rest.substr(0, bar);
        }
        try {
          out.info += coef * expand_mi(parse_set(a, src, line), parse_set(rest, src, line),
                                       c.empty() ? VarSet{} : parse_set(c, src, line));
        } catch (const Error& e) {
          parse_error(src, line, ib + 1, e.what());
        }
        continue;
      }
      if (!rate_vars.count(id)) parse_error(src, line, ib + 1, "unknown rate variable '" + id + "'");
      Rational& slot = out.rates[id];
      slot += coef;
      if (slot == 0) out.rates.erase(id);
      continue;
    }
    if (!have_number) parse_error(src, line, i + 1, "unexpected text in '" + s + "'");
    out.info += InfoExpr::constant(coef);
  }
  return out;
}

// Equality rows in reduced echelon form over rate variables; used to compare
// rows modulo the system's own equalities.
class Reducer {
 public:
  Reducer(const IneqSystem& sys, const EqualitySet& eqs, const std::vector<std::string>& order)
      : eqs_(&eqs), order_(order) {
    for (const auto& q : sys.ineqs) {
      if (q.rel != Rel::Eq) continue;
      LinIneq r = reduce(q);
      if (r.coeffs.empty()) {
        if (!eqs.normal_form(r.rhs).is_zero()) inconsistent_.push_back(r);
        continue;
      }
      std::string piv = pivot_of(r);
      Rational s = 1 / r.coeffs.at(piv);
      for (auto& [v, c] : r.coeffs) c *= s;
      r.rhs *= s;
      for (auto& [p, row] : rows_) eliminate(row, piv, r);
      rows_.emplace_back(piv, std::move(r));
    }
  }

  LinIneq reduce(const LinIneq& q) const {
    LinIneq r = q;
    for (const auto& [p, row] : rows_) eliminate(r, p, row);
    return r;
  }

  std::string key(const LinIneq& q) const { return canonical_key(reduce(q), true, eqs_); }

  std::vector<LinIneq> equality_rows() const {
    std::vector<LinIneq> out;
    for (const auto& [p, row] : rows_) out.push_back(row);
    for (const auto& row : inconsistent_) out.push_back(row);
    return out;
  }

 private:
  static void eliminate(LinIneq& q, const std::string& piv, const LinIneq& row) {
    auto it = q.coeffs.find(piv);
    if (it == q.coeffs.end()) return;
    Rational f = it->second;
    for (const auto& [v, c] : row.coeffs) {
      Rational& slot = q.coeffs[v];
      slot -= f * c;
      if (slot == 0) q.coeffs.erase(v);
    }
    q.rhs -= f * row.rhs;
  }

  std::string pivot_of(const LinIneq& q) const {
    std::string best;
    long best_rank = -1;
    for (const auto& [v, c] : q.coeffs) {
      auto it = std::find(order_.begin(), order_.end(), v);
      long rank = it == order_.end() ? static_cast<long>(order_.size()) : static_cast<long>(it - order_.begin());
      if (rank >= best_rank) {
        best_rank = rank;
        best = v;
      }
    }
    return best;
  }

  const EqualitySet* eqs_;
  std::vector<std::string> order_;
  std::vector<std::pair<std::string, LinIneq>> rows_;
  std::vector<LinIneq> inconsistent_;
};

// Names made of letters followed by a trailing 'j' get the index instead.
std::string substitute_j(const std::string& s, const char* j) {
  static const std::regex j_re("\\b[A-Za-z]+j\\b");
  std::string out;
  std::size_t last = 0;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), j_re); it != std::sregex_iterator(); ++it) {
    auto pos = static_cast<std::size_t>(it->position());
    out += s.substr(last, pos - last) + it->str().substr(0, it->str().size() - 1) + j;
    last = pos + static_cast<std::size_t>(it->length());
  }
  return out + s.substr(last);
}

bool bare_nonneg(const LinIneq& q, const EqualitySet& eqs) {
  return q.rel == Rel::Le && q.coeffs.size() == 1 && q.coeffs.begin()->second < 0 &&
         eqs.normal_form(q.rhs).is_zero();
}

std::string step_text(const ScriptStep& s) { return s.text; }

void compare(const std::map<std::string, std::string>& produced, const std::map<std::string, std::string>& expected,
             StepReport& rep) {
  for (const auto& [k, text] : expected)
    if (!produced.count(k)) rep.missing.push_back(text);
  for (const auto& [k, text] : produced)
    if (!expected.count(k)) rep.extra.push_back(text);
  rep.ok = rep.missing.empty() && rep.extra.empty();
}

}  // namespace

std::vector<LinIneq> parse_constraint(const std::string& text, const std::set<std::string>& rate_vars,
                                      const std::string& source, std::size_t line) {
  Rel rel = Rel::Le;
  bool flip = false;
  std::size_t at = text.find("<=");
  std::size_t len = 2;
  if (at == std::string::npos) {
    at = text.find(">=");
    flip = at != std::string::npos;
  }
  if (at == std::string::npos) {
    at = text.find('=');
    len = 1;
    rel = Rel::Eq;
  }
  if (at == std::string::npos) parse_error(source, line, 1, "constraint needs '<=', '>=' or '='");
  std::string lhs = text.substr(0, at), rhs = text.substr(at + len);
  if (rhs.find_first_of("<>=") != std::string::npos) parse_error(source, line, at + 1, "more than one relation");

  std::vector<std::pair<std::string, std::string>> variants;
  static const std::regex min_re("\\bmin_j\\b");
  if (std::regex_search(text, min_re)) {
    for (const char* j : {"1", "2"})
      variants.emplace_back(substitute_j(std::regex_replace(lhs, min_re, ""), j),
                            substitute_j(std::regex_replace(rhs, min_re, ""), j));
  } else {
    variants.emplace_back(lhs, rhs);
  }
  std::vector<LinIneq> out;
  for (const auto& [l, r] : variants) {
    Side a = parse_side(l, rate_vars, source, line), b = parse_side(r, rate_vars, source, line);
    if (flip) std::swap(a, b);
    LinIneq q;
    q.rel = rel;
    q.coeffs = a.rates;
    for (const auto& [v, c] : b.rates) {
      Rational& slot = q.coeffs[v];
      slot -= c;
      if (slot == 0) q.coeffs.erase(v);
    }
    q.rhs = b.info - a.info;
    q.label = trim(text);
    out.push_back(std::move(q));
  }
  return out;
}

InfoExpr parse_info_expr(const std::string& text, const std::string& source, std::size_t line) {
  return parse_side(text, {}, source, line).info;
}

ElimScript parse_elim_script(const TextDoc& doc) {
  ElimScript s;
  s.start = doc.header_value("start").value_or("");
  s.target = doc.header_value("target").value_or("");
  s.factorization = doc.header_value("factorization").value_or("general");
  if (s.start.empty() || s.target.empty()) parse_error(doc.source, 1, 1, "script needs 'start' and 'target'");

  std::set<std::string> allowed;
  if (const auto* sec = doc.section("vars"))
    for (const auto& l : sec->lines)
      for (const auto& t : l.tokens) {
        s.vars.push_back(t);
        allowed.insert(t);
      }
  std::vector<std::string> order = s.vars;
  if (const auto* sec = doc.section("slacks"))
    for (const auto& l : sec->lines)
      for (const auto& t : l.tokens) {
        allowed.insert(t);
        order.push_back(t);
      }
  if (const auto* sec = doc.section("background"))
    for (const auto& l : sec->lines)
      for (auto& q : parse_constraint(l.raw, allowed, doc.source, l.line)) {
        q.background = true;
        s.background.push_back(std::move(q));
      }
  for (const auto* sec : doc.sections_named("system")) {
    if (sec->args.size() != 1) parse_error(doc.source, sec->line, 1, "system needs a name");
    IneqSystem sys;
    sys.symbolic = true;
    for (const auto& l : sec->lines)
      for (auto& q : parse_constraint(l.raw, allowed, doc.source, l.line)) sys.ineqs.push_back(std::move(q));
    if (sec->args[0] == s.start) {
      sys.vars = s.vars;
      for (const auto& q : s.background) sys.ineqs.push_back(q);
    } else {
      for (const auto& v : order)
        for (const auto& q : sys.ineqs)
          if (q.has(v)) {
            sys.add_var(v);
            break;
          }
    }
    if (!s.systems.emplace(sec->args[0], std::move(sys)).second)
      parse_error(doc.source, sec->line, 1, "duplicate system " + sec->args[0]);
  }
  if (!s.systems.count(s.start)) parse_error(doc.source, 1, 1, "start system '" + s.start + "' not defined");
  if (!s.systems.count(s.target)) parse_error(doc.source, 1, 1, "target system '" + s.target + "' not defined");

  if (const auto* sec = doc.section("script"))
    for (const auto& l : sec->lines) {
      ScriptStep st;
      st.line = l.line;
      st.text = l.raw;
      const std::string& kw = l.tokens[0];
      std::string rest = trim(l.raw.substr(l.raw.find(kw) + kw.size()));
      if (kw == "eliminate") {
        if (l.tokens.size() != 2) parse_error(doc.source, l.line, 1, "eliminate takes one variable");
        st.kind = ScriptStep::Kind::Eliminate;
        st.var = l.tokens[1];
        if (!allowed.count(st.var)) parse_error(doc.source, l.line, l.cols[1], "unknown variable " + st.var);
      } else if (kw == "check") {
        if (l.tokens.size() != 2) parse_error(doc.source, l.line, 1, "check takes one system name");
        st.kind = ScriptStep::Kind::Check;
        st.check = l.tokens[1];
        if (!s.systems.count(st.check)) parse_error(doc.source, l.line, l.cols[1], "unknown system " + st.check);
      } else if (kw == "transfer" || kw == "transfer-zero") {
        st.kind = kw == "transfer" ? ScriptStep::Kind::Transfer : ScriptStep::Kind::TransferZero;
        for (const auto& item : split(rest, ',')) {
          auto colon = item.find(':');
          auto arrow = item.find("->");
          if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
            parse_error(doc.source, l.line, 1, "expected 'slack: source -> dest'");
          Transfer t{trim(item.substr(colon + 1, arrow - colon - 1)), trim(item.substr(arrow + 2)),
                     trim(item.substr(0, colon))};
          for (const auto* n : {&t.source, &t.dest, &t.slack})
            if (!allowed.count(*n)) parse_error(doc.source, l.line, 1, "unknown variable " + *n);
          st.transfers.push_back(t);
        }
      } else if (kw == "drop") {
        st.kind = ScriptStep::Kind::Drop;
        auto colon = rest.find(':');
        if (colon == std::string::npos) parse_error(doc.source, l.line, 1, "expected 'drop kind: constraint'");
        std::string kind = trim(rest.substr(0, colon));
        if (kind != "constant" && kind != "redundant")
          parse_error(doc.source, l.line, 1, "drop kind must be 'constant' or 'redundant'");
        st.constant_drop = kind == "constant";
        st.drop = parse_constraint(rest.substr(colon + 1), allowed, doc.source, l.line);
      } else {
        parse_error(doc.source, l.line, l.cols[0], "unknown script step '" + kw + "'");
      }
      s.steps.push_back(std::move(st));
    }
  return s;
}

ElimScript load_elim_script(const std::string& path) { return parse_elim_script(read_text_doc(path)); }

std::map<std::string, std::string> canonical_rows(const IneqSystem& sys, const EqualitySet& eqs,
                                                  const std::vector<std::string>& order,
                                                  const std::vector<LinIneq>& background) {
  std::set<std::string> bg;
  for (const auto& q : background) bg.insert(canonical_key(q, true, &eqs));
  IneqSystem kept = sys;
  kept.ineqs.clear();
  for (const auto& q : sys.ineqs) {
    if (q.background || bare_nonneg(q, eqs) || bg.count(canonical_key(q, true, &eqs))) continue;
    kept.ineqs.push_back(q);
  }
  Reducer red(kept, eqs, order);
  std::map<std::string, std::string> out;
  for (const auto& row : red.equality_rows()) out.emplace(canonical_key(row, true, &eqs), row.str(true));
  for (const auto& q : kept.ineqs)
    if (q.rel == Rel::Le) out.emplace(red.key(q), q.str(true));
  return out;
}

ScriptReport verify_elimination_script(const IneqSystem& start, const std::vector<ScriptStep>& script,
                                       const IneqSystem& target, const EqualitySet& eqs,
                                       const VerifyOptions& opt) {
  ScriptReport rep;
  IneqSystem cur = start;
  cur.symbolic = true;
  auto record = [&](StepReport sr) {
    if (!sr.ok && rep.pass) {
      rep.pass = false;
      rep.first_failure = static_cast<long>(sr.index);
    }
    rep.steps.push_back(std::move(sr));
  };

  for (std::size_t k = 0; k < script.size(); ++k) {
    const ScriptStep& st = script[k];
    StepReport sr;
    sr.index = k;
    sr.line = st.line;
    sr.step = step_text(st);
    try {
      switch (st.kind) {
        case ScriptStep::Kind::Eliminate:
          if (!cur.has_var(st.var)) sr.note = "variable absent";
          cur = fm_eliminate(cur, st.var, &eqs);
          break;
        case ScriptStep::Kind::Transfer:
        case ScriptStep::Kind::TransferZero:
          cur = apply_rate_transfer(cur, st.transfers, st.kind == ScriptStep::Kind::TransferZero);
          break;
        case ScriptStep::Kind::Check: {
          auto it = opt.named.find(st.check);
          if (it == opt.named.end()) fail(ErrorKind::InvalidArgument, "no system named " + st.check);
          compare(canonical_rows(cur, eqs, opt.order, opt.background),
                  canonical_rows(it->second, eqs, opt.order, opt.background), sr);
          break;
        }
        case ScriptStep::Kind::Drop: {
          Reducer red(cur, eqs, opt.order);
          std::vector<LinIneq> removed;
          for (const auto& d : st.drop) {
            std::string key = red.key(d);
            auto it = std::find_if(cur.ineqs.begin(), cur.ineqs.end(), [&](const LinIneq& q) {
              return q.rel == Rel::Le && red.key(q) == key;
            });
            if (it == cur.ineqs.end()) {
              sr.ok = false;
              sr.missing.push_back(d.str(true));
              continue;
            }
            removed.push_back(red.reduce(*it));
            cur.ineqs.erase(it);
          }
          if (!sr.ok) {
            sr.note = "row to drop not present";
            break;
          }
          if (!opt.sampler) break;
          if (st.constant_drop) {
            int holds = 0;
            for (const auto& q : removed)
              if (!q.coeffs.empty()) {
                sr.ok = false;
                sr.note = "not a constant row: " + q.str(true);
              }
            if (!sr.ok) break;
            for (int i = 0; i < opt.drop_samples; ++i) {
              Rng rng = Rng::stream(opt.seed, k * 1000 + static_cast<std::size_t>(i));
              ProbTable t = opt.sampler(rng);
              EntropyCache cache(t);
              bool all = true;
              for (const auto& q : removed) all = all && cache.evaluate(q.rhs) >= -opt.tol;
              holds += all;
            }
            std::ostringstream os;
            os << "holds on " << holds << "/" << opt.drop_samples << " samples";
            sr.note = os.str();
            break;
          }
          int feasible = 0;
          for (int i = 0; i < opt.drop_samples && sr.ok; ++i) {
            Rng rng = Rng::stream(opt.seed, k * 1000 + static_cast<std::size_t>(i));
            ProbTable t = opt.sampler(rng);
            EntropyCache cache(t);
            IneqSystem num = instantiate(cur, [&](const InfoExpr& e) { return cache.evaluate(e); });
            for (const auto& q : removed) {
              std::map<std::string, double> w;
              for (const auto& [v, c] : q.coeffs) w[v] = to_double(c);
              auto best = support(num, w);
              if (!best) break;
              double rhs = cache.evaluate(q.rhs);
              if (*best > rhs + opt.tol) {
                std::ostringstream os;
                os << "sample " << i << ": max " << q.lhs_str() << " = " << *best << " exceeds " << rhs;
                sr.ok = false;
                sr.note = os.str();
                break;
              }
              if (&q == &removed.back()) ++feasible;
            }
          }
          if (sr.ok && feasible == 0) {
            sr.ok = false;
            sr.note = "no feasible sample to confirm redundancy";
          } else if (sr.ok) {
            std::ostringstream os;
            os << "redundant on " << feasible << "/" << opt.drop_samples << " feasible samples";
            sr.note = os.str();
          }
          break;
        }
      }
    } catch (const Error& e) {
      sr.ok = false;
      sr.note = e.what();
    }
    bool ok = sr.ok;
    record(std::move(sr));
    if (!ok && !opt.keep_going) {
      rep.final_system = cur;
      return rep;
    }
  }
  StepReport fin;
  fin.index = script.size();
  fin.step = "final system equals target";
  compare(canonical_rows(cur, eqs, opt.order, opt.background), canonical_rows(target, eqs, opt.order, opt.background),
          fin);
  record(std::move(fin));
  rep.final_system = cur;
  return rep;
}

ScriptReport run_elim_script(const ElimScript& s, const std::string& factorization_file, std::uint64_t seed,
                             bool keep_going) {
  Factorization f = load_factorization(factorization_file, s.factorization);
  EqualitySet eqs = derive_equalities(f);
  VerifyOptions opt;
  opt.named = s.systems;
  opt.background = s.background;
  opt.order = s.vars;
  for (const auto& st : s.steps)
    for (const auto& t : st.transfers)
      if (std::find(opt.order.begin(), opt.order.end(), t.slack) == opt.order.end()) opt.order.push_back(t.slack);
  std::map<std::string, std::size_t> cards;
  for (const auto& n : f.nodes) cards[n] = 2;
  // Plain draws tend to make the eavesdropper strong enough to empty the
  // region; every other draw weakens Z and loosens the V1-V2 coupling.
  opt.sampler = [f, cards](Rng& rng) {
    std::map<std::string, double> flatten;
    if (rng.uniform() < 0.5)
      for (const char* n : {"Z", "V2"})
        if (cards.count(n)) flatten[n] = rng.uniform(0.8, 0.98);
    return random_factored_joint(f, cards, rng, flatten);
  };
  opt.seed = seed;
  opt.keep_going = keep_going;
  return verify_elimination_script(s.systems.at(s.start), s.steps, s.systems.at(s.target), eqs, opt);
}

std::string format_report(const ScriptReport& r) {
  std::ostringstream os;
  for (const auto& s : r.steps) {
    os << "step " << s.index;
    if (s.line) os << " (line " << s.line << ")";
    os << ": " << s.step << " ... " << (s.ok ? "ok" : "FAIL");
    if (!s.note.empty()) os << " [" << s.note << "]";
    os << "\n";
    for (const auto& m : s.missing) os << "    missing: " << m << "\n";
    for (const auto& x : s.extra) os << "    extra:   " << x << "\n";
  }
  os << (r.pass ? "PASS" : "FAIL");
  if (!r.pass) os << " (first divergent step " << r.first_failure << ")";
  os << "\n";
  return os.str();
}

}  // namespace wtap
