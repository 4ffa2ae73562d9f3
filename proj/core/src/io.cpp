#include "wtap/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "wtap/error.hpp"

namespace wtap {

namespace {

using Eigen::Index;

const std::string& src(const TextDoc& d) { return d.source; }

const DocLine& need_header(const TextDoc& doc, const std::string& key, std::size_t min_tokens) {
  const DocLine* l = doc.header_entry(key);
  if (!l) parse_error(src(doc), 1, 1, "missing header entry '" + key + "'");
  if (l->tokens.size() < min_tokens) parse_error(src(doc), l->line, 1, "'" + key + "' needs more values");
  return *l;
}

const DocSection& need_section(const TextDoc& doc, const std::string& name) {
  const DocSection* s = doc.section(name);
  if (!s) parse_error(src(doc), 1, 1, "missing section [" + name + "]");
  return *s;
}

std::size_t parse_card(const DocLine& l, std::size_t i, const TextDoc& doc) {
  long long c = parse_integer(l.tokens[i], src(doc), l.line, l.cols[i]);
  if (c < 1) parse_error(src(doc), l.line, l.cols[i], "cardinality must be positive");
  return static_cast<std::size_t>(c);
}

MatrixXd parse_matrix(const DocSection& s, const TextDoc& doc, Index rows, Index cols) {
  if (static_cast<Index>(s.lines.size()) != rows)
    parse_error(src(doc), s.line, 1,
                "[" + s.name + "] needs " + std::to_string(rows) + " rows, got " + std::to_string(s.lines.size()));
  MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const DocLine& l = s.lines[static_cast<std::size_t>(r)];
    if (static_cast<Index>(l.tokens.size()) != cols)
      parse_error(src(doc), l.line, 1, "row needs " + std::to_string(cols) + " entries");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = parse_real(l.tokens[static_cast<std::size_t>(c)], src(doc), l.line, l.cols[static_cast<std::size_t>(c)]);
  }
  return m;
}

void emit_matrix(std::ostringstream& os, const std::string& name, const MatrixXd& m) {
  os << "[" << name << "]\n";
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) os << (c ? " " : "") << format_exact(m(r, c));
    os << "\n";
  }
}

void check_psd(const MatrixXd& m, const std::string& what, bool strict) {
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymTol * scale)
    fail(ErrorKind::ValidationError, "NonPSD: " + what + " is not symmetric");
  double ev = min_eigenvalue(m);
  if (ev < -kPsdTol * scale || (strict && ev <= 0))
    fail(ErrorKind::ValidationError, "NonPSD: " + what + " has eigenvalue " + format_exact(ev));
}

FileMeta parse_meta(const TextDoc& doc) {
  FileMeta m;
  if (auto n = doc.header_value("name")) m.name = *n;
  if (const DocLine* l = doc.header_entry("seed")) {
    if (l->tokens.size() < 2) parse_error(src(doc), l->line, 1, "seed needs a value");
    long long s = parse_integer(l->tokens[1], src(doc), l->line, l->cols[1]);
    if (s < 0) parse_error(src(doc), l->line, l->cols[1], "seed must be nonnegative");
    m.seed = static_cast<std::uint64_t>(s);
  }
  return m;
}

void emit_meta(std::ostringstream& os, const FileMeta& m) {
  if (!m.name.empty()) os << "name " << m.name << "\n";
  if (m.seed) os << "seed " << *m.seed << "\n";
}

Index parse_dim(const TextDoc& doc) {
  const DocLine& l = need_header(doc, "dim", 2);
  long long d = parse_integer(l.tokens[1], src(doc), l.line, l.cols[1]);
  if (d < 1) parse_error(src(doc), l.line, l.cols[1], "dim must be positive");
  return static_cast<Index>(d);
}

std::string kind_of(const TextDoc& doc) {
  const DocLine& l = need_header(doc, "kind", 2);
  return l.tokens[1];
}

DiscreteChannelFile parse_discrete(const TextDoc& doc) {
  const DocLine& in = need_header(doc, "input", 3);
  const DocLine& out = need_header(doc, "outputs", 7);
  VarId x{in.tokens[1], parse_card(in, 2, doc)};
  std::array<VarId, 3> ys;
  for (std::size_t k = 0; k < 3; ++k) ys[k] = {out.tokens[1 + 2 * k], parse_card(out, 2 + 2 * k, doc)};
  auto stages = doc.sections_named("stage");
  const DocSection* joint = doc.section("joint");
  if (joint && !stages.empty()) parse_error(src(doc), joint->line, 1, "use either [joint] or [stage] sections");
  DiscreteChannelFile f;
  f.meta = parse_meta(doc);
  try {
    if (joint) {
      auto cols = static_cast<Index>(ys[0].card * ys[1].card * ys[2].card);
      MatrixXd k = parse_matrix(*joint, doc, static_cast<Index>(x.card), cols);
      f.channel = ChannelSpec::from_joint(x, ys, k);
      f.channel.degraded_flag = is_degraded(f.channel);
    } else {
      if (stages.size() != 3) parse_error(src(doc), 1, 1, "need three [stage] sections");
      std::array<Kernel, 3> ks;
      std::size_t prev = x.card;
      for (std::size_t k = 0; k < 3; ++k) {
        const DocSection& s = *stages[k];
        if (s.args.size() != 1 || s.args[0] != ys[k].name)
          parse_error(src(doc), s.line, 1, "expected [stage " + ys[k].name + "]");
        ks[k] = parse_matrix(s, doc, static_cast<Index>(prev), static_cast<Index>(ys[k].card));
        prev = ys[k].card;
      }
      f.channel = ChannelSpec::from_cascade(x, ys, ks);
      f.channel.degraded_flag = true;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    fail(ErrorKind::ValidationError, std::string(to_string(e.kind())) + ": " + e.what());
  }
  return f;
}

GaussChannelFile parse_gauss(const TextDoc& doc) {
  Index d = parse_dim(doc);
  GaussChannelFile f;
  f.meta = parse_meta(doc);
  auto& ch = f.channel;
  ch.S = parse_matrix(need_section(doc, "S"), doc, d, d);
  ch.Sigma1 = parse_matrix(need_section(doc, "Sigma1"), doc, d, d);
  ch.Sigma2 = parse_matrix(need_section(doc, "Sigma2"), doc, d, d);
  ch.SigmaZ = parse_matrix(need_section(doc, "SigmaZ"), doc, d, d);
  check_psd(ch.S, "S", false);
  check_psd(ch.Sigma1, "Sigma1", true);
  check_psd(ch.Sigma2, "Sigma2", true);
  check_psd(ch.SigmaZ, "SigmaZ", true);
  return f;
}

HGaussChannelFile parse_gauss_h(const TextDoc& doc) {
  Index d = parse_dim(doc);
  HGaussChannelFile f;
  f.meta = parse_meta(doc);
  auto mat = [&](const std::string& n) {
    const DocSection& s = need_section(doc, n);
    return parse_matrix(s, doc, static_cast<Index>(s.lines.size()), d);
  };
  f.channel.H1 = mat("H1");
  f.channel.H2 = mat("H2");
  f.channel.HZ = mat("HZ");
  return f;
}

void emit_kernel_rows(std::ostringstream& os, const Kernel& k) {
  for (Index r = 0; r < k.rows(); ++r) {
    for (Index c = 0; c < k.cols(); ++c) os << (c ? " " : "") << format_exact(k(r, c));
    os << "\n";
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

ChannelFile parse_channel(const TextDoc& doc) {
  std::string kind = kind_of(doc);
  if (kind == "discrete") return parse_discrete(doc);
  if (kind == "gauss") return parse_gauss(doc);
  if (kind == "gauss_h") return parse_gauss_h(doc);
  const DocLine* l = doc.header_entry("kind");
  parse_error(src(doc), l->line, l->cols[1], "unknown channel kind '" + kind + "'");
}

ChannelFile parse_channel_text(const std::string& text, const std::string& source) {
  return parse_channel(parse_text_doc(text, source));
}

ChannelFile parse_channel_file(const std::string& path) { return parse_channel(read_text_doc(path)); }

std::string emit_channel(const DiscreteChannelFile& f) {
  std::ostringstream os;
  const auto& ch = f.channel;
  os << "kind discrete\n";
  emit_meta(os, f.meta);
  os << "input " << ch.input().name << " " << ch.input().card << "\n";
  os << "outputs";
  for (const auto& y : ch.outputs()) os << " " << y.name << " " << y.card;
  os << "\n";
  if (ch.is_cascade()) {
    for (std::size_t k = 0; k < 3; ++k) {
      os << "[stage " << ch.outputs()[k].name << "]\n";
      emit_kernel_rows(os, ch.stages()[k]);
    }
  } else {
    os << "[joint]\n";
    emit_kernel_rows(os, ch.joint_kernel());
  }
  return os.str();
}

std::string emit_channel(const GaussChannelFile& f) {
  std::ostringstream os;
  os << "kind gauss\n";
  emit_meta(os, f.meta);
  os << "dim " << f.channel.dim() << "\n";
  emit_matrix(os, "S", f.channel.S);
  emit_matrix(os, "Sigma1", f.channel.Sigma1);
  emit_matrix(os, "Sigma2", f.channel.Sigma2);
  emit_matrix(os, "SigmaZ", f.channel.SigmaZ);
  return os.str();
}

std::string emit_channel(const HGaussChannelFile& f) {
  std::ostringstream os;
  os << "kind gauss_h\n";
  emit_meta(os, f.meta);
  os << "dim " << f.channel.H1.cols() << "\n";
  emit_matrix(os, "H1", f.channel.H1);
  emit_matrix(os, "H2", f.channel.H2);
  emit_matrix(os, "HZ", f.channel.HZ);
  return os.str();
}

AuxJoint parse_aux(const TextDoc& doc) {
  std::string kind = kind_of(doc);
  const DocLine& v = need_header(doc, "vars", 3);
  if ((v.tokens.size() - 1) % 2 != 0) parse_error(src(doc), v.line, 1, "vars needs NAME CARD pairs");
  std::vector<VarId> vars;
  for (std::size_t i = 1; i + 1 < v.tokens.size(); i += 2) vars.push_back({v.tokens[i], parse_card(v, i + 1, doc)});
  std::vector<double> p;
  for (const auto& l : need_section(doc, "probs").lines)
    for (std::size_t i = 0; i < l.tokens.size(); ++i) p.push_back(parse_real(l.tokens[i], src(doc), l.line, l.cols[i]));
  std::string input = doc.header_value("input").value_or("X");
  try {
    if (cell_count(vars) != p.size())
      fail(ErrorKind::ShapeMismatch, "expected " + std::to_string(cell_count(vars)) + " masses, got " +
                                         std::to_string(p.size()));
    ProbTable t(vars, p);
    if (kind == "degraded") return make_degraded_aux(t, input);
    if (kind == "general") return make_general_aux(t, input);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    fail(ErrorKind::ValidationError, std::string(to_string(e.kind())) + ": " + e.what());
  }
  parse_error(src(doc), 1, 1, "unknown aux kind '" + kind + "'");
}

AuxJoint parse_aux_file(const std::string& path) { return parse_aux(read_text_doc(path)); }

std::string emit_aux(const AuxJoint& aux) {
  std::ostringstream os;
  os << "kind " << (aux.kind == AuxJoint::Kind::Degraded ? "degraded" : "general") << "\n";
  os << "vars";
  for (const auto& v : aux.table.vars()) os << " " << v.name << " " << v.card;
  os << "\n[probs]\n";
  const auto& vars = aux.table.vars();
  std::size_t row = vars.back().card;
  const auto& p = aux.table.probs();
  for (std::size_t i = 0; i < p.size(); ++i) os << format_exact(p[i]) << ((i + 1) % row == 0 ? "\n" : " ");
  return os.str();
}

CovSplit parse_split(const TextDoc& doc) {
  Index d = parse_dim(doc);
  CovSplit s;
  if (doc.section("K")) {
    s = CovSplit::single(parse_matrix(*doc.section("K"), doc, d, d));
  } else {
    s = CovSplit::triple(parse_matrix(need_section(doc, "K0"), doc, d, d),
                         parse_matrix(need_section(doc, "K1"), doc, d, d),
                         parse_matrix(need_section(doc, "K2"), doc, d, d));
  }
  if (s.general) {
    check_psd(s.K0, "K0", false);
    check_psd(s.K1, "K1", false);
    check_psd(s.K2, "K2", false);
  } else {
    check_psd(s.K, "K", false);
  }
  return s;
}

CovSplit parse_split_file(const std::string& path) { return parse_split(read_text_doc(path)); }

std::string emit_split(const CovSplit& s) {
  std::ostringstream os;
  if (s.general) {
    os << "dim " << s.K0.rows() << "\n";
    emit_matrix(os, "K0", s.K0);
    emit_matrix(os, "K1", s.K1);
    emit_matrix(os, "K2", s.K2);
  } else {
    os << "dim " << s.K.rows() << "\n";
    emit_matrix(os, "K", s.K);
  }
  return os.str();
}

ScalarMixture parse_mixture(const TextDoc& doc) {
  const DocLine& n = need_header(doc, "noise", 4);
  ScalarMixture m;
  m.s1 = parse_real(n.tokens[1], src(doc), n.line, n.cols[1]);
  m.s2 = parse_real(n.tokens[2], src(doc), n.line, n.cols[2]);
  m.sz = parse_real(n.tokens[3], src(doc), n.line, n.cols[3]);
  for (const auto& l : need_section(doc, "points").lines) {
    if (l.tokens.size() != 3) parse_error(src(doc), l.line, 1, "point needs u x w");
    m.u.push_back(static_cast<int>(parse_integer(l.tokens[0], src(doc), l.line, l.cols[0])));
    m.x.push_back(parse_real(l.tokens[1], src(doc), l.line, l.cols[1]));
    m.w.push_back(parse_real(l.tokens[2], src(doc), l.line, l.cols[2]));
  }
  try {
    m.validate();
  } catch (const Error& e) {
    fail(ErrorKind::ValidationError, std::string(to_string(e.kind())) + ": " + e.what());
  }
  return m;
}

ScalarMixture parse_mixture_file(const std::string& path) { return parse_mixture(read_text_doc(path)); }

std::string emit_mixture(const ScalarMixture& m) {
  std::ostringstream os;
  os << "noise " << format_exact(m.s1) << " " << format_exact(m.s2) << " " << format_exact(m.sz) << "\n[points]\n";
  for (std::size_t k = 0; k < m.x.size(); ++k)
    os << m.u[k] << " " << format_exact(m.x[k]) << " " << format_exact(m.w[k]) << "\n";
  return os.str();
}

std::string Table::csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
    out += "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string Table::pretty() const {
  std::vector<std::size_t> w(header.size(), 0);
  auto widen = [&](const std::vector<std::string>& r) {
    if (r.size() > w.size()) w.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
  };
  widen(header);
  for (const auto& r : rows) widen(r);
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    std::string l;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) l += "  ";
      l += r[i] + std::string(w[i] - r[i].size(), ' ');
    }
    while (!l.empty() && l.back() == ' ') l.pop_back();
    out += l + "\n";
  };
  line(header);
  std::size_t total = 0;
  for (std::size_t x : w) total += x + 2;
  out += std::string(total > 2 ? total - 2 : 0, '-') + "\n";
  for (const auto& r : rows) line(r);
  return out;
}

OutFormat parse_format(const std::string& s) {
  if (s == "csv") return OutFormat::Csv;
  if (s == "pretty") return OutFormat::Pretty;
  fail(ErrorKind::InvalidArgument, "unknown format '" + s + "'");
}

std::string fmt_num(double v) {
  if (v == 0) v = 0;  // drops the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Table region_table(const IneqSystem& sys, const VPolytope* poly) {
  Table t;
  t.header.push_back("kind");
  for (const auto& v : sys.vars) t.header.push_back(v);
  t.header.push_back("rhs");
  for (const auto& q : sys.ineqs) {
    std::vector<std::string> r{q.rel == Rel::Eq ? "equality" : "constraint"};
    for (const auto& v : sys.vars) r.push_back(fmt_num(to_double(q.coeff(v))));
    r.push_back(fmt_num(q.value));
    t.rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < sys.vars.size(); ++i) {
    std::vector<std::string> r{"nonneg"};
    for (std::size_t j = 0; j < sys.vars.size(); ++j) r.push_back(i == j ? "-1" : "0");
    r.push_back("0");
    t.rows.push_back(std::move(r));
  }
  if (poly) {
    Table v = vertex_table(*poly);
    for (auto& r : v.rows) {
      r.push_back("");
      t.rows.push_back(std::move(r));
    }
  }
  return t;
}

Table vertex_table(const VPolytope& poly) {
  Table t;
  t.header.push_back("kind");
  for (const auto& v : poly.vars) t.header.push_back(v);
  for (const auto& x : poly.vertices) {
    std::vector<std::string> r{"vertex"};
    for (Index i = 0; i < x.size(); ++i) r.push_back(fmt_num(x(i)));
    t.rows.push_back(std::move(r));
  }
  if (poly.empty()) t.rows.push_back({"EMPTY"});
  return t;
}

Table constants_table(const RegionPoint& p) {
  Table t{{"bound", "value"}, {}};
  for (std::size_t i = 0; i < p.labels.size(); ++i) t.rows.push_back({p.labels[i], fmt_num(p.values[i])});
  return t;
}

Table sweep_table(const SweepResult& r) {
  Table t{{"sample", "aux_hash"}, {}};
  if (!r.samples.empty())
    for (const auto& l : r.samples.front().constants.labels) t.header.push_back(l);
  t.header.push_back("vertices");
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& s = r.samples[i];
    std::vector<std::string> row{std::to_string(i), hex64(s.aux_hash)};
    for (double v : s.constants.values) row.push_back(fmt_num(v));
    row.push_back(std::to_string(s.polytope.vertices.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cov_sweep_table(const CovSweepResult& r) {
  Table t{{"sample", "trace_S", "trace_K"}, {}};
  if (!r.samples.empty())
    for (const auto& l : r.samples.front().constants.labels) t.header.push_back(l);
  t.header.push_back("vertices");
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& s = r.samples[i];
    std::vector<std::string> row{std::to_string(i), fmt_num(s.S.trace()), fmt_num(s.K.trace())};
    for (double v : s.constants.values) row.push_back(fmt_num(v));
    row.push_back(std::to_string(s.polytope.vertices.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table hull_table(const std::vector<std::string>& vars, const std::vector<Eigen::VectorXd>& hull) {
  return vertex_table(VPolytope{vars, hull});
}

void write_table(const Table& t, const std::string& path, OutFormat format) {
  std::string s = format == OutFormat::Csv ? t.csv() : t.pretty();
  if (path.empty() || path == "-") {
    std::cout << s << std::flush;
    if (!std::cout) fail(ErrorKind::IoError, "cannot write to stdout");
    return;
  }
  write_file(path, s);
}

void emit_region_csv(const IneqSystem& sys, const VPolytope* poly, const std::string& path) {
  write_table(region_table(sys, poly), path, OutFormat::Csv);
}

void emit_region_csv(const VPolytope& poly, const std::string& path) {
  write_table(vertex_table(poly), path, OutFormat::Csv);
}

void emit_region_csv(const SweepResult& r, const std::string& path) {
  write_table(sweep_table(r), path, OutFormat::Csv);
}

}  // namespace wtap
