#include "wtap/text_doc.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wtap/error.hpp"

namespace wtap {

namespace {

DocLine tokenize(const std::string& text, std::size_t line_no) {
  DocLine out;
  out.line = line_no;
  std::string body = text.substr(0, text.find('#'));
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
  out.raw = body;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    if (i >= body.size()) break;
    std::size_t start = i;
    while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    out.tokens.push_back(body.substr(start, i - start));
    out.cols.push_back(start + 1);
  }
  return out;
}

}  // namespace

const DocLine* TextDoc::header_entry(const std::string& key) const {
  for (const auto& l : header)
    if (!l.tokens.empty() && l.tokens[0] == key) return &l;
  return nullptr;
}

std::optional<std::string> TextDoc::header_value(const std::string& key) const {
  const DocLine* l = header_entry(key);
  if (!l || l->tokens.size() < 2) return std::nullopt;
  std::string v = l->tokens[1];
  for (std::size_t i = 2; i < l->tokens.size(); ++i) v += " " + l->tokens[i];
  return v;
}

const DocSection* TextDoc::section(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<const DocSection*> TextDoc::sections_named(const std::string& name) const {
  std::vector<const DocSection*> out;
  for (const auto& s : sections)
    if (s.name == name) out.push_back(&s);
  return out;
}

void parse_error(const std::string& source, std::size_t line, std::size_t col,
                 const std::string& message) {
  std::ostringstream os;
  os << source << ":" << line << ":" << col << ": " << message;
  throw Error(ErrorKind::ParseError, os.str());
}

TextDoc parse_text_doc(const std::string& text, const std::string& source) {
  TextDoc doc;
  doc.source = source;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  DocSection* current = nullptr;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    DocLine dl = tokenize(line, line_no);
    if (dl.tokens.empty()) continue;
    if (dl.raw.front() == '[' || (dl.tokens[0].front() == '[')) {
      std::string r = dl.raw;
      std::size_t open = r.find('[');
      std::size_t close = r.find(']');
      if (close == std::string::npos || close < open)
        parse_error(source, line_no, open + 1, "unterminated section header");
      if (r.find_first_not_of(" \t", close + 1) != std::string::npos)
        parse_error(source, line_no, close + 2, "trailing text after section header");
      DocLine inner = tokenize(r.substr(open + 1, close - open - 1), line_no);
      if (inner.tokens.empty()) parse_error(source, line_no, open + 1, "empty section name");
      DocSection sec;
      sec.name = inner.tokens[0];
      sec.args.assign(inner.tokens.begin() + 1, inner.tokens.end());
      sec.line = line_no;
      doc.sections.push_back(std::move(sec));
      current = &doc.sections.back();
      continue;
    }
    if (current)
      current->lines.push_back(std::move(dl));
    else
      doc.header.push_back(std::move(dl));
  }
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

TextDoc read_text_doc(const std::string& path) { return parse_text_doc(read_file(path), path); }

double parse_real(const std::string& token, const std::string& source, std::size_t line,
                  std::size_t col) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token[0] == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    parse_error(source, line, col, "expected a real number, got '" + token + "'");
  return v;
}

long long parse_integer(const std::string& token, const std::string& source, std::size_t line,
                        std::size_t col) {
  long long v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    parse_error(source, line, col, "expected an integer, got '" + token + "'");
  return v;
}

std::string format_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace wtap
