#pragma once

// Line-oriented sectioned text format shared by channel, aux, split,
// factorization and elimination-script files.
//
//   # comment
//   key value ...        header entries (before the first section)
//   [section arg ...]
//   row tokens ...

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace wtap {

struct DocLine {
  std::size_t line = 0;
  std::string raw;  // comment stripped, trailing space trimmed
  std::vector<std::string> tokens;
  std::vector<std::size_t> cols;  // 1-based column of each token
};

struct DocSection {
  std::string name;
  std::vector<std::string> args;
  std::size_t line = 0;
  std::vector<DocLine> lines;
};

struct TextDoc {
  std::string source;
  std::vector<DocLine> header;
  std::vector<DocSection> sections;

  const DocLine* header_entry(const std::string& key) const;
  std::optional<std::string> header_value(const std::string& key) const;
  const DocSection* section(const std::string& name) const;
  std::vector<const DocSection*> sections_named(const std::string& name) const;
};

TextDoc parse_text_doc(const std::string& text, const std::string& source = "<string>");
TextDoc read_text_doc(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

[[noreturn]] void parse_error(const std::string& source, std::size_t line, std::size_t col,
                              const std::string& message);

double parse_real(const std::string& token, const std::string& source, std::size_t line,
                  std::size_t col);
long long parse_integer(const std::string& token, const std::string& source, std::size_t line,
                        std::size_t col);

// Shortest round-trip decimal form of a double.
std::string format_exact(double v);

}  // namespace wtap
