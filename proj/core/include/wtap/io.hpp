#pragma once

// File formats and CSV output. Every file is a text document (see
// text_doc.hpp) with a `kind` header entry.
//
//   kind discrete              kind gauss            kind gauss_h
//   input X 2                  dim 2                 dim 2
//   outputs Y1 2 Y2 2 Z 2      [S]                   [H1]
//   [stage Y1]  (or [joint])   row ...               row ...
//   row ...                    [Sigma1] [Sigma2]     [H2] [HZ]
//   [stage Y2] [stage Z]       [SigmaZ]
//
// Optional header entries `name` and `seed` are kept as metadata.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wtap/fisher.hpp"
#include "wtap/gaussian.hpp"
#include "wtap/regions_discrete.hpp"
#include "wtap/sweep.hpp"
#include "wtap/text_doc.hpp"

namespace wtap {

struct FileMeta {
  std::string name;
  std::optional<std::uint64_t> seed;
};

struct DiscreteChannelFile {
  ChannelSpec channel;
  FileMeta meta;
};
struct GaussChannelFile {
  GaussChannel channel;
  FileMeta meta;
};
struct HGaussChannelFile {
  HGaussChannel channel;
  FileMeta meta;
};
using ChannelFile = std::variant<DiscreteChannelFile, GaussChannelFile, HGaussChannelFile>;

// ParseError with line and column; ValidationError for values that parse
// but do not describe a channel (a non-PSD covariance names its smallest
// eigenvalue).
ChannelFile parse_channel(const TextDoc& doc);
ChannelFile parse_channel_text(const std::string& text, const std::string& source = "<string>");
ChannelFile parse_channel_file(const std::string& path);

std::string emit_channel(const DiscreteChannelFile& f);
std::string emit_channel(const GaussChannelFile& f);
std::string emit_channel(const HGaussChannelFile& f);

// Aux file: `kind degraded|general`, `vars NAME CARD ...` (first variable
// most significant) and a [probs] section with the masses in order.
AuxJoint parse_aux(const TextDoc& doc);
AuxJoint parse_aux_file(const std::string& path);
std::string emit_aux(const AuxJoint& aux);

// Split file: `dim d` and either [K] or [K0] [K1] [K2].
CovSplit parse_split(const TextDoc& doc);
CovSplit parse_split_file(const std::string& path);
std::string emit_split(const CovSplit& s);

// Mixture file: `noise s1 s2 sz` and a [points] section of `u x w` rows.
ScalarMixture parse_mixture(const TextDoc& doc);
ScalarMixture parse_mixture_file(const std::string& path);
std::string emit_mixture(const ScalarMixture& m);

// A rectangular table rendered either as CSV or as an aligned text table.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
  std::string pretty() const;
};

enum class OutFormat { Csv, Pretty };
OutFormat parse_format(const std::string& s);

// 12 significant digits; negative zero prints as 0.
std::string fmt_num(double v);

// Header `kind,<vars>,rhs`. Constraint rows first (kind `constraint`, then
// `nonneg` for each variable), then `vertex` rows; an empty polytope adds a
// single `EMPTY` row.
Table region_table(const IneqSystem& sys, const VPolytope* poly = nullptr);
Table vertex_table(const VPolytope& poly);
Table constants_table(const RegionPoint& p);
// One row per sample: index, aux hash, the bound constants, vertex count.
Table sweep_table(const SweepResult& r);
Table cov_sweep_table(const CovSweepResult& r);
Table hull_table(const std::vector<std::string>& vars, const std::vector<Eigen::VectorXd>& hull);

// Writes to `path`, or stdout when path is empty or "-". IoError on failure.
void write_table(const Table& t, const std::string& path, OutFormat format);
void emit_region_csv(const IneqSystem& sys, const VPolytope* poly, const std::string& path);
void emit_region_csv(const VPolytope& poly, const std::string& path);
void emit_region_csv(const SweepResult& r, const std::string& path);

}  // namespace wtap
