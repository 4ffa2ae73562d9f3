#pragma once

#include <array>
#include <string>
#include <vector>

#include "wtap/channel.hpp"
#include "wtap/polytope.hpp"
#include "wtap/prob_table.hpp"

namespace wtap {

// Rate coordinates, always in this order.
inline const std::vector<std::string> kRateVars = {"Rp1", "Rs1", "Rp2", "Rs2"};

inline constexpr double kAuxMarkovTol = 1e-10;

// Auxiliary distribution. Degraded: a table over U and the channel input.
// General: a table over Q, U, V1, V2 and the input with
// p(q,u) p(v1,v2,x|u).
struct AuxJoint {
  enum class Kind { Degraded, General };
  ProbTable table;
  Kind kind = Kind::Degraded;
};

AuxJoint make_degraded_aux(ProbTable t, const std::string& input = "X");
AuxJoint make_general_aux(ProbTable t, const std::string& input = "X");
// Throws InconsistentAux when the table does not fit the kind or channel.
void check_aux(const AuxJoint& aux, const ChannelSpec& ch);

// Raw bound constants in nats, labelled by the rate sum they bound. Secrecy
// differences may be negative.
struct RegionPoint {
  std::vector<std::string> labels;
  std::vector<double> values;

  double at(const std::string& label) const;
};

// Rate system built from rows of the form sum(rates) <= value.
IneqSystem rate_system(const std::vector<std::vector<std::string>>& lhs, const std::vector<double>& rhs,
                       const std::vector<std::string>& vars = kRateVars);

// Rate sums bounded by the degraded regions, in order; the outer bound
// omits the fourth.
const std::vector<std::vector<std::string>>& degraded_rows();

RegionPoint degraded_constants(const AuxJoint& aux, const ChannelSpec& ch);
IneqSystem eval_degraded_inner(const AuxJoint& aux, const ChannelSpec& ch);
IneqSystem eval_degraded_outer(const AuxJoint& aux, const ChannelSpec& ch);

// Per-message bounds of plain superposition coding, before any rate is moved
// between messages.
RegionPoint original_constants(const AuxJoint& aux, const ChannelSpec& ch);
IneqSystem eval_original_inner(const AuxJoint& aux, const ChannelSpec& ch);

// Lets confidential rate be reused as public rate and the second user's
// rates be carried by the first user's messages, then eliminates the
// slacks and prunes redundant rows.
IneqSystem transfer_rates(const IneqSystem& original, double tol = 1e-9);

RegionPoint general_constants(const AuxJoint& aux, const ChannelSpec& ch);
IneqSystem eval_general_inner(const AuxJoint& aux, const ChannelSpec& ch);

enum class Corollary { Cor1, Cor2, Cor3, Cor3Alt };
Corollary parse_corollary(const std::string& name);
// Input must be a degraded inner or outer system over kRateVars.
IneqSystem specialize_corollary(const IneqSystem& sys, Corollary which, double tol = 1e-9);

// (Rp1, Rs1, Rp2, Rs2) -> (R1, Re1, R2, Re2).
std::array<double, 4> to_equivocation(const std::array<double, 4>& rates);

}  // namespace wtap
