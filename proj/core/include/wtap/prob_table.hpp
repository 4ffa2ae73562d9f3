#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace wtap {

struct VarId {
  std::string name;
  std::size_t card = 1;
};

using VarSet = std::vector<std::string>;

inline constexpr std::size_t kMaxCells = 10'000'000;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kNegativeMassTol = -1e-15;
inline constexpr double kMiClamp = -1e-12;

// Dense joint pmf; the first variable is the most significant index.
class ProbTable {
 public:
  ProbTable() = default;
  ProbTable(std::vector<VarId> vars, std::vector<double> probs);

  static ProbTable from_function(std::vector<VarId> vars,
                                 const std::function<double(const std::vector<std::size_t>&)>& fn);

  const std::vector<VarId>& vars() const { return vars_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

  bool has(const std::string& name) const;
  std::size_t position(const std::string& name) const;
  std::size_t card(const std::string& name) const { return vars_[position(name)].card; }

  // Marginal over `keep`, in the given order.
  ProbTable marginal(const VarSet& keep) const;
  // Joint entropy (nats) of the listed variables; empty set gives 0.
  double entropy(const VarSet& set) const;

  double sum() const;

 private:
  std::vector<VarId> vars_;
  std::vector<double> probs_;
};

std::size_t cell_count(const std::vector<VarId>& vars);

void validate_table(const ProbTable& t);

// I(A;B|C) in nats, clamped at zero.
double mutual_information(const ProbTable& t, const VarSet& a, const VarSet& b,
                          const VarSet& c = {});

// Tests I(past; future | present) <= tol at every interior position of the chain.
bool check_markov(const ProbTable& t, const VarSet& chain, double tol);

}  // namespace wtap
