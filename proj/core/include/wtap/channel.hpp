#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>

#include "wtap/prob_table.hpp"
#include "wtap/rng.hpp"

namespace wtap {

// Row-stochastic kernel: rows indexed by input symbol, columns by output.
using Kernel = Eigen::MatrixXd;

void validate_kernel(const Kernel& k, const std::string& what);

// Discrete channel p(y1,y2,z|x). Stored either as the full joint kernel
// (columns ordered y1-major, z fastest) or as a degraded cascade
// p(y1|x) p(y2|y1) p(z|y2), which keeps large discretized channels cheap.
class ChannelSpec {
 public:
  static ChannelSpec from_joint(VarId input, std::array<VarId, 3> outputs, Kernel joint);
  static ChannelSpec from_cascade(VarId input, std::array<VarId, 3> outputs,
                                  std::array<Kernel, 3> stages);

  const VarId& input() const { return input_; }
  const std::array<VarId, 3>& outputs() const { return outputs_; }
  bool is_cascade() const { return cascade_.has_value(); }
  const std::array<Kernel, 3>& stages() const { return *cascade_; }

  // p(y_k|x) for k = 0 (Y1), 1 (Y2), 2 (Z).
  Kernel marginal(int k) const;
  // Full p(y1,y2,z|x); throws TooLarge past the cell cap.
  Kernel joint_kernel() const;

  std::optional<bool> degraded_flag;

 private:
  VarId input_;
  std::array<VarId, 3> outputs_;
  std::optional<Kernel> joint_;
  std::optional<std::array<Kernel, 3>> cascade_;
};

ChannelSpec build_degraded_joint(const Kernel& p_y1_given_x, const Kernel& p_y2_given_y1,
                                 const Kernel& p_z_given_y2);

// Physical degradedness X -> Y1 -> Y2 -> Z, checked on a uniform input.
bool is_degraded(const ChannelSpec& ch, double tol = 1e-10);

// Joint of an auxiliary table (which must contain the channel input
// variable) with the selected outputs: p(aux) * p(outputs | x).
ProbTable compose(const ProbTable& aux, const ChannelSpec& ch, const std::vector<int>& outputs);

ProbTable uniform_input_joint(const ChannelSpec& ch);

Kernel bsc(double crossover);
Kernel identity_kernel(std::size_t n);
Kernel uniform_kernel(std::size_t rows, std::size_t cols);
// Rows drawn from Dirichlet(1).
Kernel random_kernel(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace wtap
