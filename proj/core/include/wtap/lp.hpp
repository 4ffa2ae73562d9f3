#pragma once

#include <Eigen/Dense>

namespace wtap {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
};

// maximize c'x  s.t.  A x <= b,  Aeq x = beq,  x >= 0.
// Dense two-phase tableau simplex with Bland's rule; sized for the small
// redundancy and membership problems of this library.
LpResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::MatrixXd& Aeq = Eigen::MatrixXd(),
                     const Eigen::VectorXd& beq = Eigen::VectorXd(), double tol = 1e-10);

}  // namespace wtap
