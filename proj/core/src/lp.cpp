#include "wtap/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace wtap {

namespace {

struct Tableau {
  Eigen::MatrixXd t;  // m rows of constraints, last column is rhs
  std::vector<int> basis;

  int rows() const { return static_cast<int>(t.rows()); }
  int cols() const { return static_cast<int>(t.cols()) - 1; }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i < rows(); ++i)
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Maximize obj over columns [0, ncols). Returns false when unbounded.
  bool optimize(const Eigen::VectorXd& obj, int ncols, double tol) {
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        double rc = obj(j);
        for (int i = 0; i < rows(); ++i) rc -= obj(basis[static_cast<std::size_t>(i)]) * t(i, j);
        if (rc > tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        double a = t(i, enter);
        if (a <= tol) continue;
        double ratio = t(i, cols()) / a;
        if (ratio < best - tol ||
            (std::abs(ratio - best) <= tol && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

LpResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::MatrixXd& Aeq, const Eigen::VectorXd& beq, double tol) {
  const int n = static_cast<int>(c.size());
  const int mi = static_cast<int>(A.rows());
  const int me = static_cast<int>(Aeq.rows());
  const int m = mi + me;

  int nart = 0;
  for (int i = 0; i < mi; ++i)
    if (b(i) < 0) ++nart;
  nart += me;
  const int slack0 = n, art0 = n + mi, total = n + mi + nart;

  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m, total + 1);
  tab.basis.assign(static_cast<std::size_t>(m), -1);
  int a = art0;
  for (int i = 0; i < mi; ++i) {
    double sign = b(i) < 0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = sign * A.row(i);
    tab.t(i, slack0 + i) = sign;
    tab.t(i, total) = sign * b(i);
    if (b(i) < 0) {
      tab.t(i, a) = 1.0;
      tab.basis[static_cast<std::size_t>(i)] = a++;
    } else {
      tab.basis[static_cast<std::size_t>(i)] = slack0 + i;
    }
  }
  for (int k = 0; k < me; ++k) {
    int i = mi + k;
    double sign = beq(k) < 0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = sign * Aeq.row(k);
    tab.t(i, total) = sign * beq(k);
    tab.t(i, a) = 1.0;
    tab.basis[static_cast<std::size_t>(i)] = a++;
  }

  LpResult res;
  if (nart > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
    phase1.segment(art0, nart).setConstant(-1.0);
    tab.optimize(phase1, total, tol);
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (tab.basis[static_cast<std::size_t>(i)] >= art0) infeas += tab.t(i, total);
    double scale = 1.0 + b.cwiseAbs().sum() + (me ? beq.cwiseAbs().sum() : 0.0);
    if (infeas > 1e-9 * scale) return res;
    // Drive remaining artificials out of the basis or drop redundant rows.
    for (int i = 0; i < tab.rows(); ++i) {
      if (tab.basis[static_cast<std::size_t>(i)] < art0) continue;
      int col = -1;
      for (int j = 0; j < art0; ++j)
        if (std::abs(tab.t(i, j)) > 1e-9) {
          col = j;
          break;
        }
      if (col >= 0) {
        tab.pivot(i, col);
      } else {
        Eigen::MatrixXd reduced(tab.rows() - 1, tab.t.cols());
        reduced << tab.t.topRows(i), tab.t.bottomRows(tab.rows() - i - 1);
        tab.t = reduced;
        tab.basis.erase(tab.basis.begin() + i);
        --i;
      }
    }
  }
  // Phase 2 on the original and slack columns only.
  Eigen::MatrixXd trimmed(tab.rows(), art0 + 1);
  trimmed << tab.t.leftCols(art0), tab.t.col(total);
  tab.t = trimmed;
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(art0);
  obj.head(n) = c;
  if (!tab.optimize(obj, art0, tol)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < tab.rows(); ++i) {
    int bv = tab.basis[static_cast<std::size_t>(i)];
    if (bv < n) res.x(bv) = tab.t(i, art0);
  }
  res.value = c.dot(res.x);
  return res;
}

}  // namespace wtap
