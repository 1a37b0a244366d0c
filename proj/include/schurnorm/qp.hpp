#pragma once

#include <Eigen/Dense>

namespace schurnorm {

enum class QpStatus { Optimal, Infeasible, NotPositiveDefinite, IterationLimit };

struct QpResult {
  QpStatus status = QpStatus::Optimal;
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;  // one per row of A, >= 0
  int iterations = 0;
};

/// Strictly convex inequality-constrained QP
///
///   min 1/2 x'Gx + c'x   s.t.   A x <= b
///
/// by the Goldfarb-Idnani dual active-set method. G must be symmetric
/// positive definite.
QpResult solve_qp(const Eigen::MatrixXd& G, const Eigen::VectorXd& c,
                  const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace schurnorm
