#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

namespace schurnorm {

/// Smooth inequality-constrained problem
///
///   min f(z)   s.t.   g_k(z) <= 0,  lower <= z <= upper.
struct NlpProblem {
  // Returns f(z) and writes its gradient.
  using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;
  // Writes g(z) (num_constraints) and its Jacobian (num_constraints x n).
  using Constraints =
      std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)>;
  // A single constraint: returns g_k(z) and writes its gradient.
  using ScalarConstraint = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

  Eigen::Index n = 0;
  Objective objective;
  Eigen::Index num_constraints = 0;
  Constraints constraints;
  std::optional<Eigen::VectorXd> lower;
  std::optional<Eigen::VectorXd> upper;
  Eigen::VectorXd start;

  // Packs a list of scalar constraints into the batch form.
  void set_constraints(std::vector<ScalarConstraint> list);
};

struct NlpOptions {
  double kkt_tol = 1e-8;
  int max_iter = 200;
  double feas_tol = 1e-8;
};

enum class NlpStatus { Converged, MaxIterations, LineSearchFailure };

const char* to_string(NlpStatus status);

struct NlpResult {
  Eigen::VectorXd z;
  NlpStatus status = NlpStatus::MaxIterations;
  int iterations = 0;
  double objective = 0.0;
  double max_violation = 0.0;
  double kkt_residual = 0.0;
  Eigen::VectorXd multipliers;  // one per constraint
};

/// Sequential quadratic programming: damped BFGS Hessian of the Lagrangian,
/// QP subproblems by a dual active-set method (elastic fallback when the
/// linearization is inconsistent), and an L1 exact-penalty line search with
/// Powell's per-constraint weights. Converged means max(g, 0) <= feas_tol and
/// the stationarity and complementarity residuals are below
/// kkt_tol * (1 + |grad f|). Otherwise the best iterate is returned.
NlpResult solve(const NlpProblem& problem, const NlpOptions& options = {});

}  // namespace schurnorm
