#pragma once

#include "schurnorm/minimax.hpp"
#include "schurnorm/schur_model.hpp"

namespace schurnorm {

/// Schur ratio products F_ij = rx_i * ry_j over the 122 model parameters.
class SchurFamily final : public PairFamily {
 public:
  explicit SchurFamily(SchurProblem problem) : problem_(std::move(problem)) {}

  Eigen::Index num_params() const override { return kModelParams; }
  Eigen::Index rows() const override { return problem_.grid_theta().m; }
  Eigen::Index cols() const override { return problem_.grid_s().m; }

  GridMax grid_max(const Eigen::VectorXd& x) const override;
  void values_and_jacobian(const Eigen::VectorXd& x, std::span<const IndexPair> pairs,
                           Eigen::VectorXd& values,
                           Eigen::MatrixXd& jacobian) const override;

  const SchurProblem& problem() const { return problem_; }

 private:
  SchurProblem problem_;
};

}  // namespace schurnorm
