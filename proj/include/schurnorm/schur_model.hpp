#pragma once

// Schur test functions parametrized by a (1, 30, 2) network
//
//   N(x) = M2 * sigma(M1 x + b1) + b2,   sigma(y) = 1 / (1 + y^2),
//   p(theta) = N1(theta)^2 + 0.01,       q(s) = N2(s)^2 + 0.01,
//
// and the discretized Schur ratios
//
//   rx_i = sum_j w_j |K|_ij q_j / p_i,   ry_j = sum_i w_i |K|_ij p_i / q_j.
//
// sqrt(max rx * max ry) bounds the norm of the Nystrom matrix of |K|.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>

#include "schurnorm/quadrature.hpp"

namespace schurnorm {

constexpr Eigen::Index kHiddenUnits = 30;
constexpr Eigen::Index kModelParams = 4 * kHiddenUnits + 2;  // 122
constexpr double kSchurFloor = 0.01;

class SchurModel {
 public:
  // Flat layout: m1 (30), b1 (30), m2 (2x30 row-major), b2 (2).
  static constexpr Eigen::Index kM1 = 0;
  static constexpr Eigen::Index kB1 = kHiddenUnits;
  static constexpr Eigen::Index kM2 = 2 * kHiddenUnits;
  static constexpr Eigen::Index kB2 = 4 * kHiddenUnits;

  SchurModel();
  explicit SchurModel(Eigen::VectorXd params);

  // Every parameter uniform in [-1, 1) from mt19937_64(seed).
  static SchurModel random(std::uint64_t seed);

  const Eigen::VectorXd& params() const { return params_; }

  double m1(Eigen::Index h) const { return params_[kM1 + h]; }
  double b1(Eigen::Index h) const { return params_[kB1 + h]; }
  double m2(Eigen::Index row, Eigen::Index h) const {
    return params_[kM2 + row * kHiddenUnits + h];
  }
  double b2(Eigen::Index row) const { return params_[kB2 + row]; }

  std::pair<double, double> eval(double x) const;

 private:
  Eigen::VectorXd params_;
};

inline std::pair<double, double> eval_n(const SchurModel& model, double x) {
  return model.eval(x);
}

struct SchurPQ {
  Eigen::VectorXd p;
  Eigen::VectorXd q;
};

SchurPQ eval_pq(const SchurModel& model, const QuadGrid& grid);

// p, q and their derivatives with respect to the 122 parameters at the
// given nodes (rows of dp, dq index the nodes).
struct SchurPQJacobian {
  Eigen::VectorXd p, q;
  Eigen::MatrixXd dp, dq;
};

SchurPQJacobian eval_pq_jacobian(const SchurModel& model,
                                 const Eigen::VectorXd& nodes_theta,
                                 const Eigen::VectorXd& nodes_s);

struct SchurField {
  Eigen::VectorXd p, q, rx, ry;

  Eigen::Index argmax_x() const;  // lowest index on ties
  Eigen::Index argmax_y() const;
  double kappa_x() const { return rx.maxCoeff(); }
  double kappa_y() const { return ry.maxCoeff(); }
  // sqrt(kappa_x * kappa_y)
  double estimate() const;
};

struct IndexPair {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

SchurField ratios(const Eigen::MatrixXd& kabs, const SchurModel& model,
                  const QuadGrid& grid_theta, const QuadGrid& grid_s);

double pair_value(const SchurField& field, Eigen::Index i, Eigen::Index j);

struct ObjectiveGrad {
  Eigen::VectorXd values;
  Eigen::MatrixXd jacobian;  // pairs x 122
};

/// Precomputes the weighted kernel once so the ratio field and the pair
/// Jacobians can be evaluated repeatedly for different models.
class SchurProblem {
 public:
  SchurProblem(Eigen::MatrixXd kabs, QuadGrid grid_theta, QuadGrid grid_s);

  SchurField field(const SchurModel& model) const;
  ObjectiveGrad objective_grad(const SchurModel& model,
                               std::span<const IndexPair> pairs) const;

  const Eigen::MatrixXd& kabs() const { return kabs_; }
  const QuadGrid& grid_theta() const { return grid_theta_; }
  const QuadGrid& grid_s() const { return grid_s_; }

 private:
  Eigen::MatrixXd kabs_;
  QuadGrid grid_theta_;
  QuadGrid grid_s_;
  Eigen::MatrixXd row_weighted_;  // |K|_ij w_j  (rx numerators)
  Eigen::MatrixXd col_weighted_;  // w_i |K|_ij  (ry numerators)
};

ObjectiveGrad objective_grad(const Eigen::MatrixXd& kabs, const SchurModel& model,
                             const QuadGrid& grid_theta, const QuadGrid& grid_s,
                             std::span<const IndexPair> pairs);

}  // namespace schurnorm
