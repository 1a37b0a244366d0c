#include "schurnorm/schur_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace schurnorm {

namespace {

inline double sigma(double y) { return 1.0 / (1.0 + y * y); }

inline double sigma_prime(double y) {
  const double d = 1.0 + y * y;
  return -2.0 * y / (d * d);
}

// Lowest index among maxima.
Eigen::Index first_argmax(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < v.size(); ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

// Fills y = N_row(x) and dy/dparams for one output row of the network.
void output_row_with_grad(const SchurModel& model, Eigen::Index row, double x,
                          double& y,
                          Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>> grad) {
  grad.setZero();
  y = model.b2(row);
  for (Eigen::Index h = 0; h < kHiddenUnits; ++h) {
    const double z = model.m1(h) * x + model.b1(h);
    const double act = sigma(z);
    const double w = model.m2(row, h);
    y += w * act;
    const double dz = w * sigma_prime(z);
    grad[SchurModel::kM1 + h] = dz * x;
    grad[SchurModel::kB1 + h] = dz;
    grad[SchurModel::kM2 + row * kHiddenUnits + h] = act;
  }
  grad[SchurModel::kB2 + row] = 1.0;
}

}  // namespace

SchurModel::SchurModel() : params_(Eigen::VectorXd::Zero(kModelParams)) {}

SchurModel::SchurModel(Eigen::VectorXd params) : params_(std::move(params)) {
  if (params_.size() != kModelParams) {
    throw DimensionMismatch("SchurModel: expected 122 parameters, got " +
                            std::to_string(params_.size()));
  }
  if (!params_.allFinite()) {
    throw DomainError("SchurModel: parameters must be finite");
  }
}

SchurModel SchurModel::random(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Eigen::VectorXd v(kModelParams);
  for (Eigen::Index k = 0; k < kModelParams; ++k) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v[k] = 2.0 * u - 1.0;
  }
  return SchurModel(std::move(v));
}

std::pair<double, double> SchurModel::eval(double x) const {
  double n1 = b2(0);
  double n2 = b2(1);
  for (Eigen::Index h = 0; h < kHiddenUnits; ++h) {
    const double act = sigma(m1(h) * x + b1(h));
    n1 += m2(0, h) * act;
    n2 += m2(1, h) * act;
  }
  return {n1, n2};
}

SchurPQ eval_pq(const SchurModel& model, const QuadGrid& grid) {
  SchurPQ out{Eigen::VectorXd(grid.m), Eigen::VectorXd(grid.m)};
  for (Eigen::Index k = 0; k < grid.m; ++k) {
    const auto [n1, n2] = model.eval(grid.nodes[k]);
    out.p[k] = n1 * n1 + kSchurFloor;
    out.q[k] = n2 * n2 + kSchurFloor;
  }
  return out;
}

SchurPQJacobian eval_pq_jacobian(const SchurModel& model,
                                 const Eigen::VectorXd& nodes_theta,
                                 const Eigen::VectorXd& nodes_s) {
  SchurPQJacobian out;
  out.p.resize(nodes_theta.size());
  out.q.resize(nodes_s.size());
  out.dp.resize(nodes_theta.size(), kModelParams);
  out.dq.resize(nodes_s.size(), kModelParams);
  double y = 0.0;
  for (Eigen::Index k = 0; k < nodes_theta.size(); ++k) {
    output_row_with_grad(model, 0, nodes_theta[k], y, out.dp.row(k));
    out.p[k] = y * y + kSchurFloor;
    out.dp.row(k) *= 2.0 * y;
  }
  for (Eigen::Index k = 0; k < nodes_s.size(); ++k) {
    output_row_with_grad(model, 1, nodes_s[k], y, out.dq.row(k));
    out.q[k] = y * y + kSchurFloor;
    out.dq.row(k) *= 2.0 * y;
  }
  return out;
}

Eigen::Index SchurField::argmax_x() const { return first_argmax(rx); }
Eigen::Index SchurField::argmax_y() const { return first_argmax(ry); }

double SchurField::estimate() const {
  return std::sqrt(std::max(0.0, kappa_x() * kappa_y()));
}

double pair_value(const SchurField& field, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || i >= field.rx.size() || j < 0 || j >= field.ry.size()) {
    throw IndexOutOfRange("pair_value: index pair (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") out of range");
  }
  return field.rx[i] * field.ry[j];
}

SchurProblem::SchurProblem(Eigen::MatrixXd kabs, QuadGrid grid_theta, QuadGrid grid_s)
    : kabs_(std::move(kabs)),
      grid_theta_(std::move(grid_theta)),
      grid_s_(std::move(grid_s)) {
  if (kabs_.rows() != grid_theta_.m || kabs_.cols() != grid_s_.m) {
    throw DimensionMismatch("SchurProblem: kernel samples do not match grids");
  }
  if ((kabs_.array() < 0.0).any()) {
    throw DomainError("SchurProblem: kernel modulus samples must be nonnegative");
  }
  row_weighted_ = kabs_ * grid_s_.weights.asDiagonal();
  col_weighted_ = grid_theta_.weights.asDiagonal() * kabs_;
}

SchurField SchurProblem::field(const SchurModel& model) const {
  SchurField f;
  f.p = eval_pq(model, grid_theta_).p;
  f.q = eval_pq(model, grid_s_).q;
  f.rx = (row_weighted_ * f.q).cwiseQuotient(f.p);
  f.ry = (col_weighted_.transpose() * f.p).cwiseQuotient(f.q);
  return f;
}

ObjectiveGrad SchurProblem::objective_grad(const SchurModel& model,
                                           std::span<const IndexPair> pairs) const {
  const Eigen::Index n = static_cast<Eigen::Index>(pairs.size());
  ObjectiveGrad out{Eigen::VectorXd(n), Eigen::MatrixXd(n, kModelParams)};
  if (n == 0) return out;

  const SchurPQJacobian pq = eval_pq_jacobian(model, grid_theta_.nodes, grid_s_.nodes);
  const Eigen::VectorXd num_x = row_weighted_ * pq.q;
  const Eigen::VectorXd num_y = col_weighted_.transpose() * pq.p;

  // Gradients are needed only for the distinct rows and columns in play.
  std::vector<Eigen::Index> rows, cols;
  for (const IndexPair& pr : pairs) {
    if (pr.i < 0 || pr.i >= grid_theta_.m || pr.j < 0 || pr.j >= grid_s_.m) {
      throw IndexOutOfRange("objective_grad: pair out of range");
    }
    rows.push_back(pr.i);
    cols.push_back(pr.j);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

  const Eigen::MatrixXd drx_num = row_weighted_(rows, Eigen::all) * pq.dq;
  const Eigen::MatrixXd dry_num = col_weighted_(Eigen::all, cols).transpose() * pq.dp;

  Eigen::MatrixXd drx(rows.size(), kModelParams);
  Eigen::VectorXd rx(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Eigen::Index i = rows[r];
    rx[r] = num_x[i] / pq.p[i];
    drx.row(r) = (drx_num.row(r) - rx[r] * pq.dp.row(i)) / pq.p[i];
  }
  Eigen::MatrixXd dry(cols.size(), kModelParams);
  Eigen::VectorXd ry(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const Eigen::Index j = cols[c];
    ry[c] = num_y[j] / pq.q[j];
    dry.row(c) = (dry_num.row(c) - ry[c] * pq.dq.row(j)) / pq.q[j];
  }

  for (Eigen::Index k = 0; k < n; ++k) {
    const auto r = std::lower_bound(rows.begin(), rows.end(), pairs[k].i) - rows.begin();
    const auto c = std::lower_bound(cols.begin(), cols.end(), pairs[k].j) - cols.begin();
    out.values[k] = rx[r] * ry[c];
    out.jacobian.row(k) = ry[c] * drx.row(r) + rx[r] * dry.row(c);
  }
  return out;
}

SchurField ratios(const Eigen::MatrixXd& kabs, const SchurModel& model,
                  const QuadGrid& grid_theta, const QuadGrid& grid_s) {
  return SchurProblem(kabs, grid_theta, grid_s).field(model);
}

ObjectiveGrad objective_grad(const Eigen::MatrixXd& kabs, const SchurModel& model,
                             const QuadGrid& grid_theta, const QuadGrid& grid_s,
                             std::span<const IndexPair> pairs) {
  return SchurProblem(kabs, grid_theta, grid_s).objective_grad(model, pairs);
}

}  // namespace schurnorm
