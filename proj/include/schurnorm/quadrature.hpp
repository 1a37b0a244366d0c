#pragma once

#include <Eigen/Dense>
#include <complex>
#include <type_traits>

#include "schurnorm/errors.hpp"
#include "schurnorm/kernel.hpp"

namespace schurnorm {

/// Uniform grid on [-tau, 0] with composite Simpson 1/3 weights.
struct QuadGrid {
  double tau = 1.0;
  Eigen::Index m = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  double step() const { return tau / static_cast<double>(m - 1); }
};

// m must be odd and >= 3.
QuadGrid make_grid(double tau, Eigen::Index m);

template <class Derived>
typename Derived::Scalar integrate_1d(const Eigen::MatrixBase<Derived>& values,
                                      const QuadGrid& grid) {
  if (values.size() != grid.m) {
    throw DimensionMismatch("integrate_1d: values length does not match grid");
  }
  using Scalar = typename Derived::Scalar;
  return (values.derived().reshaped().array() * grid.weights.cast<Scalar>().array()).sum();
}

template <class Derived>
typename Derived::Scalar integrate_2d(const Eigen::MatrixBase<Derived>& samples,
                                      const QuadGrid& grid_theta,
                                      const QuadGrid& grid_s) {
  if (samples.rows() != grid_theta.m || samples.cols() != grid_s.m) {
    throw DimensionMismatch("integrate_2d: sample matrix does not match grids");
  }
  using Scalar = typename Derived::Scalar;
  return (grid_theta.weights.cast<Scalar>().transpose() * samples.derived() *
          grid_s.weights.cast<Scalar>())(0, 0);
}

template <class Kernel>
using kernel_scalar_t = std::invoke_result_t<const Kernel&, double, double>;

/// Pointwise samples k(theta_i, s_j).
template <class Kernel>
Eigen::Matrix<kernel_scalar_t<Kernel>, Eigen::Dynamic, Eigen::Dynamic>
sample_kernel(const Kernel& k, const QuadGrid& grid_theta, const QuadGrid& grid_s) {
  using Scalar = kernel_scalar_t<Kernel>;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(grid_theta.m, grid_s.m);
  for (Eigen::Index j = 0; j < grid_s.m; ++j) {
    for (Eigen::Index i = 0; i < grid_theta.m; ++i) {
      out(i, j) = k(grid_theta.nodes[i], grid_s.nodes[j]);
    }
  }
  return out;
}

/// True when node pair (i, j) lies on the jump line theta + s = -tau,
/// decided by index arithmetic.
bool on_jump_line(const QuadGrid& grid_theta, const QuadGrid& grid_s,
                  Eigen::Index i, Eigen::Index j);

/// Samples of a kernel that jumps across theta + s = -tau. Off the line the
/// value is k(theta, s, Closed); on grid-aligned line nodes it is the mean
/// of the closed and open one-sided values, which keeps tensor Simpson
/// second-order accurate across the discontinuity. `transform` is applied
/// to each one-sided value before averaging (e.g. modulus or its square).
template <class Kernel, class Transform>
auto sample_jump_kernel(const Kernel& k, const QuadGrid& grid_theta,
                        const QuadGrid& grid_s, const Transform& transform) {
  using Raw = std::invoke_result_t<const Kernel&, double, double, Indicator>;
  using Scalar = std::decay_t<std::invoke_result_t<const Transform&, Raw>>;
  if (std::abs(grid_theta.tau - grid_s.tau) > 1e-14 * grid_theta.tau) {
    throw DimensionMismatch("sample_jump_kernel: grids must share tau");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(grid_theta.m, grid_s.m);
  for (Eigen::Index j = 0; j < grid_s.m; ++j) {
    for (Eigen::Index i = 0; i < grid_theta.m; ++i) {
      const double th = grid_theta.nodes[i];
      const double s = grid_s.nodes[j];
      if (on_jump_line(grid_theta, grid_s, i, j)) {
        out(i, j) = 0.5 * (transform(k(th, s, Indicator::Closed)) +
                           transform(k(th, s, Indicator::Open)));
      } else {
        out(i, j) = transform(k(th, s, Indicator::Closed));
      }
    }
  }
  return out;
}

template <class Kernel>
auto sample_jump_kernel(const Kernel& k, const QuadGrid& grid_theta,
                        const QuadGrid& grid_s) {
  return sample_jump_kernel(k, grid_theta, grid_s, [](const auto& v) { return v; });
}

}  // namespace schurnorm

namespace schurnorm {

/// Jump-averaged samples of a complex kernel together with its modulus and
/// squared modulus (each averaged from the one-sided values separately).
///
/// modulus_sq is meant for 2D integration only. Where a row's jump node has
/// an odd index, Simpson's midpoint weight straddles the jump and the row
/// integral is off by h^2 (f'_- - f'_+) / 6; that node is shifted by
/// one-sided second-order differences to cancel it.
struct KernelSamples {
  Eigen::MatrixXcd value;
  Eigen::MatrixXd modulus;
  Eigen::MatrixXd modulus_sq;
};

template <class Kernel>
void correct_jump_rows(const Kernel& k, const QuadGrid& grid_theta, const QuadGrid& grid_s,
                       Eigen::MatrixXd& sq) {
  const Eigen::Index ms = grid_s.m;
  for (Eigen::Index i = 0; i < grid_theta.m; ++i) {
    for (Eigen::Index j = 3; j + 3 < ms + 1; j += 2) {
      if (!on_jump_line(grid_theta, grid_s, i, j)) continue;
      // Left of the jump is outside the shifted support (open side).
      const double th = grid_theta.nodes[i];
      const double s = grid_s.nodes[j];
      const double left = std::norm(k(th, s, Indicator::Open));
      const double right = std::norm(k(th, s, Indicator::Closed));
      const double dl = 0.5 * (3.0 * left - 4.0 * sq(i, j - 1) + sq(i, j - 2));
      const double dr = 0.5 * (-3.0 * right + 4.0 * sq(i, j + 1) - sq(i, j + 2));
      sq(i, j) -= (dl - dr) / 8.0;
    }
  }
}

template <class Kernel>
KernelSamples sample_kernel_set(const Kernel& k, const QuadGrid& grid_theta,
                                const QuadGrid& grid_s) {
  if (std::abs(grid_theta.tau - grid_s.tau) > 1e-14 * grid_theta.tau) {
    throw DimensionMismatch("sample_kernel_set: grids must share tau");
  }
  KernelSamples out{Eigen::MatrixXcd(grid_theta.m, grid_s.m),
                    Eigen::MatrixXd(grid_theta.m, grid_s.m),
                    Eigen::MatrixXd(grid_theta.m, grid_s.m)};
  for (Eigen::Index j = 0; j < grid_s.m; ++j) {
    for (Eigen::Index i = 0; i < grid_theta.m; ++i) {
      const double th = grid_theta.nodes[i];
      const double s = grid_s.nodes[j];
      const std::complex<double> closed = k(th, s, Indicator::Closed);
      if (on_jump_line(grid_theta, grid_s, i, j)) {
        const std::complex<double> open = k(th, s, Indicator::Open);
        out.value(i, j) = 0.5 * (closed + open);
        out.modulus(i, j) = 0.5 * (std::abs(closed) + std::abs(open));
        out.modulus_sq(i, j) = 0.5 * (std::norm(closed) + std::norm(open));
      } else {
        out.value(i, j) = closed;
        out.modulus(i, j) = std::abs(closed);
        out.modulus_sq(i, j) = std::norm(closed);
      }
    }
  }
  correct_jump_rows(k, grid_theta, grid_s, out.modulus_sq);
  return out;
}

}  // namespace schurnorm
