#pragma once

// Reference norms bracketing ||T_K||:
//   truncation norm (P_N T_K P_N)  <=  ||T_K||  <=  ||T_|K|||  <=  ||K||_L2.

#include <Eigen/Dense>

#include "schurnorm/kernel.hpp"
#include "schurnorm/quadrature.hpp"

namespace schurnorm {

struct TruncationMatrix {
  int n = 0;                  // modes -n..n
  Eigen::MatrixXcd entries;   // (2n+1) x (2n+1)
};

struct PowerIterationOptions {
  double rel_tol = 1e-10;
  int max_iter = 10000;
};

// sqrt of the tensor Simpson integral of |K|^2 samples.
double l2_norm(const Eigen::MatrixXd& modulus_sq, const QuadGrid& grid_theta,
               const QuadGrid& grid_s);

// ||Kbar||_L2 in closed form.
double l2_kbar_closed(const KernelParams& params);

// Largest singular value of diag(sqrt w) |K| diag(sqrt w').
double nystrom_norm(const Eigen::MatrixXd& modulus, const QuadGrid& grid_theta,
                    const QuadGrid& grid_s, const PowerIterationOptions& opt = {});

// Orthonormal trigonometric basis phi_k(theta) = exp(i 2 pi k theta / tau) / sqrt(tau),
// k = -n..n, sampled on the grid nodes (rows) for each mode (columns).
Eigen::MatrixXcd trig_basis(const QuadGrid& grid, int n);

// Entries int int K(theta, s) phi_l(s) conj(phi_k(theta)) ds dtheta by tensor Simpson.
TruncationMatrix truncation_matrix(const Eigen::MatrixXcd& samples, int n,
                                   const QuadGrid& grid_theta, const QuadGrid& grid_s);
TruncationMatrix truncation_matrix(const KernelParams& params, int n,
                                   const QuadGrid& grid_theta, const QuadGrid& grid_s);

// Same entries for Kbar, integrated exactly.
TruncationMatrix truncation_matrix_kbar(const KernelParams& params, int n);

double matrix_norm(const Eigen::MatrixXcd& a, const PowerIterationOptions& opt = {});
inline double matrix_norm(const TruncationMatrix& m, const PowerIterationOptions& opt = {}) {
  return matrix_norm(m.entries, opt);
}

}  // namespace schurnorm
