#include "schurnorm/norms.hpp"

#include <cmath>
#include <numbers>

#include "schurnorm/divided_difference.hpp"
#include "schurnorm/errors.hpp"

namespace schurnorm {

namespace {

// Deterministic start vector with no exact zero components.
template <class Vec>
Vec start_vector(Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    v[k] = 1.0 + 0.25 * std::sin(1.0 + 0.7 * static_cast<double>(k));
  }
  return v / v.norm();
}

template <class Mat>
double largest_singular_value(const Mat& a, const PowerIterationOptions& opt) {
  using Vec = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Vec v = start_vector<Vec>(a.cols());
  double prev = 0.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    const Vec w = a * v;
    const double s2 = w.squaredNorm();
    Vec u = a.adjoint() * w;
    const double un = u.norm();
    if (un == 0.0) return 0.0;
    v = u / un;
    if (it > 0 && std::abs(s2 - prev) <= opt.rel_tol * s2) return std::sqrt(s2);
    prev = s2;
  }
  throw NoConvergence("power iteration did not converge");
}

}  // namespace

double l2_norm(const Eigen::MatrixXd& modulus_sq, const QuadGrid& grid_theta,
               const QuadGrid& grid_s) {
  return std::sqrt(std::max(0.0, integrate_2d(modulus_sq, grid_theta, grid_s)));
}

double l2_kbar_closed(const KernelParams& params) {
  // ||Kbar||^2 = int int_{0 <= v <= u <= tau} exp(2(a+nu0)u - 2av) du dv
  //            = tau^2 exp[0, 2(a+nu0)tau, 2 nu0 tau].
  const double tau = params.tau;
  if (!(tau > 0.0)) return 0.0;
  const double c = params.a + params.nu0;
  const double sq = tau * tau * exp_dd(0.0, 2.0 * c * tau, 2.0 * params.nu0 * tau).real();
  return std::sqrt(std::max(0.0, sq));
}

double nystrom_norm(const Eigen::MatrixXd& modulus, const QuadGrid& grid_theta,
                    const QuadGrid& grid_s, const PowerIterationOptions& opt) {
  if (modulus.rows() != grid_theta.m || modulus.cols() != grid_s.m) {
    throw DimensionMismatch("nystrom_norm: samples do not match grids");
  }
  const Eigen::MatrixXd m = grid_theta.weights.cwiseSqrt().asDiagonal() * modulus *
                            grid_s.weights.cwiseSqrt().asDiagonal();
  return largest_singular_value(m, opt);
}

Eigen::MatrixXcd trig_basis(const QuadGrid& grid, int n) {
  Eigen::MatrixXcd phi(grid.m, 2 * n + 1);
  const double scale = 1.0 / std::sqrt(grid.tau);
  for (int k = -n; k <= n; ++k) {
    const double freq = 2.0 * std::numbers::pi * k / grid.tau;
    for (Eigen::Index i = 0; i < grid.m; ++i) {
      phi(i, k + n) = std::polar(scale, freq * grid.nodes[i]);
    }
  }
  return phi;
}

TruncationMatrix truncation_matrix(const Eigen::MatrixXcd& samples, int n,
                                   const QuadGrid& grid_theta, const QuadGrid& grid_s) {
  if (samples.rows() != grid_theta.m || samples.cols() != grid_s.m) {
    throw DimensionMismatch("truncation_matrix: samples do not match grids");
  }
  if (n < 0) throw DomainError("truncation_matrix: mode count must be >= 0");
  const Eigen::MatrixXcd phi_theta = trig_basis(grid_theta, n);
  const Eigen::MatrixXcd phi_s = trig_basis(grid_s, n);
  const Eigen::MatrixXcd weighted =
      grid_theta.weights.cast<cplx>().asDiagonal() * samples *
      grid_s.weights.cast<cplx>().asDiagonal();
  return {n, phi_theta.adjoint() * weighted * phi_s};
}

TruncationMatrix truncation_matrix(const KernelParams& params, int n,
                                   const QuadGrid& grid_theta, const QuadGrid& grid_s) {
  const TransferKernel k(params);
  return truncation_matrix(sample_kernel_set(k, grid_theta, grid_s).value, n, grid_theta,
                           grid_s);
}

TruncationMatrix truncation_matrix_kbar(const KernelParams& params, int n) {
  // Entry (k, l) = -(1/tau) int_{-tau}^0 e^{mu_k theta}
  //                    int_{-tau-theta}^0 e^{c(tau+s)} e^{i w_l s} ds dtheta
  // with c = a - p, mu_k = a - i w_k, w_k = 2 pi k / tau. Substituting
  // u = tau + theta and v = -s gives a simplex integral of an exponential:
  //   -(tau e^{c tau} e^{-mu_k tau}) exp[0, mu_k tau, (mu_k - lambda_l) tau],
  // lambda_l = c + i w_l.
  if (n < 0) throw DomainError("truncation_matrix_kbar: mode count must be >= 0");
  const double tau = params.tau;
  const cplx c = params.a - params.p();
  const cplx prefactor = -tau * std::exp(c * tau);
  const double base = 2.0 * std::numbers::pi / tau;
  TruncationMatrix out{n, Eigen::MatrixXcd(2 * n + 1, 2 * n + 1)};
  for (int l = -n; l <= n; ++l) {
    const cplx lambda = c + cplx(0.0, base * l);
    for (int k = -n; k <= n; ++k) {
      const cplx mu(params.a, -base * k);
      out.entries(k + n, l + n) =
          prefactor * std::exp(-mu * tau) * exp_dd(0.0, mu * tau, (mu - lambda) * tau);
    }
  }
  return out;
}

double matrix_norm(const Eigen::MatrixXcd& a, const PowerIterationOptions& opt) {
  return largest_singular_value(a, opt);
}

}  // namespace schurnorm
