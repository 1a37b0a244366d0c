#pragma once

// Independent reference computations used only by the tests.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major

inline Mat2 mul2(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

// exp(A t) by scaling and squaring of a truncated Taylor series.
inline Mat2 expm_taylor(const Mat2& a, double t) {
  double nrm = 0.0;
  for (const cplx& v : a) nrm = std::max(nrm, std::abs(v * t));
  int squarings = 0;
  double scale = t;
  while (2.0 * nrm > 0.25) {
    nrm *= 0.5;
    scale *= 0.5;
    ++squarings;
  }
  Mat2 x{a[0] * scale, a[1] * scale, a[2] * scale, a[3] * scale};
  Mat2 sum{1.0, 0.0, 0.0, 1.0};
  Mat2 term{1.0, 0.0, 0.0, 1.0};
  for (int k = 1; k <= 30; ++k) {
    term = mul2(term, x);
    for (cplx& v : term) v /= static_cast<double>(k);
    for (int e = 0; e < 4; ++e) sum[e] += term[e];
  }
  for (int s = 0; s < squarings; ++s) sum = mul2(sum, sum);
  return sum;
}

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t k = 0; k < n; ++k) ev[k] = a[k][k];
  return ev;
}

// Largest singular value of a complex matrix via the real embedding of A^H A.
inline double largest_singular_jacobi(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.cols();
  std::vector<std::vector<cplx>> h(n, std::vector<cplx>(n, 0.0));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < a.rows(); ++k) h[i][j] += std::conj(a(k, i)) * a(k, j);
  std::vector<std::vector<double>> r(2 * n, std::vector<double>(2 * n, 0.0));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      r[i][j] = h[i][j].real();
      r[i + n][j + n] = h[i][j].real();
      r[i][j + n] = -h[i][j].imag();
      r[i + n][j] = h[i][j].imag();
    }
  }
  double mx = 0.0;
  for (double v : jacobi_eigenvalues(r)) mx = std::max(mx, v);
  return std::sqrt(mx);
}

// Central differences with relative step.
inline Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double rel_step = 1e-6) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd jac(f0.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double h = rel_step * std::max(1.0, std::abs(x[k]));
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    jac.col(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

// Adaptive Simpson on [lo, hi], used for 1D closed-form checks.
inline double adaptive_simpson(const std::function<double(double)>& f, double lo,
                               double hi, double tol = 1e-13, int depth = 50) {
  const std::function<double(double, double, double, double, double, double, double, int)>
      rec = [&](double a, double b, double fa, double fm, double fb, double whole,
                double eps, int d) -> double {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(a, m, fa, flm, fm, left, eps / 2, d - 1) +
           rec(m, b, fm, frm, fb, right, eps / 2, d - 1);
  };
  const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
  return rec(lo, hi, fa, fm, fb, (hi - lo) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

}  // namespace oracles
