#include "schurnorm/qp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace schurnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Givens rotation (c, s) with c*a + s*b = r, -s*a + c*b = 0.
void givens(double a, double b, double& c, double& s, double& r) {
  r = std::hypot(a, b);
  if (r == 0.0) {
    c = 1.0;
    s = 0.0;
  } else {
    c = a / r;
    s = b / r;
  }
}

// Rotates columns k1, k2 of J by (c, s).
void rotate_columns(Eigen::MatrixXd& J, Eigen::Index k1, Eigen::Index k2, double c,
                    double s) {
  for (Eigen::Index row = 0; row < J.rows(); ++row) {
    const double x = J(row, k1);
    const double y = J(row, k2);
    J(row, k1) = c * x + s * y;
    J(row, k2) = -s * x + c * y;
  }
}

}  // namespace

QpResult solve_qp(const Eigen::MatrixXd& G, const Eigen::VectorXd& c,
                  const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index n = G.rows();
  const Eigen::Index mc = A.rows();
  QpResult res;
  res.multipliers = Eigen::VectorXd::Zero(mc);

  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) {
    res.status = QpStatus::NotPositiveDefinite;
    res.x = Eigen::VectorXd::Zero(n);
    return res;
  }
  // J = L^{-T}; the unconstrained minimizer is -G^{-1} c.
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd J = L.transpose().triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(n, n));
  Eigen::VectorXd x = -llt.solve(c);

  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::Index> active;
  std::vector<double> u;
  std::vector<char> is_active(static_cast<std::size_t>(mc), 0);

  // Row scales for the violation test.
  Eigen::VectorXd row_norm(mc);
  for (Eigen::Index i = 0; i < mc; ++i) row_norm[i] = A.row(i).norm();

  const int max_iter = static_cast<int>(10 * (n + mc) + 100);
  Eigen::VectorXd d(n), z(n), r(n);

  auto drop = [&](std::size_t l) {
    const Eigen::Index q = static_cast<Eigen::Index>(active.size());
    is_active[static_cast<std::size_t>(active[l])] = 0;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(l));
    u.erase(u.begin() + static_cast<std::ptrdiff_t>(l));
    // Remove column l of R and restore triangularity.
    for (Eigen::Index col = static_cast<Eigen::Index>(l); col < q - 1; ++col) {
      R.col(col).head(q) = R.col(col + 1).head(q);
    }
    R.col(q - 1).setZero();
    for (Eigen::Index k = static_cast<Eigen::Index>(l); k < q - 1; ++k) {
      double cg, sg, rr;
      givens(R(k, k), R(k + 1, k), cg, sg, rr);
      for (Eigen::Index col = k; col < q - 1; ++col) {
        const double x1 = R(k, col);
        const double x2 = R(k + 1, col);
        R(k, col) = cg * x1 + sg * x2;
        R(k + 1, col) = -sg * x1 + cg * x2;
      }
      R(k + 1, k) = 0.0;
      rotate_columns(J, k, k + 1, cg, sg);
    }
  };

  int iter = 0;
  while (true) {
    // Most violated inactive constraint.
    Eigen::Index p = -1;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < mc; ++i) {
      if (is_active[static_cast<std::size_t>(i)]) continue;
      const double slack = b[i] - A.row(i).dot(x);
      const double tol = 1e-12 * (1.0 + std::abs(b[i]) + row_norm[i] * x.norm());
      if (slack < -tol && slack / (row_norm[i] + 1e-300) < worst) {
        worst = slack / (row_norm[i] + 1e-300);
        p = i;
      }
    }
    if (p < 0) break;

    // In Goldfarb-Idnani form the constraint reads np'x >= -b_p, np = -A_p'.
    const Eigen::VectorXd np = -A.row(p).transpose();
    double up = 0.0;  // multiplier of p while it is being added

    while (true) {
      if (++iter > max_iter) {
        res.status = QpStatus::IterationLimit;
        res.x = x;
        res.iterations = iter;
        return res;
      }
      const Eigen::Index q = static_cast<Eigen::Index>(active.size());
      d.noalias() = J.transpose() * np;
      z.noalias() = J.rightCols(n - q) * d.tail(n - q);
      if (q > 0) {
        r.head(q) = R.topLeftCorner(q, q).triangularView<Eigen::Upper>().solve(d.head(q));
      }

      double t1 = kInf;
      std::size_t l = 0;
      for (Eigen::Index k = 0; k < q; ++k) {
        if (r[k] > 1e-14 * (1.0 + std::abs(u[static_cast<std::size_t>(k)]))) {
          const double ratio = u[static_cast<std::size_t>(k)] / r[k];
          if (ratio < t1) {
            t1 = ratio;
            l = static_cast<std::size_t>(k);
          }
        }
      }
      const double slack_p = b[p] - A.row(p).dot(x);  // = np'x + b_p
      double t2 = kInf;
      const double zn = z.dot(np);
      if (z.norm() > 1e-14 * (1.0 + np.norm()) && zn > 0.0) {
        t2 = -slack_p / zn;
      }

      if (t1 == kInf && t2 == kInf) {
        res.status = QpStatus::Infeasible;
        res.x = x;
        res.iterations = iter;
        return res;
      }
      if (t2 == kInf) {
        for (Eigen::Index k = 0; k < q; ++k) u[static_cast<std::size_t>(k)] -= t1 * r[k];
        up += t1;
        drop(l);
        continue;
      }
      const double t = std::min(t1, t2);
      x += t * z;
      for (Eigen::Index k = 0; k < q; ++k) u[static_cast<std::size_t>(k)] -= t * r[k];
      up += t;

      if (t2 <= t1) {
        // Full step: add p. Zero d(q+1:n) with rotations applied to J.
        for (Eigen::Index k = n - 1; k > q; --k) {
          double cg, sg, rr;
          givens(d[k - 1], d[k], cg, sg, rr);
          d[k - 1] = rr;
          d[k] = 0.0;
          rotate_columns(J, k - 1, k, cg, sg);
        }
        R.col(q).head(q + 1) = d.head(q + 1);
        active.push_back(p);
        u.push_back(up);
        is_active[static_cast<std::size_t>(p)] = 1;
        break;
      }
      drop(l);
    }
  }

  for (std::size_t k = 0; k < active.size(); ++k) {
    res.multipliers[active[k]] = std::max(0.0, u[k]);
  }
  res.x = x;
  res.iterations = iter;
  res.status = QpStatus::Optimal;
  return res;
}

}  // namespace schurnorm
