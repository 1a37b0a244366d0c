#include "schurnorm/nlp.hpp"

#include <algorithm>
#include <cmath>

#include "schurnorm/errors.hpp"
#include "schurnorm/qp.hpp"

namespace schurnorm {

namespace {

struct Eval {
  double f = 0.0;
  Eigen::VectorXd grad;
  Eigen::VectorXd g;
  Eigen::MatrixXd jac;
  double violation = 0.0;
};

Eval evaluate(const NlpProblem& pb, const Eigen::VectorXd& z) {
  Eval e;
  e.grad.resize(pb.n);
  e.f = pb.objective(z, e.grad);
  e.g.resize(pb.num_constraints);
  e.jac.resize(pb.num_constraints, pb.n);
  if (pb.num_constraints > 0) pb.constraints(z, e.g, e.jac);
  e.violation = pb.num_constraints > 0 ? std::max(0.0, e.g.maxCoeff()) : 0.0;
  return e;
}

double merit(const Eval& e, const Eigen::VectorXd& rho) {
  return e.f + rho.dot(e.g.cwiseMax(0.0));
}

// Bound rows appended after the nonlinear constraints: -d_k <= z_k - lo_k
// and d_k <= hi_k - z_k.
struct BoundRows {
  std::vector<Eigen::Index> index;
  std::vector<double> sign;  // -1 lower, +1 upper
};

BoundRows bound_rows(const NlpProblem& pb) {
  BoundRows rows;
  for (Eigen::Index k = 0; k < pb.n; ++k) {
    if (pb.lower && std::isfinite((*pb.lower)[k])) {
      rows.index.push_back(k);
      rows.sign.push_back(-1.0);
    }
    if (pb.upper && std::isfinite((*pb.upper)[k])) {
      rows.index.push_back(k);
      rows.sign.push_back(1.0);
    }
  }
  return rows;
}

// True when candidate (viol, f) should replace the incumbent best iterate.
bool better(double viol_c, double f_c, double viol_b, double f_b, double feas_tol) {
  const bool feas_c = viol_c <= feas_tol;
  const bool feas_b = viol_b <= feas_tol;
  if (feas_c != feas_b) return feas_c;
  if (feas_c) return f_c < f_b;
  return viol_c < viol_b;
}

}  // namespace

void NlpProblem::set_constraints(std::vector<ScalarConstraint> list) {
  num_constraints = static_cast<Eigen::Index>(list.size());
  constraints = [list = std::move(list)](const Eigen::VectorXd& z, Eigen::VectorXd& g,
                                         Eigen::MatrixXd& jac) {
    const auto m = static_cast<Eigen::Index>(list.size());
    g.resize(m);
    jac.resize(m, z.size());
    Eigen::VectorXd grad(z.size());
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto row = static_cast<Eigen::Index>(k);
      g[row] = list[k](z, grad);
      jac.row(row) = grad.transpose();
    }
  };
}

const char* to_string(NlpStatus status) {
  switch (status) {
    case NlpStatus::Converged:
      return "converged";
    case NlpStatus::MaxIterations:
      return "max-iterations";
    case NlpStatus::LineSearchFailure:
      return "line-search-failure";
  }
  return "unknown";
}

NlpResult solve(const NlpProblem& pb, const NlpOptions& opt) {
  const Eigen::Index n = pb.n;
  const Eigen::Index m = pb.num_constraints;
  if (pb.start.size() != n) throw DimensionMismatch("nlp: start has wrong length");
  if ((pb.lower && pb.lower->size() != n) || (pb.upper && pb.upper->size() != n)) {
    throw DimensionMismatch("nlp: bounds have wrong length");
  }

  Eigen::VectorXd z = pb.start;
  if (pb.lower) z = z.cwiseMax(*pb.lower);
  if (pb.upper) z = z.cwiseMin(*pb.upper);

  const BoundRows bounds = bound_rows(pb);
  const Eigen::Index nb = static_cast<Eigen::Index>(bounds.index.size());

  Eval cur = evaluate(pb, z);
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
  bool fresh_hessian = true;
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);

  NlpResult best;
  best.z = z;
  best.objective = cur.f;
  best.max_violation = cur.violation;
  best.multipliers = lambda;

  Eigen::MatrixXd A(m + nb, n);
  Eigen::VectorXd rhs(m + nb);
  NlpStatus status = NlpStatus::MaxIterations;
  int it = 0;

  for (; it < opt.max_iter; ++it) {
    A.topRows(m) = cur.jac;
    rhs.head(m) = -cur.g;
    A.bottomRows(nb).setZero();
    for (Eigen::Index r = 0; r < nb; ++r) {
      const Eigen::Index k = bounds.index[static_cast<std::size_t>(r)];
      const double sgn = bounds.sign[static_cast<std::size_t>(r)];
      A(m + r, k) = sgn;
      rhs[m + r] = sgn < 0 ? z[k] - (*pb.lower)[k] : (*pb.upper)[k] - z[k];
    }

    QpResult qp = solve_qp(B, cur.grad, A, rhs);
    if (qp.status == QpStatus::NotPositiveDefinite) {
      B.setIdentity();
      fresh_hessian = true;
      qp = solve_qp(B, cur.grad, A, rhs);
    }
    Eigen::VectorXd d;
    Eigen::VectorXd mult;
    if (qp.status == QpStatus::Optimal) {
      d = qp.x;
      mult = qp.multipliers;
    } else {
      // Elastic subproblem: one slack xi >= 0 relaxes every nonlinear row.
      const double penalty = 1e4 * (1.0 + cur.grad.lpNorm<Eigen::Infinity>());
      Eigen::MatrixXd G2 = Eigen::MatrixXd::Identity(n + 1, n + 1);
      G2.topLeftCorner(n, n) = B;
      Eigen::VectorXd c2(n + 1);
      c2 << cur.grad, penalty;
      Eigen::MatrixXd A2 = Eigen::MatrixXd::Zero(m + nb + 1, n + 1);
      A2.topLeftCorner(m + nb, n) = A;
      A2.block(0, n, m, 1).setConstant(-1.0);
      A2(m + nb, n) = -1.0;
      Eigen::VectorXd rhs2(m + nb + 1);
      rhs2 << rhs, 0.0;
      const QpResult el = solve_qp(G2, c2, A2, rhs2);
      if (el.status != QpStatus::Optimal) {
        status = NlpStatus::LineSearchFailure;
        break;
      }
      d = el.x.head(n);
      mult = el.multipliers.head(m + nb);
    }
    lambda = mult.head(m);

    // First-order test at the current iterate with the QP multipliers.
    Eigen::VectorXd grad_l = cur.grad + cur.jac.transpose() * lambda;
    double compl_res = m > 0 ? lambda.cwiseProduct(cur.g).cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index r = 0; r < nb; ++r) {
      const Eigen::Index k = bounds.index[static_cast<std::size_t>(r)];
      const double sgn = bounds.sign[static_cast<std::size_t>(r)];
      grad_l[k] += sgn * mult[m + r];
      compl_res = std::max(compl_res, std::abs(mult[m + r] * rhs[m + r]));
    }
    const double stat_res = grad_l.lpNorm<Eigen::Infinity>();
    const double scale = 1.0 + cur.grad.lpNorm<Eigen::Infinity>();
    const double kkt = std::max(stat_res, compl_res);
    if (cur.violation <= opt.feas_tol && kkt <= opt.kkt_tol * scale) {
      best.z = z;
      best.objective = cur.f;
      best.max_violation = cur.violation;
      best.multipliers = lambda;
      best.kkt_residual = kkt;
      best.iterations = it;
      best.status = NlpStatus::Converged;
      return best;
    }
    if (d.lpNorm<Eigen::Infinity>() <= 1e-16 * (1.0 + z.lpNorm<Eigen::Infinity>())) {
      status = NlpStatus::LineSearchFailure;
      break;
    }

    for (Eigen::Index k = 0; k < m; ++k) {
      const double lk = std::abs(lambda[k]);
      rho[k] = it == 0 ? lk : std::max(lk, 0.5 * (rho[k] + lk));
    }
    const double phi0 = merit(cur, rho);
    const double slope = cur.grad.dot(d) - rho.dot(cur.g.cwiseMax(0.0));
    if (!(slope < 0.0)) {
      if (fresh_hessian) {
        status = NlpStatus::LineSearchFailure;
        break;
      }
      B.setIdentity();
      fresh_hessian = true;
      continue;
    }

    double alpha = 1.0;
    Eval trial;
    bool accepted = false;
    while (alpha > 1e-10) {
      trial = evaluate(pb, z + alpha * d);
      const double phi = merit(trial, rho);
      if (std::isfinite(phi) && phi <= phi0 + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      double next = 0.5 * alpha;
      if (std::isfinite(phi)) {
        const double denom = 2.0 * (phi - phi0 - alpha * slope);
        if (denom > 0.0) next = -slope * alpha * alpha / denom;
      }
      alpha = std::clamp(next, 0.1 * alpha, 0.5 * alpha);
    }
    if (!accepted) {
      if (fresh_hessian) {
        status = NlpStatus::LineSearchFailure;
        break;
      }
      B.setIdentity();
      fresh_hessian = true;
      continue;
    }

    const Eigen::VectorXd s = alpha * d;
    Eigen::VectorXd y =
        (trial.grad - cur.grad) + (trial.jac - cur.jac).transpose() * lambda;
    const Eigen::VectorXd Bs = B * s;
    const double sBs = s.dot(Bs);
    double sy = s.dot(y);
    if (sy < 0.2 * sBs) {
      const double theta = 0.8 * sBs / (sBs - sy);
      y = theta * y + (1.0 - theta) * Bs;
      sy = s.dot(y);
    }
    if (sBs > 0.0 && sy > 0.0) {
      B.noalias() += (y * y.transpose()) / sy - (Bs * Bs.transpose()) / sBs;
      B = 0.5 * (B + B.transpose()).eval();
      fresh_hessian = false;
    }

    z += s;
    cur = std::move(trial);
    if (better(cur.violation, cur.f, best.max_violation, best.objective, opt.feas_tol)) {
      best.z = z;
      best.objective = cur.f;
      best.max_violation = cur.violation;
      best.multipliers = lambda;
    }
  }

  best.iterations = it;
  best.status = status;
  return best;
}

}  // namespace schurnorm
