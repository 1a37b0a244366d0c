#include <doctest.h>

#include <cmath>

#include "schurnorm/nlp.hpp"
#include "schurnorm/qp.hpp"

using namespace schurnorm;

namespace {

NlpProblem::Objective minimize_last(Eigen::Index n) {
  return [n](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
    g = Eigen::VectorXd::Zero(n);
    g[n - 1] = 1.0;
    return z[n - 1];
  };
}

// min 1/2 z'Hz + c'z  s.t.  A z <= b, posed through the NLP interface.
NlpProblem quadratic_problem(const Eigen::MatrixXd& H, const Eigen::VectorXd& c,
                             const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& start) {
  NlpProblem p;
  p.n = H.rows();
  p.objective = [H, c](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
    g = H * z + c;
    return 0.5 * z.dot(H * z) + c.dot(z);
  };
  p.num_constraints = A.rows();
  p.constraints = [A, b](const Eigen::VectorXd& z, Eigen::VectorXd& g, Eigen::MatrixXd& j) {
    g = A * z - b;
    j = A;
  };
  p.start = start;
  return p;
}

double max_violation(const NlpProblem& p, const Eigen::VectorXd& z) {
  if (p.num_constraints == 0) return 0.0;
  Eigen::VectorXd g;
  Eigen::MatrixXd j;
  p.constraints(z, g, j);
  return std::max(0.0, g.maxCoeff());
}

}  // namespace

TEST_CASE("parabola epigraph") {
  NlpProblem p;
  p.n = 2;
  p.objective = minimize_last(2);
  p.set_constraints({[](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
    g = Eigen::Vector2d(2.0 * z[0], -1.0);
    return z[0] * z[0] - z[1];
  }});
  p.start = Eigen::Vector2d(1.0, 2.0);
  const NlpResult r = solve(p);
  CHECK(r.status == NlpStatus::Converged);
  CHECK(std::abs(r.z[0]) <= 1e-6);
  CHECK(std::abs(r.z[1]) <= 1e-6);
  CHECK(r.max_violation <= 1e-8);
}

TEST_CASE("active linear constraint") {
  NlpProblem p;
  p.n = 1;
  p.objective = minimize_last(1);
  p.set_constraints({[](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
    g = Eigen::VectorXd::Constant(1, -1.0);
    return 1.0 - z[0];
  }});
  p.start = Eigen::VectorXd::Constant(1, 5.0);
  const NlpResult r = solve(p);
  CHECK(r.status == NlpStatus::Converged);
  CHECK(std::abs(r.z[0] - 1.0) <= 1e-8);
  CHECK(r.multipliers[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Rosenbrock inside a disc") {
  NlpProblem p;
  p.n = 2;
  p.objective = [](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
    const double x = z[0], y = z[1];
    g = Eigen::Vector2d(-2.0 * (1.0 - x) - 400.0 * x * (y - x * x), 200.0 * (y - x * x));
    return (1.0 - x) * (1.0 - x) + 100.0 * (y - x * x) * (y - x * x);
  };
  p.set_constraints({[](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
    g = 2.0 * z;
    return z.squaredNorm() - 2.0;
  }});
  p.start = Eigen::Vector2d::Zero();
  const NlpResult r = solve(p);
  CHECK(std::abs(r.z[0] - 1.0) <= 1e-6);
  CHECK(std::abs(r.z[1] - 1.0) <= 1e-6);
  CHECK(r.objective <= 1e-6);
  CHECK(r.max_violation <= 1e-8);
}

TEST_CASE("convex QPs match their analytic optima") {
  SUBCASE("projection onto a half-plane") {
    // min |z - (2, 2)|^2 / 2  s.t.  z0 + z1 <= 1  ->  (0.5, 0.5)
    const NlpProblem p = quadratic_problem(Eigen::Matrix2d::Identity(), Eigen::Vector2d(-2, -2),
                                           Eigen::RowVector2d(1, 1), Eigen::VectorXd::Ones(1),
                                           Eigen::Vector2d::Zero());
    const NlpResult r = solve(p);
    CHECK(r.status == NlpStatus::Converged);
    CHECK((r.z - Eigen::Vector2d(0.5, 0.5)).cwiseAbs().maxCoeff() <= 1e-8);
  }
  SUBCASE("box corner") {
    // min (z0 - 3)^2 + 2 (z1 + 2)^2  s.t.  z0 <= 1, -z1 <= 0.5  ->  (1, -0.5)
    Eigen::Matrix2d H;
    H << 2, 0, 0, 4;
    Eigen::Matrix2d A;
    A << 1, 0, 0, -1;
    const NlpProblem p = quadratic_problem(H, Eigen::Vector2d(-6, 8), A, Eigen::Vector2d(1, 0.5),
                                           Eigen::Vector2d::Zero());
    const NlpResult r = solve(p);
    CHECK(r.status == NlpStatus::Converged);
    CHECK((r.z - Eigen::Vector2d(1.0, -0.5)).cwiseAbs().maxCoeff() <= 1e-8);
  }
  SUBCASE("coupled three-variable QP with an inactive constraint") {
    // min 1/2 z'Hz - 2e'z  s.t.  sum z <= 1, z2 <= 10 (inactive).
    // KKT: Hz = (2 - mu) e, sum z = 1.
    Eigen::Matrix3d H;
    H << 4, 1, 0, 1, 3, 1, 0, 1, 2;
    const Eigen::Vector3d e = Eigen::Vector3d::Ones();
    const Eigen::Vector3d hinv_e = H.ldlt().solve(e);
    const double mu = 2.0 - 1.0 / hinv_e.sum();
    const Eigen::Vector3d expected = (2.0 - mu) * hinv_e;
    Eigen::Matrix<double, 2, 3> A;
    A << 1, 1, 1, 0, 0, 1;
    const NlpProblem p =
        quadratic_problem(H, -2.0 * e, A, Eigen::Vector2d(1.0, 10.0), Eigen::Vector3d::Zero());
    const NlpResult r = solve(p);
    CHECK(r.status == NlpStatus::Converged);
    CHECK(mu > 0.0);
    CHECK((r.z - expected).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("solve is deterministic") {
  NlpProblem p;
  p.n = 3;
  p.objective = minimize_last(3);
  std::vector<NlpProblem::ScalarConstraint> cons;
  for (double x : {-1.0, -0.3, 0.2, 0.9}) {
    cons.push_back([x](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
      const double r = std::exp(x) - z[0] - z[1] * x;
      g = Eigen::Vector3d(-2.0 * r, -2.0 * r * x, -1.0);
      return r * r - z[2];
    });
  }
  p.set_constraints(cons);
  p.start = Eigen::Vector3d(0.0, 0.0, 10.0);
  const NlpResult a = solve(p), b = solve(p);
  CHECK(a.z == b.z);
  CHECK(a.iterations == b.iterations);
  CHECK(a.status == b.status);
}

TEST_CASE("feasible starts stay feasible") {
  // Minimax of a few smooth functions from several feasible starts.
  for (double t0 : {5.0, 1.0, 0.2}) {
    NlpProblem p;
    p.n = 3;
    p.objective = minimize_last(3);
    std::vector<NlpProblem::ScalarConstraint> cons;
    for (int k = 0; k < 6; ++k) {
      const double c = std::cos(k), s = std::sin(k);
      cons.push_back([c, s](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
        const double u = z[0] - c, v = z[1] - s;
        g = Eigen::Vector3d(2.0 * u, 2.0 * v, -1.0);
        return u * u + v * v - z[2];
      });
    }
    p.set_constraints(cons);
    p.start = Eigen::Vector3d(0.1, -0.1, t0);
    const double start_violation = max_violation(p, p.start);
    const NlpResult r = solve(p);
    if (start_violation == 0.0) CHECK(r.max_violation <= 1e-8);
    CHECK(r.max_violation <= start_violation + 1e-8);
  }
}

TEST_CASE("bounds are respected") {
  NlpProblem p;
  p.n = 2;
  p.objective = [](const Eigen::VectorXd& z, Eigen::VectorXd& g) {
    g = Eigen::Vector2d(z[0] - 4.0, z[1] + 4.0);
    return 0.5 * ((z[0] - 4.0) * (z[0] - 4.0) + (z[1] + 4.0) * (z[1] + 4.0));
  };
  p.lower = Eigen::Vector2d(-1.0, -1.0);
  p.upper = Eigen::Vector2d(1.0, 1.0);
  p.start = Eigen::Vector2d::Zero();
  const NlpResult r = solve(p);
  CHECK(r.status == NlpStatus::Converged);
  CHECK((r.z - Eigen::Vector2d(1.0, -1.0)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("solve_qp direct") {
  // min 1/2|x|^2 - x0  s.t. x0 <= 0.25
  const QpResult r = solve_qp(Eigen::Matrix2d::Identity(), Eigen::Vector2d(-1, 0),
                              Eigen::RowVector2d(1, 0), Eigen::VectorXd::Constant(1, 0.25));
  CHECK(r.status == QpStatus::Optimal);
  CHECK(std::abs(r.x[0] - 0.25) <= 1e-14);
  CHECK(std::abs(r.x[1]) <= 1e-14);
  CHECK(r.multipliers[0] == doctest::Approx(0.75));

  Eigen::Matrix2d A;
  A << 1, 0, -1, 0;
  const QpResult bad = solve_qp(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), A,
                                Eigen::Vector2d(-1.0, -1.0));
  CHECK(bad.status == QpStatus::Infeasible);

  Eigen::Matrix2d indefinite;
  indefinite << 1, 0, 0, -1;
  CHECK(solve_qp(indefinite, Eigen::Vector2d::Zero(), Eigen::MatrixXd(0, 2), Eigen::VectorXd(0))
            .status == QpStatus::NotPositiveDefinite);
}
