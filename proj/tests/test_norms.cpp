#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "schurnorm/errors.hpp"
#include "schurnorm/kernel.hpp"
#include "schurnorm/norms.hpp"
#include "support/oracles.hpp"

using namespace schurnorm;

namespace {

const double kTwoOverPi = 2.0 / std::numbers::pi;

KernelParams mackey_glass(double omega) {
  KernelParams kp = mg_map(MackeyGlassParams{}).params;
  kp.nu0 = 0.01;
  kp.omega = omega;
  return kp;
}

double l2_kbar_simpson(const KernelParams& kp, Eigen::Index m) {
  const QuadGrid g = make_grid(kp.tau, m);
  return l2_norm(sample_kernel_set(AsymptoticKernel(kp), g, g).modulus_sq, g, g);
}

}  // namespace

TEST_CASE("triangular kernel chain") {
  const KernelParams tri;
  const QuadGrid g = make_grid(1.0, 251);
  const KernelSamples s = sample_kernel_set(AsymptoticKernel(tri), g, g);

  const double l2 = l2_norm(s.modulus_sq, g, g);
  const double nys = nystrom_norm(s.modulus, g, g);
  const double t0 = matrix_norm(truncation_matrix(s.value, 0, g, g));
  const double t50 = matrix_norm(truncation_matrix(s.value, 50, g, g));

  CHECK(l2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
  CHECK(l2_kbar_closed(tri) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(std::abs(nys - kTwoOverPi) <= 1e-3);
  CHECK(std::abs(t0 - 0.5) <= 1e-3);
  // The N = 50 truncation sits about 1.3e-3 below the operator norm.
  CHECK(std::abs(t50 - matrix_norm(truncation_matrix_kbar(tri, 50))) <= 1e-4);
  CHECK(t50 < kTwoOverPi);
  CHECK(kTwoOverPi - t50 <= 2e-3);
  CHECK(t0 <= t50 + 1e-12);
  CHECK(t50 <= nys + 2e-3);
  CHECK(nys <= l2 + 2e-3);
}

TEST_CASE("zero kernel norms") {
  const QuadGrid g = make_grid(1.0, 11);
  const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(11, 11);
  CHECK(l2_norm(z, g, g) == 0.0);
  CHECK(nystrom_norm(z, g, g) == 0.0);
  const TruncationMatrix t = truncation_matrix(Eigen::MatrixXcd::Zero(11, 11), 3, g, g);
  CHECK(t.entries.rows() == 7);
  CHECK(t.entries.cwiseAbs().maxCoeff() == 0.0);
  CHECK(matrix_norm(t) == 0.0);
}

TEST_CASE("l2_kbar_closed against fine quadrature") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ua(-1.5, 1.5), unu(-0.5, 0.5), ut(0.5, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 8; ++k) {
    KernelParams kp;
    kp.a = ua(gen);
    kp.nu0 = (k == 0) ? -kp.a : unu(gen);
    kp.tau = ut(gen);
    const double exact = l2_kbar_closed(kp);
    worst = std::max(worst, std::abs(l2_kbar_simpson(kp, 1001) - exact) / exact);
  }
  CHECK(worst <= 1e-6);

  const KernelParams mg = mackey_glass(0.0);
  CHECK(std::abs(l2_kbar_simpson(mg, 1001) / l2_kbar_closed(mg) - 1.0) <= 1e-6);
}

TEST_CASE("l2_kbar_closed removable cases") {
  // The closed form must stay continuous through a = 0, a + nu0 = 0 and nu0 = 0.
  for (const auto& [a, nu0] : std::vector<std::pair<double, double>>{
           {0.0, 0.3}, {0.4, -0.4}, {-0.7, 0.0}, {1e-12, 1e-12}, {0.2, -0.2 + 1e-13}}) {
    KernelParams kp;
    kp.a = a;
    kp.nu0 = nu0;
    KernelParams near = kp;
    near.a += 1e-7;
    near.nu0 -= 3e-7;
    CHECK(l2_kbar_closed(kp) == doctest::Approx(l2_kbar_closed(near)).epsilon(1e-6));
    CHECK(std::isfinite(l2_kbar_closed(kp)));
  }
  KernelParams small;
  small.tau = 1e-9;
  CHECK(l2_kbar_closed(small) <= 1e-9);
}

TEST_CASE("l2_norm of the Mackey-Glass Kbar modulus") {
  const KernelParams mg = mackey_glass(0.0);
  CHECK(std::abs(l2_kbar_simpson(mg, 251) / l2_kbar_closed(mg) - 1.0) <= 1e-4);
}

TEST_CASE("nystrom_norm scaling identity and rank one") {
  const QuadGrid g = make_grid(1.0, 41);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(41, 41);
  for (Eigen::Index k = 0; k < 41; ++k) d(k, k) = 1.0 / g.weights[k];
  CHECK(nystrom_norm(d, g, g) == doctest::Approx(1.0).epsilon(1e-10));

  const QuadGrid gs = make_grid(1.0, 31);
  const Eigen::VectorXd p = (1.0 + g.nodes.array().square()).matrix();
  const Eigen::VectorXd q = (2.0 + gs.nodes.array()).exp().matrix();
  const double pn = std::sqrt(integrate_1d(p.array().square().matrix(), g));
  const double qn = std::sqrt(integrate_1d(q.array().square().matrix(), gs));
  const Eigen::MatrixXd rank1 = p * q.transpose();
  CHECK(std::abs(nystrom_norm(rank1, g, gs) - pn * qn) <= 1e-10 * pn * qn);

  CHECK_THROWS_AS(nystrom_norm(Eigen::MatrixXd::Ones(3, 3), g, g), DimensionMismatch);
}

TEST_CASE("matrix_norm examples") {
  CHECK(matrix_norm(Eigen::MatrixXcd::Identity(11, 11)) == doctest::Approx(1.0).epsilon(1e-12));
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(5, 5);
  d(0, 0) = 3.0;
  CHECK(matrix_norm(d) == doctest::Approx(3.0).epsilon(1e-10));

  std::mt19937_64 gen(31);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXcd a(5, 5);
    for (Eigen::Index i = 0; i < 5; ++i)
      for (Eigen::Index j = 0; j < 5; ++j) a(i, j) = cplx(n01(gen), n01(gen));
    const double oracle = oracles::largest_singular_jacobi(a);
    CHECK(std::abs(matrix_norm(a) - oracle) <= 1e-8 * oracle);
  }
}

TEST_CASE("power iteration reports non-convergence") {
  // Two equal leading singular values with a tiny gap converge too slowly for 3 steps.
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(3, 3);
  a(1, 1) = 0.999999;
  PowerIterationOptions opt;
  opt.max_iter = 3;
  opt.rel_tol = 1e-16;
  CHECK_THROWS_AS(matrix_norm(a, opt), NoConvergence);
}

TEST_CASE("trig_basis is orthonormal under Simpson") {
  const QuadGrid g = make_grid(1.0, 401);
  const Eigen::MatrixXcd phi = trig_basis(g, 5);
  const Eigen::MatrixXcd gram = phi.adjoint() * g.weights.cast<cplx>().asDiagonal() * phi;
  CHECK((gram - Eigen::MatrixXcd::Identity(11, 11)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Kbar truncation by quadrature converges to the analytic entries") {
  const KernelParams kp = mackey_glass(3.0);
  const TruncationMatrix exact = truncation_matrix_kbar(kp, 50);
  const AsymptoticKernel kb(kp);
  auto error_at = [&](Eigen::Index m) {
    const QuadGrid g = make_grid(1.0, m);
    const Eigen::MatrixXcd s = sample_jump_kernel(kb, g, g);
    return (truncation_matrix(s, 50, g, g).entries - exact.entries).eval();
  };
  const Eigen::MatrixXcd e1001 = error_at(1001);
  const Eigen::MatrixXcd e2001 = error_at(2001);
  const double max1001 = e1001.cwiseAbs().maxCoeff();
  const double max2001 = e2001.cwiseAbs().maxCoeff();
  CHECK(max2001 <= 1e-5);
  // Second order across the jump line.
  CHECK(max1001 / max2001 == doctest::Approx(4.0).epsilon(0.05));
  // Richardson extrapolation removes the h^2 term.
  CHECK(((4.0 * e2001 - e1001) / 3.0).cwiseAbs().maxCoeff() <= 1e-6);

  KernelParams tri;
  CHECK(std::abs(truncation_matrix_kbar(tri, 0).entries(0, 0)) == doctest::Approx(0.5));
}

TEST_CASE("truncation norm is nondecreasing in N") {
  const KernelParams kp = mackey_glass(0.5);
  const QuadGrid g = make_grid(1.0, 251);
  const Eigen::MatrixXcd s = sample_kernel_set(TransferKernel(kp), g, g).value;
  double prev = 0.0;
  for (int n : {0, 5, 10, 25, 50}) {
    const double v = matrix_norm(truncation_matrix(s, n, g, g));
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("norms are even in omega") {
  const QuadGrid g = make_grid(1.0, 251);
  for (double omega : {0.7, 5.0}) {
    const KernelSamples sp = sample_kernel_set(TransferKernel(mackey_glass(omega)), g, g);
    const KernelSamples sm = sample_kernel_set(TransferKernel(mackey_glass(-omega)), g, g);
    const double lp = l2_norm(sp.modulus_sq, g, g), lm = l2_norm(sm.modulus_sq, g, g);
    CHECK(std::abs(lp - lm) <= 1e-8 * lp);
    const double tp = matrix_norm(truncation_matrix(sp.value, 50, g, g));
    const double tm = matrix_norm(truncation_matrix(sm.value, 50, g, g));
    CHECK(std::abs(tp - tm) <= 1e-8 * tp);
  }
}

TEST_CASE("bracketing at Mackey-Glass parameters") {
  const QuadGrid g = make_grid(1.0, 251);
  for (double omega : {-2.0, 0.0, 1.0, 10.0}) {
    const KernelSamples s = sample_kernel_set(TransferKernel(mackey_glass(omega)), g, g);
    const double trunc = matrix_norm(truncation_matrix(s.value, 50, g, g));
    const double nys = nystrom_norm(s.modulus, g, g);
    const double l2 = l2_norm(s.modulus_sq, g, g);
    CHECK(trunc <= nys + 2e-3);
    CHECK(nys <= l2 + 2e-3);
  }
}
