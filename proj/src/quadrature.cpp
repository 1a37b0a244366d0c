#include "schurnorm/quadrature.hpp"

#include <cmath>
#include <string>

namespace schurnorm {

QuadGrid make_grid(double tau, Eigen::Index m) {
  if (m < 3 || m % 2 == 0) {
    throw BadGridSize("make_grid: Simpson 1/3 needs an odd node count >= 3, got " +
                      std::to_string(m));
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw DomainError("make_grid: tau must be positive and finite");
  }
  QuadGrid g;
  g.tau = tau;
  g.m = m;
  const double h = tau / static_cast<double>(m - 1);
  g.nodes.resize(m);
  g.weights.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    g.nodes[i] = -tau + static_cast<double>(i) * h;
    g.weights[i] = (i == 0 || i == m - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
  }
  g.nodes[m - 1] = 0.0;
  g.weights *= h / 3.0;
  return g;
}

bool on_jump_line(const QuadGrid& grid_theta, const QuadGrid& grid_s,
                  Eigen::Index i, Eigen::Index j) {
  // theta_i + s_j = -tau  <=>  i/(m_theta-1) + j/(m_s-1) = 1
  const Eigen::Index nt = grid_theta.m - 1;
  const Eigen::Index ns = grid_s.m - 1;
  return i * ns + j * nt == nt * ns;
}

}  // namespace schurnorm
