#include "schurnorm/divided_difference.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace schurnorm {

namespace {

using cplx = std::complex<double>;

// Below this node spread the Taylor series around the mean is used.
constexpr double kSeriesSpread = 1.0;
constexpr int kSeriesTerms = 40;

// exp[x_0..x_k] = e^c * sum_n h_n(x - c) / (n + k)!, with h_n the complete
// homogeneous symmetric polynomials of the shifted nodes.
template <std::size_t K>
cplx series_dd(const std::array<cplx, K>& nodes) {
  cplx c = 0.0;
  for (const cplx& z : nodes) c += z;
  c /= static_cast<double>(K);

  std::array<cplx, kSeriesTerms> h{};
  h[0] = 1.0;
  for (std::size_t v = 0; v < K; ++v) {
    const cplx x = nodes[v] - c;
    for (int n = 1; n < kSeriesTerms; ++n) h[n] += x * h[n - 1];
  }

  double inv_fact = 1.0;
  for (std::size_t n = 2; n < K; ++n) inv_fact /= static_cast<double>(n);
  cplx sum = 0.0;
  for (int n = 0; n < kSeriesTerms; ++n) {
    sum += h[n] * inv_fact;
    inv_fact /= static_cast<double>(n + K);
  }
  return std::exp(c) * sum;
}

}  // namespace

cplx exp_dd(cplx z0, cplx z1) {
  const cplx d = z1 - z0;
  if (std::abs(d) < kSeriesSpread) return series_dd<2>({z0, z1});
  return (std::exp(z1) - std::exp(z0)) / d;
}

cplx exp_dd(cplx z0, cplx z1, cplx z2) {
  const double d01 = std::abs(z1 - z0);
  const double d02 = std::abs(z2 - z0);
  const double d12 = std::abs(z2 - z1);
  const double spread = std::max({d01, d02, d12});
  if (spread < kSeriesSpread) return series_dd<3>({z0, z1, z2});

  // Divide by the widest pair; the two-point differences stay accurate.
  if (d02 >= d01 && d02 >= d12) return (exp_dd(z1, z2) - exp_dd(z0, z1)) / (z2 - z0);
  if (d01 >= d12) return (exp_dd(z2, z1) - exp_dd(z0, z2)) / (z1 - z0);
  return (exp_dd(z0, z2) - exp_dd(z1, z0)) / (z2 - z1);
}

}  // namespace schurnorm
