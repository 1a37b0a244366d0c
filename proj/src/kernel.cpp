#include "schurnorm/kernel.hpp"

#include <cmath>
#include <sstream>

#include "schurnorm/errors.hpp"

namespace schurnorm {

namespace {

// Relative slack used when deciding whether a point lies on an indicator
// boundary or inside the square.
constexpr double kEdgeSlack = 1e-12;

void check_tau(const KernelParams& params) {
  if (!(params.tau > 0.0) || !std::isfinite(params.tau)) {
    throw DomainError("kernel: tau must be positive and finite");
  }
}

void check_square(const KernelParams& params, double theta, double s) {
  const double lo = -params.tau * (1.0 + kEdgeSlack);
  const double hi = params.tau * kEdgeSlack;
  if (!(theta >= lo && theta <= hi && s >= lo && s <= hi)) {
    std::ostringstream msg;
    msg << "kernel: (theta, s) = (" << theta << ", " << s
        << ") outside [-tau, 0]^2 with tau = " << params.tau;
    throw DomainError(msg.str());
  }
}

// chi[-tau-theta, 0](s)
bool in_shifted_support(double tau, double theta, double s, Indicator side) {
  const double gap = theta + s + tau;
  const double slack = kEdgeSlack * tau;
  return side == Indicator::Closed ? gap >= -slack : gap > slack;
}

// sinh(delta t) / delta, continuous through delta = 0.
cplx sinhc(cplx delta, double t) {
  const cplx x = delta * t;
  if (std::abs(x) < 1e-6) {
    const cplx x2 = x * x;
    return t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
  }
  return std::sinh(x) / delta;
}

}  // namespace

Complex2x2 operator*(const Complex2x2& x, const Complex2x2& y) {
  return {x.e11 * y.e11 + x.e12 * y.e21, x.e11 * y.e12 + x.e12 * y.e22,
          x.e21 * y.e11 + x.e22 * y.e21, x.e21 * y.e12 + x.e22 * y.e22};
}

Complex2x2 operator+(const Complex2x2& x, const Complex2x2& y) {
  return {x.e11 + y.e11, x.e12 + y.e12, x.e21 + y.e21, x.e22 + y.e22};
}

Complex2x2 operator*(cplx c, const Complex2x2& x) {
  return {c * x.e11, c * x.e12, c * x.e21, c * x.e22};
}

Complex2x2 build_d0(const KernelParams& params) {
  const cplx p = params.p();
  return {-params.a, params.b, -params.b * std::exp(-p * params.tau),
          params.a - p};
}

D0Exponential::D0Exponential(const KernelParams& params, SqrtBranch branch)
    : d0_(build_d0(params)) {
  alpha_ = d0_.trace() / 2.0;
  half_gap_ = (d0_.e11 - d0_.e22) / 2.0;
  delta_ = std::sqrt(half_gap_ * half_gap_ + d0_.e12 * d0_.e21);
  if (branch == SqrtBranch::Negated) delta_ = -delta_;
}

Complex2x2 D0Exponential::operator()(double t) const {
  if (std::abs(delta_ * t) <= 1.0) {
    const cplx sc = sinhc(delta_, t);
    const cplx diag = std::cosh(delta_ * t) - alpha_ * sc;
    const cplx scale = std::exp(alpha_ * t);
    return {scale * (diag + sc * d0_.e11), scale * sc * d0_.e12,
            scale * sc * d0_.e21, scale * (diag + sc * d0_.e22)};
  }
  // Large |delta t|: cosh and sinh cancel catastrophically, so expand in the
  // eigenvalues alpha +- delta instead. u = delta + h and v = delta - h
  // satisfy u v = e12 e21; the smaller one is recovered from the product.
  cplx u = delta_ + half_gap_;
  cplx v = delta_ - half_gap_;
  const cplx off = d0_.e12 * d0_.e21;
  if (std::abs(u) >= std::abs(v)) {
    v = off / u;
  } else {
    u = off / v;
  }
  const cplx e1 = std::exp((alpha_ + delta_) * t);
  const cplx e2 = std::exp((alpha_ - delta_) * t);
  const cplx inv = 1.0 / (2.0 * delta_);
  return {inv * (e1 * u + e2 * v), inv * (e1 - e2) * d0_.e12,
          inv * (e1 - e2) * d0_.e21, inv * (e1 * v + e2 * u)};
}

Complex2x2 expm_d0(const KernelParams& params, double t) {
  return D0Exponential(params)(t);
}

MackeyGlassMapping mg_map(const MackeyGlassParams& mg) {
  if (mg.kappa == 0.0) {
    throw DomainError("mg_map: kappa must be nonzero");
  }
  const double km1 = mg.kappa - 1.0;
  MackeyGlassMapping out;
  out.lambda = 0.5 * mg.tau_prime * mg.beta * (km1 * km1 / mg.kappa + 1.0);
  out.params.a = -mg.tau_prime * mg.gamma;
  out.params.b = mg.tau_prime * mg.beta - out.lambda;
  out.params.tau = 1.0;
  return out;
}

cplx denom(const KernelParams& params, double eps) {
  check_tau(params);
  const cplx p = params.p();
  const cplx value =
      1.0 - std::exp(p * params.tau) * expm_d0(params, params.tau).e21;
  if (!(std::abs(value) > eps)) {
    std::ostringstream msg;
    msg << "degenerate kernel denominator |1 - e^{p tau} g21(tau)| = "
        << std::abs(value) << " at nu0 = " << params.nu0
        << ", omega = " << params.omega
        << "; the line -nu0 + iR must avoid the spectrum";
    throw DegenerateDenominator(msg.str(), params.nu0, params.omega);
  }
  return value;
}

TransferKernel::TransferKernel(const KernelParams& params, double eps)
    : params_(params), expm_(params), p_(params.p()), denom_(denom(params, eps)) {}

cplx TransferKernel::operator()(double theta, double s, Indicator side) const {
  check_square(params_, theta, s);
  const double tau = params_.tau;
  const cplx ept = std::exp(p_ * tau);

  const Complex2x2 g_tt = expm_(tau + theta);
  const Complex2x2 g_ms = expm_(-s);
  const Complex2x2 g_ts = expm_(tau + s);
  cplx value = std::exp(p_ * theta) * ept * g_tt.e21 *
               (std::exp(-p_ * s) * g_ms.e21 - g_ts.e22) / denom_;

  if (s <= theta + kEdgeSlack * tau) {
    value += std::exp(-p_ * s) * expm_(theta - s).e21;
  }
  if (in_shifted_support(tau, theta, s, side)) {
    value -= expm_(theta + tau + s).e22;
  }
  return value;
}

AsymptoticKernel::AsymptoticKernel(const KernelParams& params)
    : params_(params) {
  check_tau(params);
}

cplx AsymptoticKernel::operator()(double theta, double s,
                                  Indicator side) const {
  check_square(params_, theta, s);
  const double tau = params_.tau;
  if (!in_shifted_support(tau, theta, s, side)) return 0.0;
  const double a = params_.a;
  return -std::exp(a * theta) * std::exp((a - params_.p()) * (tau + s));
}

double AsymptoticKernel::modulus(double theta, double s, Indicator side) const {
  check_square(params_, theta, s);
  const double tau = params_.tau;
  if (!in_shifted_support(tau, theta, s, side)) return 0.0;
  const double a = params_.a;
  return std::exp(a * theta) * std::exp((a + params_.nu0) * (tau + s));
}

cplx kernel_k(const KernelParams& params, double theta, double s) {
  return TransferKernel(params)(theta, s);
}

cplx kernel_kbar(const KernelParams& params, double theta, double s) {
  return AsymptoticKernel(params)(theta, s);
}

double kernel_kbar_abs(const KernelParams& params, double theta, double s) {
  return AsymptoticKernel(params).modulus(theta, s);
}

}  // namespace schurnorm
