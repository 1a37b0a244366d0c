#pragma once

// Transfer-operator kernels of the twofold additive compound delay operator.
//
// For scalars (a, b, tau, nu0, omega) put p = -nu0 + i*omega and
//
//   D0 = [[ -a,             b     ],
//         [ -b*exp(-p*tau), a - p ]].
//
// With g0_jk(t) the entries of exp(D0*t), the kernel on [-tau,0]^2 is
//
//   K(theta,s) = exp(p*theta) exp(p*tau) g21(tau+theta)
//                  * (exp(-p*s) g21(-s) - g22(tau+s)) / (1 - exp(p*tau) g21(tau))
//              + chi[-tau,theta](s) exp(-p*s) g21(theta-s)
//              - chi[-tau-theta,0](s) g22(theta+tau+s)
//
// and its |omega| -> inf limit is
//
//   Kbar(theta,s) = -exp(a*theta) chi[-tau-theta,0](s) exp((a-p)(tau+s)).

#include <array>
#include <complex>

namespace schurnorm {

using cplx = std::complex<double>;

struct KernelParams {
  double a = 0.0;
  double b = 0.0;
  double tau = 1.0;
  double nu0 = 0.0;
  double omega = 0.0;

  cplx p() const { return {-nu0, omega}; }
};

struct MackeyGlassParams {
  double gamma = 0.1;
  double beta = 0.2;
  double kappa = 10.0;
  double tau_prime = 4.5;
};

struct MackeyGlassMapping {
  KernelParams params;  // omega and nu0 left at zero
  double lambda = 0.0;
};

// Row-major 2x2 complex matrix.
struct Complex2x2 {
  cplx e11{}, e12{}, e21{}, e22{};

  static Complex2x2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  cplx trace() const { return e11 + e22; }
  cplx det() const { return e11 * e22 - e12 * e21; }
};

Complex2x2 operator*(const Complex2x2& x, const Complex2x2& y);
Complex2x2 operator+(const Complex2x2& x, const Complex2x2& y);
Complex2x2 operator*(cplx c, const Complex2x2& x);

// Which side of the jump line s = -tau - theta the indicator is evaluated on.
// Closed includes the line (the pointwise convention); Open excludes it and
// gives the one-sided limit from outside the support.
enum class Indicator { Closed, Open };

constexpr double kDefaultDenominatorEps = 1e-10;

Complex2x2 build_d0(const KernelParams& params);
Complex2x2 expm_d0(const KernelParams& params, double t);
MackeyGlassMapping mg_map(const MackeyGlassParams& mg);

// Throws DegenerateDenominator when |1 - exp(p tau) g21(tau)| <= eps.
cplx denom(const KernelParams& params, double eps = kDefaultDenominatorEps);

cplx kernel_k(const KernelParams& params, double theta, double s);
cplx kernel_kbar(const KernelParams& params, double theta, double s);
double kernel_kbar_abs(const KernelParams& params, double theta, double s);

// Branch of delta = +-sqrt(-det(D0 - alpha I)); the exponential does not
// depend on it.
enum class SqrtBranch { Principal, Negated };

/// Closed-form exponential of a fixed D0, precomputed for repeated use:
///   exp(D0 t) = e^{alpha t} [(cosh(delta t) - alpha sinh(delta t)/delta) I
///                            + sinh(delta t)/delta D0],  alpha = tr(D0)/2.
class D0Exponential {
 public:
  explicit D0Exponential(const KernelParams& params,
                         SqrtBranch branch = SqrtBranch::Principal);

  Complex2x2 operator()(double t) const;
  const Complex2x2& d0() const { return d0_; }

 private:
  Complex2x2 d0_;
  cplx alpha_;
  cplx half_gap_;
  cplx delta_;
};

/// Kernel K for fixed parameters. Construction validates tau and the
/// denominator; evaluation is then a pure function of (theta, s).
class TransferKernel {
 public:
  explicit TransferKernel(const KernelParams& params,
                          double eps = kDefaultDenominatorEps);

  cplx operator()(double theta, double s,
                  Indicator side = Indicator::Closed) const;

  const KernelParams& params() const { return params_; }
  cplx denominator() const { return denom_; }

 private:
  KernelParams params_;
  D0Exponential expm_;
  cplx p_;
  cplx denom_;
};

/// Asymptotic kernel Kbar for fixed parameters.
class AsymptoticKernel {
 public:
  explicit AsymptoticKernel(const KernelParams& params);

  cplx operator()(double theta, double s,
                  Indicator side = Indicator::Closed) const;
  double modulus(double theta, double s,
                 Indicator side = Indicator::Closed) const;

  const KernelParams& params() const { return params_; }

 private:
  KernelParams params_;
};

}  // namespace schurnorm
