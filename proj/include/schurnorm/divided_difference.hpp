#pragma once

#include <complex>

namespace schurnorm {

// Divided differences of exp, accurate through confluent and nearly
// confluent nodes.
//
//   exp[z0, z1]     = (e^{z1} - e^{z0}) / (z1 - z0)
//   exp[z0, z1, z2] = integral of exp(s0 z0 + s1 z1 + s2 z2) over the
//                     standard 2-simplex (s_k >= 0, sum s_k = 1)
std::complex<double> exp_dd(std::complex<double> z0, std::complex<double> z1);
std::complex<double> exp_dd(std::complex<double> z0, std::complex<double> z1,
                            std::complex<double> z2);

}  // namespace schurnorm
