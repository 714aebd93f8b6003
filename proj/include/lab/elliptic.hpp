#pragma once
// Theta function with rational characteristics,
//   theta[a;b](z,tau) = sum_m exp(i pi (m+a)^2 tau + 2 i pi (m+a)(z+b)),
// evaluated by direct summation over an adaptive window.  The summand is a
// Gaussian in m centered at m* = -a - Im z / Im tau; the half-width is chosen
// from the tail bound exp(-pi Im(tau) M^2) < tail.

#include "lab/scalar.hpp"

namespace lab {

template <class R>
cx<R> theta_char(R a, R b, cx<R> z, cx<R> tau, R tail = theta_tail<R>()) {
  const R imt = tau.imag();
  const R pi = pi_of<R>();
  const long m0 = std::lround(to_double(-a - z.imag() / imt));
  const int halfw = static_cast<int>(to_double(r_sqrt(r_log(R(1) / tail) / (pi * imt)))) + 3;
  const cx<R> I(0, 1);
  cx<R> s{};
  for (long m = m0 - halfw; m <= m0 + halfw; ++m) {
    const R ma = R(static_cast<double>(m)) + a;
    const cx<R> arg = I * pi * (ma * ma) * tau + I * (R(2) * pi) * ma * (z + b);
    s += cexp(arg);
  }
  return s;
}

}  // namespace lab
