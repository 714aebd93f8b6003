#pragma once
// Real-scalar shims so the numerical core can be instantiated with either
// double or __float128.  std::complex<__float128> arithmetic (+,-,*,/) works
// through the primary template, but the transcendental helpers below must be
// provided by hand; never call std::exp/std::sin/std::abs on these complexes.

#include <cmath>
#include <complex>
#include <quadmath.h>

namespace lab {

using quad = __float128;

inline double r_exp(double x) { return std::exp(x); }
inline double r_log(double x) { return std::log(x); }
inline double r_sin(double x) { return std::sin(x); }
inline double r_cos(double x) { return std::cos(x); }
inline double r_sinh(double x) { return std::sinh(x); }
inline double r_cosh(double x) { return std::cosh(x); }
inline double r_sqrt(double x) { return std::sqrt(x); }
inline double r_abs(double x) { return std::fabs(x); }

inline quad r_exp(quad x) { return expq(x); }
inline quad r_log(quad x) { return logq(x); }
inline quad r_sin(quad x) { return sinq(x); }
inline quad r_cos(quad x) { return cosq(x); }
inline quad r_sinh(quad x) { return sinhq(x); }
inline quad r_cosh(quad x) { return coshq(x); }
inline quad r_sqrt(quad x) { return sqrtq(x); }
inline quad r_abs(quad x) { return fabsq(x); }

template <class R> inline R pi_of();
template <> inline double pi_of<double>() { return M_PI; }
template <> inline quad pi_of<quad>() { return M_PIq; }

inline double to_double(double x) { return x; }
inline double to_double(quad x) { return static_cast<double>(x); }

template <class R> using cx = std::complex<R>;

template <class R> inline cx<R> cexp(const cx<R>& z) {
  R e = r_exp(z.real());
  return cx<R>(e * r_cos(z.imag()), e * r_sin(z.imag()));
}

// e^{i*phase} for real phase
template <class R> inline cx<R> expi(R phase) {
  return cx<R>(r_cos(phase), r_sin(phase));
}

template <class R> inline cx<R> csin(const cx<R>& z) {
  return cx<R>(r_sin(z.real()) * r_cosh(z.imag()),
               r_cos(z.real()) * r_sinh(z.imag()));
}

template <class R> inline cx<R> ccos(const cx<R>& z) {
  return cx<R>(r_cos(z.real()) * r_cosh(z.imag()),
               -r_sin(z.real()) * r_sinh(z.imag()));
}

template <class R> inline R cabs2(const cx<R>& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

template <class R> inline R cabs(const cx<R>& z) { return r_sqrt(cabs2(z)); }

// series cutoff for the theta sums: Gaussian tail below ~machine epsilon
template <class R> inline R theta_tail();
template <> inline double theta_tail<double>() { return 1e-16; }
template <> inline quad theta_tail<quad>() { return quad(1e-33); }

}  // namespace lab
