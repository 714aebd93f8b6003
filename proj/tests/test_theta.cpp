#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "lab/elliptic.hpp"
#include "lab/model.hpp"

using lab::cx;
using lab::Model;
using C = std::complex<double>;

namespace {

// independent oracle: fixed wide summation window, no adaptive centering
C theta_brute(double a, double b, C z, C tau) {
  const C I(0, 1);
  C s(0);
  for (int m = -60; m <= 60; ++m) {
    const double ma = m + a;
    s += std::exp(I * M_PI * ma * ma * tau + C(2) * M_PI * I * ma * (z + b));
  }
  return s;
}

double rel(C x, C y) {
  return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300});
}

}  // namespace

TEST_CASE("series agrees with a wide fixed-window oracle") {
  const C tau(0.13, 0.31);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(-0.5, 0.5), im(-0.5, 0.5),
      ch(-1.0, 1.0);
  double worst = 0;
  for (int s = 0; s < 200; ++s) {
    const C z(re(rng), im(rng));
    const double a = ch(rng), b = ch(rng);
    worst = std::max(worst, rel(lab::theta_char(a, b, z, tau), theta_brute(a, b, z, tau)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("extended-precision series matches double series") {
  const cx<lab::quad> tauq(lab::quad(0.13), lab::quad(0.31));
  const C tau(0.13, 0.31);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double worst = 0;
  for (int s = 0; s < 50; ++s) {
    const double x = u(rng), y = u(rng), a = u(rng), b = u(rng);
    const cx<lab::quad> vq =
        lab::theta_char(lab::quad(a), lab::quad(b), cx<lab::quad>(lab::quad(x), lab::quad(y)), tauq);
    const C vd = lab::theta_char(a, b, C(x, y), tau);
    worst = std::max(worst, rel(C(lab::to_double(vq.real()), lab::to_double(vq.imag())), vd));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("reference block is odd") {
  const Model<double> md(3, C(0.13, 0.31), C(0.23, 0.11), C(0.21, 0.17),
                         {0.05, 0.38, 0.81});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int s = 0; s < 50; ++s) {
    const C z(u(rng), u(rng));
    CHECK(rel(md.h(-z), -md.h(z)) < 1e-12);
  }
}

TEST_CASE("quasi-periodicity in both lattice directions") {
  const C tau(0.13, 0.31);
  const C I(0, 1);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double w1 = 0, wt = 0;
  for (int s = 0; s < 50; ++s) {
    const C z(u(rng), u(rng));
    const double a = u(rng), b = u(rng);
    const C t0 = lab::theta_char(a, b, z, tau);
    w1 = std::max(w1, rel(lab::theta_char(a, b, z + C(1), tau),
                          std::exp(C(2) * M_PI * I * a) * t0));
    wt = std::max(wt, rel(lab::theta_char(a, b, z + tau, tau),
                          std::exp(-I * M_PI * tau - C(2) * M_PI * I * (z + b)) * t0));
  }
  CHECK(w1 < 1e-10);
  CHECK(wt < 1e-10);
}

TEST_CASE("sigma block picks up -omega^{a1} under z -> z+1") {
  const int n = 3;
  const Model<double> md(n, C(0.13, 0.31), C(0.23, 0.11), C(0.21, 0.17),
                         {0.05, 0.38, 0.81});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int a1 = 0; a1 < n; ++a1)
    for (int a2 = 0; a2 < n; ++a2) {
      const C z(u(rng), u(rng));
      const C lhs = md.sigma(a1, a2, z + C(1));
      const C rhs = -md.omega_pow(a1) * md.sigma(a1, a2, z);
      CHECK(rel(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("characteristic shift identity over the full (alpha,beta) grid") {
  const C I(0, 1);
  for (int n : {2, 3, 5}) {
    std::vector<double> delta(n);
    for (int i = 0; i < n; ++i) delta[i] = 0.05 + 0.9 * i / n;
    const C tau(0.13, 0.31);
    const Model<double> md(n, tau, C(0.23, 0.11), C(0.21, 0.17), delta);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    double worst = 0;
    for (int s = 0; s < 20; ++s) {
      const C z(u(rng), u(rng));
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) {
          const C lhs = md.h(z + (double(al) * tau + double(be)) / double(n));
          const C pre =
              std::exp(-C(2) * M_PI * I * (double(al) / n) *
                       (double(al) * tau / (2.0 * n) + z + 0.5 + double(be) / n));
          worst = std::max(worst, rel(lhs, pre * md.sigma(al, be, z)));
        }
    }
    CHECK(worst < 1e-10);
  }
}
