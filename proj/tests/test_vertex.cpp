#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "lab/model.hpp"

using lab::Mat;
using lab::Model;
using C = std::complex<double>;

namespace {

Model<double> make(int n) {
  std::vector<double> delta(n);
  for (int i = 0; i < n; ++i) delta[i] = 0.05 + 0.9 * i / n;
  return Model<double>(n, C(0.13, 0.31), C(0.23, 0.11), C(0.21, 0.17), delta);
}

double rel(const Mat<double>& A, const Mat<double>& B) {
  return (A - B).max_abs() / std::max({A.max_abs(), B.max_abs(), 1e-300});
}

// independent three-site embedding acting on slots 1 and 3, written as an
// explicit index loop rather than permutation conjugation
Mat<double> R13_loop(const Mat<double>& R, int n) {
  Mat<double> out(n * n * n, n * n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int b = 0; b < n; ++b)
            out((i * n + b) * n + k, (j * n + b) * n + l) = R(i * n + k, j * n + l);
  return out;
}

}  // namespace

TEST_CASE("R at the origin is the swap") {
  for (int n : {2, 3}) {
    const auto md = make(n);
    CHECK((md.Rmat(C(0)) - lab::perm_swap<double>(n)).max_abs() < 1e-10);
  }
}

TEST_CASE("three-site exchange relation") {
  for (int n : {2, 3}) {
    const auto md = make(n);
    const Mat<double> In = Mat<double>::id(n);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.1, 0.5);
    double worst = 0;
    for (int s = 0; s < 20; ++s) {
      const C z1(re(rng), im(rng)), z2(re(rng), im(rng));
      const Mat<double> R12 = md.Rmat(z1 - z2).kron(In);
      const Mat<double> R23 = In.kron(md.Rmat(z2));
      const Mat<double> R13 = R13_loop(md.Rmat(z1), n);
      worst = std::max(worst, rel(R12 * R13 * R23, R23 * R13 * R12));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("two-site product is the analytic scalar") {
  for (int n : {2, 3}) {
    const auto md = make(n);
    const Mat<double> Pm = lab::perm_swap<double>(n), I2 = Mat<double>::id(n * n);
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.1, 0.5);
    double worst = 0;
    for (int s = 0; s < 20; ++s) {
      const C z(re(rng), im(rng));
      const Mat<double> lhs = md.Rmat(z) * (Pm * md.Rmat(-z) * Pm);
      const C rho = md.h(z + md.w) * md.h(-z + md.w) / (md.h(md.w) * md.h(md.w));
      worst = std::max(worst, rel(lhs, rho * I2));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("slot-2 transposition pairing is the analytic scalar") {
  for (int n : {2, 3}) {
    const auto md = make(n);
    const Mat<double> Pm = lab::perm_swap<double>(n), I2 = Mat<double>::id(n * n);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.1, 0.5);
    double worst = 0;
    for (int s = 0; s < 20; ++s) {
      const C z(re(rng), im(rng));
      const Mat<double> A =
          (Pm * md.Rmat(-z - double(n) * md.w) * Pm).partial_transpose_2(n);
      const Mat<double> B = md.Rmat(z).partial_transpose_2(n);
      const C rho = md.h(z) * md.h(-z - double(n) * md.w) / (md.h(md.w) * md.h(md.w));
      worst = std::max(worst, rel(A * B, rho * I2));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("weights are singular only at the lattice of the shift") {
  // a pole guard fires if the fixed shift parameter degenerates
  const int n = 3;
  std::vector<double> delta = {0.05, 0.38, 0.81};
  const Model<double> bad(n, C(0.13, 0.31), C(0, 0), C(0.21, 0.17), delta);
  CHECK_THROWS_AS((void)bad.Rmat(C(0.1, 0.2)), lab::PoleNearby);
}
