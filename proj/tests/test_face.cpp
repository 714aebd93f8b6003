#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "lab/checks.hpp"

using lab::Heights;
using lab::Mat;
using lab::Model;
using lab::shifted;
using lab::Vec;
using C = std::complex<double>;

namespace {

Model<double> make(int n) {
  return Model<double>(n, C(0.13, 0.31), C(0.23, 0.11), C(0.21, 0.17),
                       lab::default_delta(n));
}

// Leibniz-formula determinant, oracle for the pivoted routine
C det_leibniz(const Mat<double>& A) {
  const int n = A.rows;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  C out(0);
  std::function<void(int, int, C)> go = [&](int k, int sign, C prod) {
    if (k == n) {
      out += double(sign) * prod;
      return;
    }
    for (int i = k; i < n; ++i) {
      std::swap(perm[k], perm[i]);
      go(k + 1, i == k ? sign : -sign, prod * A(k, perm[k]));
      std::swap(perm[k], perm[i]);
    }
  };
  go(0, 1, C(1));
  return out;
}

}  // namespace

TEST_CASE("dual rows are biorthogonal to the interpolating vectors") {
  for (int n : {2, 3}) {
    const auto md = make(n);
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.1, 0.5);
    std::uniform_int_distribution<int> hi(-3, 3);
    double worst = 0;
    for (int s = 0; s < 20; ++s) {
      const C z(re(rng), im(rng));
      Heights a(n);
      for (auto& v : a) v = hi(rng);
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          const C want = mu == nu ? C(1) : C(0);
          const C d1 = lab::dot(md.phit(a, mu, z), md.phi(shifted(a, nu, -1), nu, z));
          const C d2 = lab::dot(md.phib(a, mu, z), md.phi(a, nu, z));
          worst = std::max({worst, std::abs(d1 - want), std::abs(d2 - want)});
        }
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("rank-one sums over directions resolve the identity") {
  const auto md = make(3);
  const C z(0.37, 0.21);
  const Heights a = {1, -1, 2};
  Mat<double> S1(3, 3), S2(3, 3);
  for (int lam = 0; lam < 3; ++lam) {
    S1 = S1 + lab::outer(md.phi(shifted(a, lam, -1), lam, z), md.phit(a, lam, z));
    S2 = S2 + lab::outer(md.phi(a, lam, z), md.phib(a, lam, z));
  }
  CHECK((S1 - Mat<double>::id(3)).max_abs() < 1e-11);
  CHECK((S2 - Mat<double>::id(3)).max_abs() < 1e-11);
}

TEST_CASE("face weights vanish off admissible plaquettes") {
  const auto md = make(3);
  const C z(0.37, 0.21);
  const Heights a = {1, -1, 2};
  // bottom or top edge not a unit step
  CHECK(md.face_weight(a, a, a, a, z) == C(0));
  CHECK(md.face_weight(a, shifted(a, 0, +1), shifted(a, 1, +1),
                       shifted(shifted(a, 1, +1), 0, +1), z) != C(0));
  Heights far = a;
  far[0] += 2;
  CHECK(md.face_weight(a, far, shifted(a, 1, +1), shifted(far, 1, +1), z) == C(0));
  // diagonal mismatch between opposite corners
  CHECK(md.face_weight(shifted(a, 2, -1), shifted(a, 0, +1), a,
                       shifted(a, 0, +1), z) == C(0));
}

TEST_CASE("exchange relation holds in all four dual frames") {
  for (int n : {2, 3}) {
    lab::RunParams P;
    P.n = n;
    P.seed = 101;
    P.samples = 4;
    const lab::CheckReport rep = lab::checks::face_vertex(P);
    INFO("worst residual ", rep.max_residual);
    CHECK(rep.pass);
    CHECK(rep.max_residual < 1e-9);
  }
}

TEST_CASE("pivoted determinant matches the Leibniz formula") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {2, 3, 4}) {
    Mat<double> A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = C(u(rng), u(rng));
    CHECK(std::abs(A.det() - det_leibniz(A)) / std::abs(det_leibniz(A)) < 1e-12);
  }
}

TEST_CASE("alternant determinant factorizes, as a two-point ratio") {
  for (int n : {2, 3, 4}) {
    lab::RunParams P;
    P.n = n;
    P.seed = 43;
    P.samples = 6;
    const lab::CheckReport rep = lab::checks::detformula(P);
    INFO("n=", n, " worst ", rep.max_residual);
    CHECK(rep.pass);
  }
}

TEST_CASE("boundary-matrix shift identity holds with factor n*gcd(2,n)") {
  for (int n : {2, 3}) {
    lab::RunParams P;
    P.n = n;
    P.seed = 47;
    P.samples = 2;
    const lab::CheckReport rep = lab::checks::appendix40(P);
    INFO("n=", n, " worst ", rep.max_residual);
    CHECK(rep.pass);
    CHECK(rep.details["overall_factor"].get<double>() ==
          doctest::Approx(n % 2 == 0 ? 2.0 * n : 1.0 * n));
  }
}
