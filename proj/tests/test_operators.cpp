#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "lab/checks.hpp"

using lab::DiffOp;
using lab::Heights;
using lab::Mat;
using lab::MatOp;
using lab::Model;
using C = std::complex<double>;

namespace {

Model<double> make(int n) {
  return Model<double>(n, C(0.13, 0.31), C(0.23, 0.11), C(0.21, 0.17),
                       lab::default_delta(n));
}

std::vector<Heights> sample_heights(int n, int count, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> hi(-3, 3);
  std::vector<Heights> out;
  for (int s = 0; s < count; ++s) {
    Heights a(n);
    for (auto& v : a) v = hi(rng);
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST_CASE("normal-form composition: coefficients shift before multiplying") {
  // oracle: apply the operators to an explicit function of the heights
  const int n = 3;
  DiffOp<double> A, B;
  std::vector<int> m1 = {1, 0, -1}, m2 = {0, 1, 0};
  A[m1] = [](const Heights& a) { return C(a[0] + 2 * a[1], a[2]); };
  B[m2] = [](const Heights& a) { return C(a[1] - a[2], 1); };
  const DiffOp<double> AB = lab::op_compose(A, B);
  const Heights a = {2, -1, 3};
  // (A B f)(a) = cA(a) * cB(a + m1) * f(a + m1 + m2)
  const Heights am1 = lab::height_add(a, m1);
  const C want = A[m1](a) * B[m2](am1);
  const std::vector<int> m = {1, 1, -1};
  CHECK(std::abs(AB.at(m)(a) - want) == 0);
}

TEST_CASE("lowering and raising factors invert each other") {
  for (int n : {2, 3}) {
    lab::RunParams P;
    P.n = n;
    P.seed = 53;
    const lab::CheckReport rep = lab::checks::linv(P);
    INFO("n=", n, " worst ", rep.max_residual);
    CHECK(rep.pass);
  }
}

TEST_CASE("exchange relation for the factorized operator") {
  for (int n : {2, 3}) {
    lab::RunParams P;
    P.n = n;
    P.seed = 59;
    P.samples = 3;
    const lab::CheckReport rep = lab::checks::lyb(P);
    INFO("n=", n, " worst ", rep.max_residual);
    CHECK(rep.pass);
  }
}

TEST_CASE("closed-form blocks match the direct construction up to one constant") {
  for (int n : {2, 3}) {
    lab::RunParams P;
    P.n = n;
    P.seed = 61;
    P.samples = 3;
    const lab::CheckReport rep = lab::checks::closedform(P);
    INFO("n=", n, " worst ", rep.max_residual);
    CHECK(rep.pass);
    const double cre = rep.details["block1_ratio_re"].get<double>();
    const double cim = rep.details["block1_ratio_im"].get<double>();
    const double want = n % 2 == 0 ? 2.0 * n : 1.0 * n;
    CHECK(std::abs(C(cre, cim) - C(want, 0)) < 1e-7);
  }
}

TEST_CASE("transfer operator: trace route equals direct route") {
  const auto md = make(3);
  const C z(0.37, 0.21);
  const auto hs = sample_heights(3, 5, 67);
  CHECK(lab::op_residual(lab::transfer_trace(md, z), lab::transfer_direct(md, z), hs) <
        1e-10);
}

TEST_CASE("transfer operators at different spectral points commute") {
  for (int n : {2, 3}) {
    lab::RunParams P;
    P.n = n;
    P.seed = 71;
    const lab::CheckReport rep = lab::checks::commute_t(P);
    INFO("n=", n, " commutator ", rep.details["commutator"].get<double>());
    CHECK(rep.pass);
  }
}

TEST_CASE("mismatched boundary parameters break transfer commutation") {
  const auto md1 = make(3);
  const Model<double> md2(3, C(0.13, 0.31), C(0.23, 0.11), C(0.32, 0.24),
                          lab::default_delta(3));
  const auto hs = sample_heights(3, 5, 73);
  const double mixed =
      lab::comm_residual(lab::transfer_direct(md1, C(0.37, 0.21)),
                         lab::transfer_direct(md2, C(-0.18, 0.33)), hs);
  INFO("mixed-boundary commutator ", mixed);
  CHECK(mixed > 1e-4);
  const double same =
      lab::comm_residual(lab::transfer_direct(md1, C(0.37, 0.21)),
                         lab::transfer_direct(md1, C(-0.18, 0.33)), hs);
  CHECK(same < 1e-8);
  CHECK(mixed > 1e4 * same);
}
