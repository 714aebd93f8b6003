#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "lab/checks.hpp"

using lab::ClassicalKind;
using lab::RealFn;
using VD = std::vector<double>;

TEST_CASE("rational rows at hand-checkable points") {
  const VD x = {0.0, 1.0};
  // R+ = e^{p0}/(x1-x0) + e^{p1}/(x0-x1)
  CHECK(lab::rational_row(x, {0.0, 0.0}, +1) == 0.0);
  CHECK(lab::rational_row(x, {0.0, 0.0}, -1) == 0.0);
  const VD p = {std::log(2.0), 0.0};
  CHECK(std::abs(lab::rational_row(x, p, +1) - 1.0) < 1e-14);
  CHECK(std::abs(lab::rational_row(x, p, -1) - (-0.5)) < 1e-14);
  CHECK(std::abs(lab::classical_value(ClassicalKind::RatH, x, p) - (-0.5)) <
        1e-14);
}

TEST_CASE("momentum translation rescales the rows but fixes their product") {
  const VD x = {-0.9, 0.1, 1.2}, p = {0.3, -0.1, 0.2};
  const double c = 0.47;
  VD pc = p;
  for (auto& v : pc) v += c;
  const double rp = lab::rational_row(x, p, +1), rpc = lab::rational_row(x, pc, +1);
  CHECK(std::abs(rpc - std::exp(c) * rp) < 1e-12 * std::abs(rpc));
  const double h = lab::classical_value(ClassicalKind::RatH, x, p);
  const double hc = lab::classical_value(ClassicalKind::RatH, x, pc);
  CHECK(std::abs(hc - h) < 1e-12 * std::abs(h));
}

TEST_CASE("values are symmetric under relabeling the particles") {
  const VD x = {-0.9, 0.1, 1.2}, p = {0.3, -0.1, 0.2};
  const VD xs = {1.2, -0.9, 0.1}, ps = {0.2, 0.3, -0.1};
  for (ClassicalKind k : {ClassicalKind::SinhH2, ClassicalKind::SinhH3,
                          ClassicalKind::RatH, ClassicalKind::RatPlus}) {
    const double a = lab::classical_value(k, x, p);
    const double b = lab::classical_value(k, xs, ps);
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("collision guard rejects coincident coordinates") {
  CHECK_THROWS_AS(lab::rational_row({0.3, 0.3 + 1e-12}, {0.0, 0.0}, +1),
                  lab::CollisionSingularity);
  CHECK_THROWS_AS(lab::sinh_row({0.1, 0.1}, {0.0, 0.0}, +1, +1),
                  lab::CollisionSingularity);
}

TEST_CASE("derivative and bracket machinery on analytic cases") {
  const VD x = {0.4, -0.3}, p = {0.2, 0.7};
  const RealFn f = [](const VD& xx, const VD& pp) {
    return std::exp(xx[0] * pp[0]);
  };
  const double exact = p[0] * std::exp(x[0] * p[0]);
  CHECK(std::abs(lab::partial(f, x, p, true, 0) - exact) < 1e-10);
  // canonical pairs
  const RealFn x0 = [](const VD& xx, const VD&) { return xx[0]; };
  const RealFn p0 = [](const VD&, const VD& pp) { return pp[0]; };
  const RealFn p1 = [](const VD&, const VD& pp) { return pp[1]; };
  CHECK(std::abs(lab::poisson_bracket(x0, p0, x, p) - 1.0) < 1e-10);
  CHECK(std::abs(lab::poisson_bracket(x0, p1, x, p)) < 1e-10);
  // antisymmetry degenerates to exact zero on the diagonal
  const RealFn h = lab::classical_fn(ClassicalKind::RatH);
  CHECK(lab::poisson_bracket(h, h, x, p) == 0.0);
}

TEST_CASE("rational family is in involution; sinh family measurably is not") {
  lab::RunParams P;
  P.n = 3;
  P.seed = 211;
  const lab::CheckReport rep = lab::checks::poisson(P);
  INFO(rep.json().dump(2));
  CHECK(rep.pass);
  CHECK(rep.details["rational_family"].get<double>() < 1e-6);
  CHECK(rep.details["sinh_h2_h3_measured"].get<double>() > 1e-3);
}

TEST_CASE("integrator oracle: harmonic oscillator against the exact solution") {
  const RealFn H = [](const VD& xx, const VD& pp) {
    return 0.5 * (xx[0] * xx[0] + pp[0] * pp[0]);
  };
  const auto fr = lab::integrate_flow(H, H, {1.0}, {0.0}, 1e-3, 1000);
  const auto& last = fr.samples.back();
  CHECK(last.t == doctest::Approx(1.0));
  CHECK(std::abs(last.x[0] - std::cos(1.0)) < 1e-8);
  CHECK(std::abs(last.p[0] + std::sin(1.0)) < 1e-8);
  CHECK(fr.drift_H < 1e-10);
}

TEST_CASE("rational flow conserves the commuting charges") {
  lab::RunParams P;
  P.n = 3;
  P.seed = 223;
  const lab::CheckReport rep = lab::checks::flow(P);
  INFO(rep.json().dump(2));
  CHECK(rep.pass);
  CHECK(rep.details["energy_drift"].get<double>() < 1e-6);
  CHECK(rep.details["second_invariant_drift"].get<double>() < 1e-5);
  CHECK(rep.details["momentum_drift"].get<double>() < 1e-5);
}

TEST_CASE("flow CSV carries the full trajectory") {
  VD x, p;
  lab::flow_initial_data(3, 5, x, p);
  const auto fr =
      lab::integrate_flow(lab::classical_fn(ClassicalKind::RatH),
                          lab::classical_fn(ClassicalKind::RatPlus), x, p, 1e-3, 50);
  const std::string csv = lab::flow_csv(fr);
  CHECK(csv.rfind("t,x0,x1,x2,p0,p1,p2,H,F2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == int(fr.samples.size()) + 1);
}

TEST_CASE("kernel rescaling closes the gap to the rational product quadratically") {
  lab::RunParams P;
  P.n = 3;
  P.seed = 227;
  const lab::CheckReport rep = lab::checks::scaling(P);
  INFO(rep.json().dump(2));
  CHECK(rep.pass);
  const double g1 = rep.details["gap_chi_1e1"].get<double>();
  const double g2 = rep.details["gap_chi_1e2"].get<double>();
  const double g3 = rep.details["gap_chi_1e3"].get<double>();
  CHECK(g2 < g1 / 10);
  CHECK(g3 < g2 / 10);
  CHECK(g3 < 1e-4);
  // at fixed momenta the exponential weights leave a first-order remainder,
  // so that route is measurably slower than the dressed comparison
  const double f3 = rep.details["fixed_momentum_gap_chi_1e3"].get<double>();
  CHECK(f3 > 10 * g3);

  // oracle for the quadratic rate at one hand-picked generic point: the
  // dressed gap scales by ~1e2 per decade of chi
  const VD x = {0.0, 0.8, 1.9}, p = {0.6, -0.3, 0.2};
  const double d2 = lab::scaled_gap(1e2, x, p);
  const double d3 = lab::scaled_gap(1e3, x, p);
  CHECK(d2 == doctest::Approx(9.431507e-4).epsilon(1e-4));
  CHECK(d3 == doctest::Approx(9.833321e-6).epsilon(1e-4));
  CHECK(d2 / d3 == doctest::Approx(100.0).epsilon(0.05));
}

TEST_CASE("sinh terms at wide decreasing separation reach the exponential form") {
  const int n = 3;
  const VD p = {0.1, -0.2, 0.3};
  auto worst_at = [&](double sep) {
    const VD x = {sep, 0.0, -sep};
    double worst = 0;
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        const double full = lab::sinh_product_term(x, p, mu, nu);
        const double lim = lab::exponential_limit_term(x, p, mu, nu);
        const double want = std::pow(2.0, 2 * (n - 1)) * ((mu + nu) % 2 ? -1 : 1);
        worst = std::max(worst, std::abs(full / lim / want - 1.0));
      }
    return worst;
  };
  const double e4 = worst_at(4.0), e8 = worst_at(8.0);
  INFO("sep 4: ", e4, "  sep 8: ", e8);
  CHECK(e8 < e4);
  CHECK(e8 < 1e-6);
}
