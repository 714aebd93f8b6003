#pragma once
// The named verification checks behind both the CLI and the acceptance
// suite.  Every check draws its own deterministic samples, measures a
// residual for one algebraic statement of the model, and reports pass/fail
// against a pinned tolerance.  Checks that quantify a measured *failure* of
// a candidate identity (family-commute) report honestly: they return
// pass=false with the observed magnitudes rather than a weakened bound.

#include <chrono>
#include <functional>

#include "lab/classical.hpp"
#include "lab/diffop.hpp"
#include "lab/limits.hpp"
#include "lab/model.hpp"
#include "lab/report.hpp"
#include "lab/sampling.hpp"

namespace lab {

struct RunParams {
  int n = 3;
  unsigned long long seed = 42;
  int samples = 0;  // 0 = per-check default
  double tol = 0;   // 0 = per-check default
  std::complex<double> tau{0.13, 0.31};
  std::complex<double> w{0.23, 0.11};
  std::complex<double> c{0.21, 0.17};
  double eps = 1e-8;
};

using CheckFn = std::function<CheckReport(const RunParams&)>;

namespace checks {

using C = std::complex<double>;
using MD = Model<double>;

inline MD make_model(const RunParams& P) {
  return MD(P.n, P.tau, P.w, P.c, default_delta(P.n));
}

inline int pick(int requested, int dflt) { return requested > 0 ? requested : dflt; }
inline double pick_tol(double requested, double dflt) {
  return requested > 0 ? requested : dflt;
}

inline double rel_sc(C a, C b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline double rel_mat(const Mat<double>& A, const Mat<double>& B) {
  return (A - B).max_abs() / std::max({A.max_abs(), B.max_abs(), 1e-300});
}

inline double rel_vec(const Vec<double>& u, const Vec<double>& v) {
  double num = 0, den = 1e-300;
  for (size_t i = 0; i < u.size(); ++i) {
    num = std::max(num, std::abs(u[i] - v[i]));
    den = std::max({den, std::abs(u[i]), std::abs(v[i])});
  }
  return num / den;
}

// ---- scalar building block laws ----

inline CheckReport theta(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-10);
  rep.samples = pick(P.samples, 50);
  const MD md = make_model(P);
  Sampler S(P.seed);
  std::uniform_int_distribution<int> ci(0, P.n - 1);
  const C I(0, 1), tau = P.tau;
  double worst_odd = 0, worst_z1 = 0, worst_ztau = 0, worst_shift = 0;
  for (int s = 0; s < rep.samples; ++s) {
    const C z = S.z();
    // oddness of the reference block
    worst_odd = std::max(worst_odd, rel_sc(md.h(-z), -md.h(z)));
    const int a1 = ci(S.rng), a2 = ci(S.rng);
    const double ca = 0.5 + double(a1) / P.n, cb = 0.5 + double(a2) / P.n;
    const C t0 = theta_char(ca, cb, z, tau);
    // z -> z+1 law: multiplier e^{2 pi i a}
    worst_z1 = std::max(worst_z1,
                        rel_sc(theta_char(ca, cb, z + C(1), tau),
                               std::exp(C(2) * M_PI * I * ca) * t0));
    // z -> z+tau law: multiplier e^{-i pi tau - 2 pi i (z+b)}
    worst_ztau = std::max(
        worst_ztau, rel_sc(theta_char(ca, cb, z + tau, tau),
                           std::exp(-M_PI * I * tau - C(2) * M_PI * I * (z + cb)) * t0));
    // characteristic shift: moving (alpha tau + beta)/n into the argument of
    // the reference block produces the (alpha,beta) block times an explicit
    // exponential
    for (int al = 0; al < P.n; ++al)
      for (int be = 0; be < P.n; ++be) {
        const C lhs = md.h(z + (double(al) * tau + double(be)) / double(P.n));
        const C pre = std::exp(-C(2) * M_PI * I * (double(al) / P.n) *
                               (double(al) * tau / (2.0 * P.n) + z + 0.5 +
                                double(be) / P.n));
        worst_shift = std::max(worst_shift, rel_sc(lhs, pre * md.sigma(al, be, z)));
      }
  }
  rep.details["oddness"] = worst_odd;
  rep.details["z_plus_1"] = worst_z1;
  rep.details["z_plus_tau"] = worst_ztau;
  rep.details["characteristic_shift"] = worst_shift;
  rep.observe(worst_odd);
  rep.observe(worst_z1);
  rep.observe(worst_ztau);
  rep.observe(worst_shift);
  rep.pass = rep.max_residual < rep.tolerance;
  return rep;
}

// ---- vertex layer ----

inline Mat<double> embed_R13(const MD& md, C z) {
  const int n = md.n;
  const Mat<double> P23 = Mat<double>::id(n).kron(perm_swap<double>(n));
  return P23 * md.Rmat(z).kron(Mat<double>::id(n)) * P23;
}

inline CheckReport ybe(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 20);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  const Mat<double> In = Mat<double>::id(n);
  double worst = 0;
  for (int s = 0; s < rep.samples; ++s) {
    const C z1 = S.z(), z2 = S.z();
    const Mat<double> R12 = md.Rmat(z1 - z2).kron(In);
    const Mat<double> R23 = In.kron(md.Rmat(z2));
    const Mat<double> R13 = embed_R13(md, z1);
    worst = std::max(worst, rel_mat(R12 * R13 * R23, R23 * R13 * R12));
  }
  const double r0 = (md.Rmat(C(0)) - perm_swap<double>(n)).max_abs();
  rep.details["ybe"] = worst;
  rep.details["r_at_zero_vs_swap"] = r0;
  rep.observe(worst);
  rep.pass = worst < rep.tolerance && r0 < 1e-10;
  return rep;
}

inline CheckReport unitarity(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 20);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  const Mat<double> Pm = perm_swap<double>(n), I2 = Mat<double>::id(n * n);
  double worst = 0;
  for (int s = 0; s < rep.samples; ++s) {
    const C z = S.z();
    const Mat<double> lhs = md.Rmat(z) * (Pm * md.Rmat(-z) * Pm);
    const C rho = md.h(z + md.w) * md.h(-z + md.w) / (md.h(md.w) * md.h(md.w));
    worst = std::max(worst, rel_mat(lhs, rho * I2));
  }
  rep.observe(worst);
  rep.pass = worst < rep.tolerance;
  return rep;
}

inline CheckReport crossing(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 20);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  const Mat<double> Pm = perm_swap<double>(n), I2 = Mat<double>::id(n * n);
  double worst = 0;
  for (int s = 0; s < rep.samples; ++s) {
    const C z = S.z();
    const Mat<double> A =
        (Pm * md.Rmat(-z - double(n) * md.w) * Pm).partial_transpose_2(n);
    const Mat<double> B = md.Rmat(z).partial_transpose_2(n);
    const C rho = md.h(z) * md.h(-z - double(n) * md.w) / (md.h(md.w) * md.h(md.w));
    worst = std::max(worst, rel_mat(A * B, rho * I2));
  }
  rep.observe(worst);
  rep.pass = worst < rep.tolerance;
  return rep;
}

// ---- boundary layer ----

inline CheckReport re(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 10);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  const Mat<double> In = Mat<double>::id(n), Pm = perm_swap<double>(n);
  auto R21 = [&](C u) { return Pm * md.Rmat(u) * Pm; };
  auto resid = [&](std::function<Mat<double>(C)> Kof, C z1, C z2) {
    const Mat<double> K1 = Kof(z1).kron(In), K2 = In.kron(Kof(z2));
    const Mat<double> lhs = md.Rmat(z1 - z2) * K1 * R21(z1 + z2) * K2;
    const Mat<double> rhs = K2 * md.Rmat(z1 + z2) * K1 * R21(z1 - z2);
    return rel_mat(lhs, rhs);
  };
  double worst = 0, control = 1e300;
  for (int s = 0; s < rep.samples; ++s) {
    const C z1 = S.z(), z2 = S.z();
    worst = std::max(worst, resid([&](C u) { return md.K(u); }, z1, z2));
    control = std::min(control, resid([&](C) { return In; }, z1, z2));
  }
  rep.details["reflection"] = worst;
  rep.details["identity_boundary_control"] = control;
  rep.notes.push_back(
      "for n >= 3 the trivial boundary matrix violates this reflection "
      "relation (the control records its smallest observed residual); at n=2 "
      "the swapped weight matrix equals the plain one term by term, every "
      "summand commutes, and the trivial boundary solves the relation too");
  rep.observe(worst);
  rep.pass = worst < rep.tolerance && (P.n == 2 || control > 1e-3);
  return rep;
}

inline CheckReport dual_re(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 10);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  const Mat<double> In = Mat<double>::id(n), Pm = perm_swap<double>(n);
  auto R21 = [&](C u) { return Pm * md.Rmat(u) * Pm; };
  const C nw = double(n) * md.w;
  double worst = 0, variant = 1e300;
  for (int s = 0; s < rep.samples; ++s) {
    const C z1 = S.z(), z2 = S.z();
    const Mat<double> Kt1 = md.Kt(z1).kron(In), Kt2 = In.kron(md.Kt(z2));
    const Mat<double> lhs = md.Rmat(z2 - z1) * Kt1 * R21(-z1 - z2 - nw) * Kt2;
    const Mat<double> rhs = Kt2 * md.Rmat(-z1 - z2 - nw) * Kt1 * R21(z2 - z1);
    worst = std::max(worst, rel_mat(lhs, rhs));
    // same relation with the final difference argument reversed: fails at O(1)
    const Mat<double> rhs_rev = Kt2 * md.Rmat(-z1 - z2 - nw) * Kt1 * R21(z1 - z2);
    variant = std::min(variant, rel_mat(lhs, rhs_rev));
  }
  rep.details["dual_reflection"] = worst;
  rep.details["reversed_argument_variant"] = variant;
  rep.notes.push_back(
      "the variant with the trailing difference argument reversed is not an "
      "identity; its smallest observed residual is recorded");
  rep.observe(worst);
  rep.pass = worst < rep.tolerance;
  return rep;
}

// ---- face layer ----

inline CheckReport duals(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-10);
  rep.samples = pick(P.samples, 20);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  double worst = 0;
  for (int s = 0; s < rep.samples; ++s) {
    const C z = S.z();
    const Heights a = S.heights(n);
    // biorthogonality of both dual families against the interpolating vectors
    for (int mu = 0; mu < n; ++mu) {
      const Vec<double> pt = md.phit(a, mu, z), pb = md.phib(a, mu, z);
      for (int nu = 0; nu < n; ++nu) {
        const C d1 = dot(pt, md.phi(shifted(a, nu, -1), nu, z));
        const C d2 = dot(pb, md.phi(a, nu, z));
        const C want = (mu == nu) ? C(1) : C(0);
        worst = std::max({worst, std::abs(d1 - want), std::abs(d2 - want)});
      }
    }
    // completeness: rank-one sums resolve the identity
    Mat<double> S1(n, n), S2(n, n);
    for (int lam = 0; lam < n; ++lam) {
      S1 = S1 + outer(md.phi(shifted(a, lam, -1), lam, z), md.phit(a, lam, z));
      S2 = S2 + outer(md.phi(a, lam, z), md.phib(a, lam, z));
    }
    worst = std::max({worst, (S1 - Mat<double>::id(n)).max_abs(),
                      (S2 - Mat<double>::id(n)).max_abs()});
  }
  rep.observe(worst);
  rep.pass = worst < rep.tolerance;
  return rep;
}

inline CheckReport face_vertex(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 6);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  double w1 = 0, w2 = 0, w3 = 0, w4 = 0, w5 = 0;
  auto relv = [&](const Vec<double>& L, const Vec<double>& Rh) { return rel_vec(L, Rh); };
  for (int s = 0; s < rep.samples; ++s) {
    const C z1 = S.z(), z2 = S.z(), zd = z1 - z2;
    const Heights a = S.heights(n);
    const Mat<double> R = md.Rmat(zd);
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        const Heights amn = shifted(shifted(a, mu, -1), nu, -1);
        const Heights amu = shifted(a, mu, -1), anu = shifted(a, nu, -1);
        // V1: R on two interpolating vectors = face-weight sum
        {
          const Vec<double> L =
              matvec(R, kron_vec(md.phi(amn, nu, z1), md.phi(amu, mu, z2)));
          Vec<double> Rh(n * n, C(0));
          for (int kap = 0; kap < n; ++kap) {
            const Heights ak = shifted(a, kap, -1);
            const C Wv = md.face_weight(amn, amu, ak, a, zd);
            if (Wv == C(0)) continue;
            std::vector<int> d(n);
            for (int i = 0; i < n; ++i) d[i] = ak[i] - amn[i];
            const int lam = unit_index(d);
            if (lam < 0) continue;
            const Vec<double> u = kron_vec(md.phi(ak, kap, z1), md.phi(amn, lam, z2));
            for (int i = 0; i < n * n; ++i) Rh[i] += Wv * u[i];
          }
          w1 = std::max(w1, relv(L, Rh));
        }
        // V2: left dual row against interpolating vector
        {
          const Vec<double> pt = md.phit(a, mu, z1);
          const Vec<double> ph = md.phi(anu, nu, z2);
          Vec<double> L(n * n, C(0));
          for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
              C acc(0);
              for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l)
                  acc += pt[i] * R(i * n + j, k * n + l) * ph[l];
              L[k * n + j] = acc;
            }
          Vec<double> Rh(n * n, C(0));
          for (int kap = 0; kap < n; ++kap) {
            const Heights amk = shifted(amu, kap, -1);
            const C Wv = md.face_weight(amk, anu, amu, a, zd);
            if (Wv == C(0)) continue;
            std::vector<int> d(n);
            for (int i = 0; i < n; ++i) d[i] = anu[i] - amk[i];
            const int lam = unit_index(d);
            if (lam < 0) continue;
            const Vec<double> u = kron_vec(md.phit(anu, lam, z1), md.phi(amk, kap, z2));
            for (int i = 0; i < n * n; ++i) Rh[i] += Wv * u[i];
          }
          w2 = std::max(w2, relv(L, Rh));
        }
        // V3: right dual row against interpolating vector (raising frame)
        {
          const Vec<double> pb = md.phib(a, mu, z2);
          const Vec<double> ph = md.phi(a, nu, z1);
          Vec<double> L(n * n, C(0));
          for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
              C acc(0);
              for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                  acc += pb[j] * R(i * n + j, k * n + l) * ph[k];
              L[i * n + l] = acc;
            }
          const Heights apn = shifted(a, nu, +1), apm = shifted(a, mu, +1);
          Vec<double> Rh(n * n, C(0));
          for (int kap = 0; kap < n; ++kap) {
            const Heights SE = shifted(apm, kap, +1);
            const C Wv = md.face_weight(a, apn, apm, SE, zd);
            if (Wv == C(0)) continue;
            std::vector<int> d(n);
            for (int i = 0; i < n; ++i) d[i] = SE[i] - apn[i];
            const int lam = unit_index(d);
            if (lam < 0) continue;
            const Vec<double> u = kron_vec(md.phi(apm, kap, z1), md.phib(apn, lam, z2));
            for (int i = 0; i < n * n; ++i) Rh[i] += Wv * u[i];
          }
          w3 = std::max(w3, relv(L, Rh));
        }
        // V4: two left dual rows
        {
          const Vec<double> L =
              vecmat(kron_vec(md.phit(a, mu, z1), md.phit(amu, nu, z2)), R);
          Vec<double> Rh(n * n, C(0));
          for (int kap = 0; kap < n; ++kap) {
            const Heights ak = shifted(a, kap, -1);
            const C Wv = md.face_weight(amn, ak, amu, a, zd);
            if (Wv == C(0)) continue;
            std::vector<int> d(n);
            for (int i = 0; i < n; ++i) d[i] = ak[i] - amn[i];
            const int lam = unit_index(d);
            if (lam < 0) continue;
            const Vec<double> u = kron_vec(md.phit(ak, lam, z1), md.phit(a, kap, z2));
            for (int i = 0; i < n * n; ++i) Rh[i] += Wv * u[i];
          }
          w4 = std::max(w4, relv(L, Rh));
        }
        // V5: two right dual rows
        {
          const Heights apm = shifted(a, mu, +1);
          const Heights SE = shifted(apm, nu, +1);
          const Vec<double> L =
              vecmat(kron_vec(md.phib(apm, nu, z1), md.phib(a, mu, z2)), R);
          Vec<double> Rh(n * n, C(0));
          for (int kap = 0; kap < n; ++kap) {
            const Heights ak = shifted(a, kap, +1);
            const C Wv = md.face_weight(a, ak, apm, SE, zd);
            if (Wv == C(0)) continue;
            std::vector<int> d(n);
            for (int i = 0; i < n; ++i) d[i] = SE[i] - ak[i];
            const int lam = unit_index(d);
            if (lam < 0) continue;
            const Vec<double> u = kron_vec(md.phib(a, kap, z1), md.phib(ak, lam, z2));
            for (int i = 0; i < n * n; ++i) Rh[i] += Wv * u[i];
          }
          w5 = std::max(w5, relv(L, Rh));
        }
      }
  }
  rep.details["lowering_pair"] = w1;
  rep.details["left_dual_mixed"] = w2;
  rep.details["right_dual_mixed"] = w3;
  rep.details["left_dual_pair"] = w4;
  rep.details["right_dual_pair"] = w5;
  for (double v : {w1, w2, w3, w4, w5}) rep.observe(v);
  rep.pass = rep.max_residual < rep.tolerance;
  return rep;
}

inline CheckReport detformula(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 10);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  auto Amat = [&](const std::vector<C>& zs) {
    Mat<double> A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = md.theta_j(i, double(n) * zs[j]);
    return A;
  };
  auto prodform = [&](const std::vector<C>& zs) {
    C sum(0);
    for (const C& z : zs) sum += z;
    C v = md.h(sum - 0.5 * (n - 1));
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k) v *= md.h(zs[i] - zs[k]);
    return v;
  };
  double worst = 0;
  for (int s = 0; s < rep.samples; ++s) {
    std::vector<C> zs1(n), zs2(n);
    for (int i = 0; i < n; ++i) zs1[i] = S.z(), zs2[i] = S.z();
    const C r1 = Amat(zs1).det() / Amat(zs2).det();
    const C r2 = prodform(zs1) / prodform(zs2);
    worst = std::max(worst, rel_sc(r1, r2));
  }
  rep.notes.push_back(
      "the z-independent normalization cancels in the two-point ratio");
  rep.observe(worst);
  rep.pass = worst < rep.tolerance;
  return rep;
}

inline CheckReport appendix40(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 3);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  const C I(0, 1), tau = P.tau, w = P.w;
  const Mat<double> gm = md.g_mat(), hm = md.h_mat(), K00 = md.K0(C(0));
  // the displayed prefactor needs an extra n.gcd(2,n): the doubled
  // characteristic sum in the boundary matrix is gcd(2,n)-fold degenerate
  const double factor = double(n) * (n % 2 == 0 ? 2.0 : 1.0);
  double worst = 0;
  for (int s = 0; s < rep.samples; ++s) {
    const C z = S.z();
    const Heights a = S.heights(n);
    const auto ab = md.abar(a);
    for (int mu = 0; mu < n; ++mu)
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < 2 * n; ++be) {
          const Mat<double> M = gm.pow(((be - 1) % n + n) % n) * hm.pow(al) * K00;
          const Vec<double> lhs = matvec(M, md.phi(a, mu, z));
          const C pre = factor * double(be % 2 == 1 ? 1 : -1) *
                        std::exp(C(2) * M_PI * I * (double(al) / n) *
                                 (double(al) * tau / 2.0 + z -
                                  double(n) * w * ab[mu] + 0.5));
          Vec<double> rhs = md.phi(
              a, mu, -z + 2.0 * double(n) * w * ab[mu] - double(al) * tau - double(be));
          for (auto& v : rhs) v *= pre;
          worst = std::max(worst, rel_vec(lhs, rhs));
        }
  }
  rep.details["overall_factor"] = factor;
  rep.notes.push_back(
      "holds with an overall factor n*gcd(2,n) against the bare exponential "
      "prefactor (measured 3 at n=3, 4 at n=2, 8 at n=4)");
  rep.observe(worst);
  rep.pass = worst < rep.tolerance;
  return rep;
}

// ---- factorized difference operators ----

inline CheckReport linv(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-10);
  rep.samples = pick(P.samples, 10);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  const C z(0.37, 0.21);
  const MatOp<double> L = build_L(md, z), Li = build_Linv(md, z);
  MatOp<double> idop;
  idop[std::vector<int>(n, 0)] = [n](const Heights&) { return Mat<double>::id(n); };
  std::vector<Heights> hs;
  for (int s = 0; s < rep.samples; ++s) hs.push_back(S.heights(n));
  const double r1 = matop_residual(matop_compose(L, Li), idop, hs);
  const double r2 = matop_residual(matop_compose(Li, L), idop, hs);
  rep.details["L_Linv"] = r1;
  rep.details["Linv_L"] = r2;
  rep.observe(r1);
  rep.observe(r2);
  rep.pass = rep.max_residual < rep.tolerance;
  return rep;
}

inline CheckReport lyb(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 4);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  std::vector<Heights> hs;
  for (int s = 0; s < rep.samples; ++s) hs.push_back(S.heights(n));
  double worst = 0;
  for (int rep_z = 0; rep_z < 3; ++rep_z) {
    const C z1 = S.z(), z2 = S.z();
    const Mat<double> Rd = md.Rmat(z1 - z2);
    const MatOp<double> L1 = build_L(md, z1), L2 = build_L(md, z2);
    const MatOp<double> lhs = matop_lmul(Rd, matop_kron_compose(L1, L2, true));
    const MatOp<double> rhs = matop_rmul(matop_kron_compose(L2, L1, false), Rd);
    worst = std::max(worst, matop_residual(lhs, rhs, hs));
  }
  rep.observe(worst);
  rep.pass = worst < rep.tolerance;
  return rep;
}

inline CheckReport closedform(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-8);
  rep.samples = pick(P.samples, 5);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  C const1(0), const2(0);
  double worst = 0;
  bool first = true;
  for (int s = 0; s < rep.samples; ++s) {
    const C z = S.z();
    const Heights a = S.heights(n);
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        const C r1 = md.F1_direct(a, mu, nu, z) / md.F1_closed(a, mu, nu, z);
        const C r2 = md.F2_direct(a, mu, nu, z) / md.F2_closed(a, mu, nu, z);
        if (first) {
          const1 = r1;
          const2 = r2;
          first = false;
        }
        worst = std::max({worst, std::abs(r1 / const1 - C(1)),
                          std::abs(r2 / const2 - C(1))});
      }
  }
  rep.details["block1_ratio_re"] = const1.real();
  rep.details["block1_ratio_im"] = const1.imag();
  rep.details["block2_ratio_re"] = const2.real();
  rep.details["block2_ratio_im"] = const2.imag();
  rep.notes.push_back(
      "direct and summed closed forms agree up to one global constant per "
      "block, resolved at a single reference point (n at odd n, 2n at even n)");
  rep.observe(worst);
  rep.pass = worst < rep.tolerance;
  return rep;
}

inline CheckReport commute_t(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-8);
  rep.samples = pick(P.samples, 5);
  const MD md = make_model(P);
  const int n = P.n;
  Sampler S(P.seed);
  const C z1(0.37, 0.21), z2(-0.18, 0.33);
  std::vector<Heights> hs;
  for (int s = 0; s < rep.samples; ++s) hs.push_back(S.heights(n));
  const DiffOp<double> t1 = transfer_direct(md, z1), t2 = transfer_direct(md, z2);
  const double comm = comm_residual(t1, t2, hs);
  const double route = op_residual(transfer_trace(md, z1), t1, hs);
  rep.details["commutator"] = comm;
  rep.details["trace_vs_direct"] = route;
  rep.observe(comm);
  rep.pass = comm < rep.tolerance && route < 1e-10;
  return rep;
}

// ---- trigonometric degeneration ----

inline Trig<double> make_trig(const RunParams& P) {
  return Trig<double>{P.n, P.w.real(), default_delta(P.n)};
}

inline CheckReport trig_limit(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 10);
  Sampler S(P.seed);
  // characteristic sums over the doubled index: exactly n at 2*g1 = 0 mod n,
  // zero otherwise (for even n the doubling makes g1 = n/2 survive as well)
  double vanish = 0;
  for (int nn : {1, 3, 5, 7, 9}) {
    for (int g1 = 1; g1 < nn; ++g1)
      vanish = std::max(vanish, std::abs(roots_of_unity_sum(g1, nn)));
  }
  rep.details["characteristic_sum_vanishing"] = vanish;
  rep.details["even_n_survivor"] = std::abs(roots_of_unity_sum(1, 2));
  const int n = P.n % 2 == 1 ? P.n : 3;
  const Trig<double> tr{n, P.w.real(), default_delta(n)};
  // collapse of the characteristic sums onto single sine ratios: after
  // compensating the shared z-dependent denominator sin pi(Xden), the ratio
  // is the explicit constant -n (2i)^{1-n}, uniformly in z and heights
  const double expect =
      -double(n) * std::pow(2.0, 1.0 - n) * (((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0);
  double collapse = 0, select = 0;
  C c1(0), c2(0);
  bool first = true;
  for (int s = 0; s < rep.samples; ++s) {
    const C z = S.z();
    const Heights a = S.heights(n);
    const C xden1 = -z + tr.w * tr.dsum() + tr.w * (1.0 - n) + tr.kappa();
    const C xden2 = z + tr.w * tr.dsum() + tr.kappa();
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        const C r1 = F1_gsum(tr, a, mu, nu, z) * sinpi(xden1) /
                     F1_collapsed(tr, a, mu, nu, z);
        const C r2 = F2_gsum(tr, a, mu, nu, z) * sinpi(xden2) /
                     F2_collapsed(tr, a, mu, nu, z);
        if (first) {
          c1 = r1;
          c2 = r2;
          first = false;
        }
        collapse = std::max({collapse, std::abs(r1 / expect - C(1)),
                             std::abs(r2 / expect - C(1))});
        select = std::max(
            {select,
             rel_sc(asymptotic_F(1, tr, a, mu, nu), asymptotic_reconstructed(1, tr, a, mu, nu)),
             rel_sc(asymptotic_F(2, tr, a, mu, nu), asymptotic_reconstructed(2, tr, a, mu, nu))});
      }
  }
  rep.details["collapse_uniformity"] = collapse;
  rep.details["collapse_constant_expected"] = expect;
  rep.details["collapse_ratio_re"] = c1.real();
  rep.details["collapse_ratio_im"] = c1.imag();
  rep.details["mode_selection"] = select;
  // the large-Im z limit of the finite sums is the asymptotic block
  double asym_far = 0, asym_near = 0;
  {
    const Heights a = default_heights(n);
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        const C A = asymptotic_F(1, tr, a, mu, nu);
        asym_near = std::max(asym_near, rel_sc(F1_gsum(tr, a, mu, nu, C(0.17, 2.0)), A));
        asym_far = std::max(asym_far, rel_sc(F1_gsum(tr, a, mu, nu, C(0.17, 4.0)), A));
      }
  }
  rep.details["asymptote_at_im2"] = asym_near;
  rep.details["asymptote_at_im4"] = asym_far;
  // convergence of the full elliptic block to the trigonometric sum along a
  // modulus schedule, in extended precision (the cancellation inside the
  // boundary sum grows exponentially with Im tau)
  const std::vector<quad> Ts = {quad(10), quad(20), quad(30)};
  std::vector<quad> dq = ratio_drift_schedule<quad>(
      3, quad(0.23), {quad(0.05), quad(0.38), quad(0.81)}, quad(P.eps),
      quad(0.19), Ts, cx<quad>(quad(0.37), quad(0)), default_heights(3));
  const double drift_10_20 = to_double(dq[0]), drift_20_30 = to_double(dq[1]);
  rep.details["block_ratio_drift_10_20"] = drift_10_20;
  rep.details["block_ratio_drift_20_30"] = drift_20_30;
  rep.notes.push_back(
      "per-block ratios converge but not to a single constant across blocks: "
      "the degeneration keeps block-dependent contamination, recorded via "
      "the drift of reference-normalized ratios");
  rep.observe(vanish);
  rep.observe(collapse);
  rep.observe(select);
  rep.observe(asym_far);
  rep.pass = vanish < 1e-12 && collapse < rep.tolerance &&
             select < rep.tolerance && asym_far < rep.tolerance &&
             asym_far <= asym_near && drift_20_30 < 1e-5;
  return rep;
}

inline CheckReport hamiltonian(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-9);
  rep.samples = pick(P.samples, 6);
  const int n = P.n % 2 == 1 ? P.n : 3;
  const Trig<double> tr{n, P.w.real(), default_delta(n)};
  Sampler S(P.seed);
  std::vector<Heights> hs;
  for (int s = 0; s < rep.samples; ++s) hs.push_back(S.heights(n));
  const DiffOp<double> Hlim = build_H_from_limit(tr);
  const DiffOp<double> Hrows = build_H_from_rows(tr);
  const DiffOp<double> Hblocks = build_H_from_blocks(tr);
  // routes agree up to one global constant each, resolved at a reference
  const Heights aref = default_heights(n);
  const std::vector<int> mref = unit_shift(n, 0, 1);
  const C ref = Hlim.at(mref)(aref);
  const C crows = ref / Hrows.at(mref)(aref);
  const C cblocks = ref / Hblocks.at(mref)(aref);
  const double r_rows = op_residual(Hlim, op_scale(Hrows, crows), hs);
  const double r_blocks = op_residual(Hlim, op_scale(Hblocks, cblocks), hs);
  rep.details["rows_route"] = r_rows;
  rep.details["blocks_route"] = r_blocks;
  rep.details["rows_route_constant_re"] = crows.real();
  rep.details["rows_route_constant_im"] = crows.imag();
  rep.details["blocks_route_constant_re"] = cblocks.real();
  rep.details["blocks_route_constant_im"] = cblocks.imag();
  // z-independence: mode amplitudes extracted from two unrelated spectral
  // triples coincide
  const std::array<cx<double>, 3> zs1 = {C(0.11, 0.13), C(-0.17, 0.29), C(0.23, 0.41)};
  const std::array<cx<double>, 3> zs2 = {C(0.31, 0.19), C(-0.29, 0.37), C(0.07, 0.23)};
  const auto modes1 = extract_modes(tr, zs1);
  const auto modes2 = extract_modes(tr, zs2);
  double zfree = 0;
  for (int k = 0; k < 3; ++k)
    zfree = std::max(zfree, op_residual(modes1[k], modes2[k], hs));
  rep.details["mode_z_independence"] = zfree;
  // modes line up with the coefficient family: M0 = -H1/4, Mp = H3/4,
  // Mm = H2/4
  const DiffOp<double> f1 = build_family_member(FamilyMember::H1, tr);
  const DiffOp<double> f2 = build_family_member(FamilyMember::H2, tr);
  const DiffOp<double> f3 = build_family_member(FamilyMember::H3, tr);
  const double m_h1 = op_residual(modes1[0], op_scale(f1, C(-0.25)), hs);
  const double m_h3 = op_residual(modes1[1], op_scale(f3, C(0.25)), hs);
  const double m_h2 = op_residual(modes1[2], op_scale(f2, C(0.25)), hs);
  rep.details["mode0_vs_family"] = m_h1;
  rep.details["mode_plus_vs_family"] = m_h3;
  rep.details["mode_minus_vs_family"] = m_h2;
  // coefficient split identity and H1 = H11 + H12, pointwise
  double split = 0, sum11 = 0;
  for (const auto& a : hs)
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        const C z = C(0.19, 0.23);
        const C g76 = G_split_display(tr, a, mu, nu, z);
        const C gre = family_coeff(FamilyMember::H1, tr, a, mu, nu) -
                      std::exp(C(0, -2 * M_PI) * z) *
                          family_coeff(FamilyMember::H2, tr, a, mu, nu) -
                      std::exp(C(0, 2 * M_PI) * z) *
                          family_coeff(FamilyMember::H3, tr, a, mu, nu);
        split = std::max(split, rel_sc(g76, gre));
        sum11 = std::max(
            sum11, rel_sc(family_coeff(FamilyMember::H1, tr, a, mu, nu),
                          family_coeff(FamilyMember::H11, tr, a, mu, nu) +
                              family_coeff(FamilyMember::H12, tr, a, mu, nu)));
      }
  rep.details["four_exponential_split"] = split;
  rep.details["h1_sum_of_h11_h12"] = sum11;
  // the z-dependent transfer operator itself is -1/4 of the split display
  const C zt(0.29, 0.17);
  const DiffOp<double> tt = transfer_trig(tr, zt);
  const DiffOp<double> gop = op_from_blocks<double>(
      n, [tr, zt](const Heights& a, int mu, int nu) {
        return C(-0.25) * G_split_display(tr, a, mu, nu, zt);
      });
  const double tvsg = op_residual(tt, gop, hs);
  rep.details["transfer_vs_split_quarter"] = tvsg;
  for (double v : {r_rows, r_blocks, zfree, m_h1, m_h2, m_h3, split, sum11, tvsg})
    rep.observe(v);
  rep.pass = rep.max_residual < rep.tolerance;
  return rep;
}

inline CheckReport family_commute(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-7);
  rep.samples = pick(P.samples, 5);
  const int n = P.n % 2 == 1 ? P.n : 3;
  const Trig<double> tr{n, P.w.real(), default_delta(n)};
  Sampler S(P.seed);
  std::vector<Heights> hs;
  for (int s = 0; s < rep.samples; ++s) hs.push_back(S.heights(n));
  const DiffOp<double> H1 = build_family_member(FamilyMember::H1, tr);
  const DiffOp<double> H2 = build_family_member(FamilyMember::H2, tr);
  const DiffOp<double> H3 = build_family_member(FamilyMember::H3, tr);
  const DiffOp<double> H11 = build_family_member(FamilyMember::H11, tr);
  const DiffOp<double> H12 = build_family_member(FamilyMember::H12, tr);
  const double c12 = comm_residual(H1, H2, hs);
  const double c13 = comm_residual(H1, H3, hs);
  const double c23 = comm_residual(H2, H3, hs);
  const double c1112 = comm_residual(H11, H12, hs);
  rep.details["comm_h1_h2"] = c12;
  rep.details["comm_h1_h3"] = c13;
  rep.details["comm_h2_h3"] = c23;
  rep.details["comm_h11_h12_report_only"] = c1112;
  // control: the undegenerated transfer operators commute through the very
  // same composition machinery
  const MD md(3, P.tau, P.w, P.c, default_delta(3));
  std::vector<Heights> hs3;
  Sampler S3(P.seed + 1);
  for (int s = 0; s < 5; ++s) hs3.push_back(S3.heights(3));
  const double control = comm_residual(transfer_direct(md, C(0.37, 0.21)),
                                       transfer_direct(md, C(-0.18, 0.33)), hs3);
  rep.details["elliptic_transfer_control"] = control;
  rep.notes.push_back(
      "measured result: the z-free coefficient family does NOT commute; the "
      "commutators sit at order one while the full transfer operators "
      "commute to ~1e-13 through identical machinery");
  rep.notes.push_back(
      "mechanism: the degeneration of the boundary sum is not uniform in the "
      "height variables, so the limit family loses the compensation between "
      "characteristic sectors that enforces commutation before the limit");
  rep.observe(c12);
  rep.observe(c13);
  rep.observe(c23);
  rep.pass = c12 < rep.tolerance && c13 < rep.tolerance &&
             c23 < rep.tolerance && control < 1e-8;
  return rep;
}

// ---- classical layer ----

inline CheckReport poisson(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-6);
  rep.samples = pick(P.samples, 10);
  const int n = P.n;
  Sampler S(P.seed);
  const RealFn Hr = classical_fn(ClassicalKind::RatH);
  const RealFn Rp = classical_fn(ClassicalKind::RatPlus);
  const RealFn Rm = classical_fn(ClassicalKind::RatMinus);
  const RealFn Pt = classical_fn(ClassicalKind::TotalP);
  const std::vector<std::pair<const RealFn*, const RealFn*>> rational_pairs = {
      {&Hr, &Rp}, {&Hr, &Rm}, {&Hr, &Pt}, {&Rp, &Rm}, {&Rp, &Pt}, {&Rm, &Pt}};
  double worst = 0;
  double sinh23 = 0, sinh12 = 0, sinh13 = 0, sinh1112 = 0;
  const RealFn S2 = classical_fn(ClassicalKind::SinhH2);
  const RealFn S3 = classical_fn(ClassicalKind::SinhH3);
  const RealFn S1 = classical_fn(ClassicalKind::SinhH1);
  const RealFn S11 = classical_fn(ClassicalKind::SinhH11);
  const RealFn S12 = classical_fn(ClassicalKind::SinhH12);
  for (int s = 0; s < rep.samples; ++s) {
    const std::vector<double> x = S.positions(n), p = S.momenta(n);
    for (const auto& [f, g] : rational_pairs)
      worst = std::max(worst, poisson_residual(*f, *g, x, p));
    sinh23 = std::max(sinh23, poisson_residual(S2, S3, x, p));
    sinh12 = std::max(sinh12, poisson_residual(S1, S2, x, p));
    sinh13 = std::max(sinh13, poisson_residual(S1, S3, x, p));
    sinh1112 = std::max(sinh1112, poisson_residual(S11, S12, x, p));
  }
  rep.details["rational_family"] = worst;
  rep.details["sinh_h2_h3_measured"] = sinh23;
  rep.details["sinh_h1_h2_measured"] = sinh12;
  rep.details["sinh_h1_h3_measured"] = sinh13;
  rep.details["sinh_h11_h12_measured"] = sinh1112;
  rep.notes.push_back(
      "the rational family {R+R-, R+, R-, sum p} is in involution; the "
      "normalized sinh-family brackets are measured and reported without "
      "assertion (they do not vanish)");
  rep.observe(worst);
  rep.pass = worst < rep.tolerance;
  return rep;
}

inline CheckReport flow(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-6);
  rep.samples = pick(P.samples, 1000);
  const int n = P.n;
  std::vector<double> x, p;
  flow_initial_data(n, P.seed, x, p);
  const FlowResult fr =
      integrate_flow(classical_fn(ClassicalKind::RatH),
                     classical_fn(ClassicalKind::RatPlus), x, p, 1e-3,
                     rep.samples);
  rep.details["energy_drift"] = fr.drift_H;
  rep.details["second_invariant_drift"] = fr.drift_F2;
  rep.details["momentum_drift"] = fr.drift_P;
  rep.observe(fr.drift_H);
  rep.pass = fr.drift_H < rep.tolerance && fr.drift_F2 < 1e-5 &&
             fr.drift_P < 1e-5;
  return rep;
}

inline CheckReport scaling(const RunParams& P) {
  CheckReport rep;
  rep.tolerance = pick_tol(P.tol, 1e-4);
  rep.samples = pick(P.samples, 5);
  const int n = P.n;
  // fixed generic point: each row is a weighted divided difference, and
  // momentum profiles that are smooth in the particle index nearly annihilate
  // it (p = 0 exactly does), so a zigzag profile keeps the denominator of the
  // relative gap away from zero; growing spacings avoid reflection symmetry
  std::vector<double> xf(n), pf(n);
  for (int i = 0; i < n; ++i) {
    xf[i] = i + 0.13 * i * i;
    pf[i] = (i % 2 == 0 ? 1.0 : -1.0) * (0.5 + 0.1 * i);
  }
  const double gap_low = scaled_gap(1e1, xf, pf);
  const double gap_mid = scaled_gap(1e2, xf, pf);
  const double gap3 = scaled_gap(1e3, xf, pf);
  rep.details["gap_chi_1e1"] = gap_low;
  rep.details["gap_chi_1e2"] = gap_mid;
  rep.details["gap_chi_1e3"] = gap3;
  {
    // report-only spread over random points (the relative gap can blow up
    // when a draw lands near the kernel of the rational product), plus the
    // undressed route, which closes only like chi^-1
    Sampler Sd(P.seed);
    double sampled3 = 0, fixed3 = 0;
    for (int s = 0; s < rep.samples; ++s) {
      const std::vector<double> x = Sd.positions(n), p = Sd.momenta(n);
      sampled3 = std::max(sampled3, scaled_gap(1e3, x, p));
      fixed3 = std::max(fixed3, scaled_gap_fixed_momenta(1e3, x, p));
    }
    rep.details["gap_chi_1e3_sampled"] = sampled3;
    rep.details["fixed_momentum_gap_chi_1e3"] = fixed3;
    rep.notes.push_back(
        "gap_chi_* compares the scaled sinh product against the rational "
        "product at dressed momenta p - n*pi*x/chi (the exponential weights "
        "are exactly that shift, common to both rows); at fixed momenta the "
        "dressing itself dominates at O(1/chi), reported as "
        "fixed_momentum_gap_chi_1e3");
  }
  // exponential limit at widely separated, strictly decreasing coordinates:
  // every term tends to 2^{2(n-1)} (-1)^{mu+nu} times its limit display
  double exp_far = 0, exp_near = 0;
  {
    Sampler Se(P.seed + 1);
    const std::vector<double> base = Se.positions(n), p = Se.momenta(n);
    for (double sep : {4.0, 8.0}) {
      std::vector<double> x(n);
      for (int i = 0; i < n; ++i) x[i] = base[i] + (n - 1 - i) * sep;
      double worst = 0;
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          const double Cc = std::pow(2.0, 2 * (n - 1)) * ((mu + nu) % 2 ? -1 : 1);
          const double r = sinh_product_term(x, p, mu, nu) /
                           exponential_limit_term(x, p, mu, nu);
          worst = std::max(worst, std::abs(r / Cc - 1.0));
        }
      (sep < 5.0 ? exp_near : exp_far) = worst;
    }
  }
  rep.details["exponential_limit_sep4"] = exp_near;
  rep.details["exponential_limit_sep8"] = exp_far;
  rep.observe(gap3);
  rep.pass = gap3 < rep.tolerance && gap3 <= gap_mid && gap_mid <= gap_low &&
             exp_far < 1e-6 && exp_far <= exp_near + 1e-12;
  return rep;
}

}  // namespace checks

inline const std::vector<std::pair<std::string, CheckFn>>& check_table() {
  static const std::vector<std::pair<std::string, CheckFn>> table = {
      {"theta", checks::theta},
      {"ybe", checks::ybe},
      {"unitarity", checks::unitarity},
      {"crossing", checks::crossing},
      {"re", checks::re},
      {"dual-re", checks::dual_re},
      {"duals", checks::duals},
      {"face-vertex", checks::face_vertex},
      {"detformula", checks::detformula},
      {"appendix40", checks::appendix40},
      {"linv", checks::linv},
      {"lyb", checks::lyb},
      {"closedform", checks::closedform},
      {"commute-t", checks::commute_t},
      {"trig-limit", checks::trig_limit},
      {"hamiltonian", checks::hamiltonian},
      {"family-commute", checks::family_commute},
      {"poisson", checks::poisson},
      {"flow", checks::flow},
      {"scaling", checks::scaling},
  };
  return table;
}

inline const CheckFn* find_check(const std::string& name) {
  for (const auto& [k, fn] : check_table())
    if (k == name) return &fn;
  return nullptr;
}

inline CheckReport run_check(const std::string& name, const RunParams& P) {
  const CheckFn* fn = find_check(name);
  if (!fn) throw std::runtime_error("unknown check: " + name);
  const auto t0 = std::chrono::steady_clock::now();
  CheckReport rep = (*fn)(P);
  const auto t1 = std::chrono::steady_clock::now();
  rep.name = name;
  rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return rep;
}

}  // namespace lab
