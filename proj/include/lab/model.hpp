#pragma once
// The Z_n elliptic vertex model with one open boundary, collected in a single
// parameter object:
//   - sigma_{a1,a2}(z): theta with characteristics shifted by a1/n, a2/n
//   - R(z): the n^2 x n^2 vertex weight matrix built from the Z_n x Z_n
//     Heisenberg pair (g, h) and weight ratios sigma_al(z+eta)/sigma_al(eta)
//   - K0/K/Kt: diagonal-free boundary matrices from the doubled-characteristic
//     expansion, K(z) = K0(z) K0(0), Kt(z) = K(-z - n w / 2)
//   - phi / phit / phib: intertwiner columns between vertex and face (height)
//     descriptions, plus their two dual row families from matrix inverses
//   - face_weight: the admissible height-face weights in corner geometry
//   - F1/F2: scalar building blocks of the factorized transfer operator, in
//     both "direct" (matrix-sandwich) and "closed" (double characteristic sum)
//     form.
// Heights are integer vectors a (length n); abar recenters them and adds the
// generic real shift vector delta.

#include <vector>

#include "lab/elliptic.hpp"
#include "lab/errors.hpp"
#include "lab/linalg.hpp"

namespace lab {

using Heights = std::vector<int>;

inline Heights shifted(const Heights& a, int mu, int by) {
  Heights b = a;
  b[mu] += by;
  return b;
}

// index of the unit coordinate vector v, or -1 if v is not one
inline int unit_index(const std::vector<int>& v) {
  int sum = 0, idx = -1;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0 && v[i] != 1) return -1;
    sum += v[i];
    if (v[i] == 1) idx = static_cast<int>(i);
  }
  return sum == 1 ? idx : -1;
}

template <class R>
class Model {
 public:
  int n;
  cx<R> tau, w, c, eta;
  std::vector<R> delta;

  Model(int n_, cx<R> tau_, cx<R> w_, cx<R> c_, std::vector<R> delta_)
      : n(n_), tau(tau_), w(w_), c(c_), eta(w_ / R(n_)), delta(std::move(delta_)) {}

  cx<R> sigma(int a1, int a2, cx<R> z) const {
    return theta_char<R>(R(0.5) + R(a1) / R(n), R(0.5) + R(a2) / R(n), z, tau);
  }
  cx<R> h(cx<R> z) const { return sigma(0, 0, z); }
  // the n basis sections at modulus n*tau indexed by j
  cx<R> theta_j(int j, cx<R> z) const {
    return theta_char<R>(R(0.5) - R(j) / R(n), R(0.5), z, R(n) * tau);
  }

  cx<R> omega_pow(long k) const {
    const R two_pi = R(2) * pi_of<R>();
    return expi<R>(two_pi * R(static_cast<double>(((k % n) + n) % n)) / R(n));
  }

  Mat<R> g_mat() const {
    Mat<R> g(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = omega_pow(i);
    return g;
  }
  Mat<R> h_mat() const {
    Mat<R> m(n, n);
    for (int i = 0; i < n; ++i) m(i, (i + 1) % n) = cx<R>(1);
    return m;
  }

  // vertex weights: R(z) = (1/n) sum_{al} [sigma_al(z+eta)/sigma_al(eta)] I_al (x) I_al^{-1}
  Mat<R> Rmat(cx<R> z) const {
    const Mat<R> g = g_mat(), hs = h_mat();
    Mat<R> out(n * n, n * n);
    for (int a1 = 0; a1 < n; ++a1)
      for (int a2 = 0; a2 < n; ++a2) {
        const cx<R> den = sigma(a1, a2, eta);
        guard_pole(den, "vertex weight denominator");
        const cx<R> wgt = sigma(a1, a2, z + eta) / den;
        const Mat<R> Ia = g.pow(a2) * hs.pow(a1);
        out = out + wgt * Ia.kron(Ia.inverse());
      }
    return out * (cx<R>(1) / cx<R>(R(n)));
  }

  // boundary matrix: doubled-characteristic sum with weights
  // U_{2al}(z) = sigma_{2al}(z+c)/sigma_{2al}(c)
  Mat<R> K0(cx<R> z) const {
    const Mat<R> g = g_mat(), hs = h_mat();
    Mat<R> out(n, n);
    for (int a1 = 0; a1 < n; ++a1)
      for (int a2 = 0; a2 < n; ++a2) {
        const cx<R> den = sigma(2 * a1, 2 * a2, c);
        guard_pole(den, "boundary weight denominator");
        const cx<R> u = sigma(2 * a1, 2 * a2, z + c) / den;
        out = out + u * omega_pow(2L * a1 * a2) *
                        (g.pow((2 * a2) % n) * hs.pow((2 * a1) % n));
      }
    return out;
  }
  Mat<R> K(cx<R> z) const { return K0(z) * K0(cx<R>(0)); }
  Mat<R> Kt(cx<R> z) const { return K(-z - R(n) * w / R(2)); }

  std::vector<R> abar(const Heights& a) const {
    R mean{};
    for (int v : a) mean += R(v);
    mean /= R(n);
    std::vector<R> out(n);
    for (int i = 0; i < n; ++i) out[i] = R(a[i]) - mean + delta[i];
    return out;
  }

  // intertwiner column between heights a and a+mu, components theta_j
  Vec<R> phi(const Heights& a, int mu, cx<R> z) const {
    const std::vector<R> ab = abar(a);
    Vec<R> v(n);
    for (int j = 0; j < n; ++j) v[j] = theta_j(j, z - R(n) * w * ab[mu]);
    return v;
  }

  // columns lam: phi_{a-lam, a}
  Mat<R> Mtilde(const Heights& a, cx<R> z) const {
    Mat<R> m(n, n);
    for (int lam = 0; lam < n; ++lam) {
      const Vec<R> col = phi(shifted(a, lam, -1), lam, z);
      for (int i = 0; i < n; ++i) m(i, lam) = col[i];
    }
    return m;
  }
  // columns lam: phi_{a, a+lam}
  Mat<R> Mbar(const Heights& a, cx<R> z) const {
    Mat<R> m(n, n);
    for (int lam = 0; lam < n; ++lam) {
      const Vec<R> col = phi(a, lam, z);
      for (int i = 0; i < n; ++i) m(i, lam) = col[i];
    }
    return m;
  }

  // dual rows: phit_{a-mu,a} from Mtilde^{-1}, phib_{a,a+mu} from Mbar^{-1}
  Vec<R> phit(const Heights& a, int mu, cx<R> z) const {
    const Mat<R> inv = Mtilde(a, z).inverse();
    Vec<R> row(n);
    for (int j = 0; j < n; ++j) row[j] = inv(mu, j);
    return row;
  }
  Vec<R> phib(const Heights& a, int mu, cx<R> z) const {
    const Mat<R> inv = Mbar(a, z).inverse();
    Vec<R> row(n);
    for (int j = 0; j < n; ++j) row[j] = inv(mu, j);
    return row;
  }

  // admissible face weight in corner geometry: the four heights of a face,
  // [NW NE; SW SE], each neighbouring pair differing by a unit vector; the
  // shift data abar is taken at the SE corner.
  cx<R> face_weight(const Heights& NW, const Heights& NE, const Heights& SW,
                    const Heights& SE, cx<R> z) const {
    std::vector<int> d1(n), d2(n);
    for (int i = 0; i < n; ++i) {
      d1[i] = SE[i] - SW[i];
      d2[i] = SE[i] - NE[i];
    }
    const int lam = unit_index(d1), rho = unit_index(d2);
    if (lam < 0 || rho < 0) return cx<R>(0);
    const std::vector<R> ab = abar(SE);
    if (lam == rho) {
      const int mu = lam;
      std::vector<int> d3(n);
      for (int i = 0; i < n; ++i) d3[i] = SE[i] - NW[i] - (i == mu ? 1 : 0);
      const int nu = unit_index(d3);
      if (nu < 0) return cx<R>(0);
      if (nu == mu) return h(z + w) / h(w);
      const R d = ab[nu] - ab[mu];
      return h(z - d * w) / h(-d * w);
    }
    for (int i = 0; i < n; ++i)
      if (NW[i] != SE[i] - (i == lam ? 1 : 0) - (i == rho ? 1 : 0)) return cx<R>(0);
    const R d = ab[lam] - ab[rho];
    return h(z) * h((d + R(1)) * w) / (h(w) * h(d * w));
  }

  // outer products entering the factorized transfer operator
  Mat<R> f_op(const Heights& a, int mu, cx<R> z, cx<R> xi1 = cx<R>(0),
              cx<R> xi2 = cx<R>(0)) const {
    const Vec<R> col = phi(shifted(a, mu, -1), mu, z + xi1);
    const Vec<R> row = phit(a, mu, z + xi2);
    return outer(col, row);
  }
  Mat<R> g_op(const Heights& a, int mu, cx<R> z, cx<R> xi1 = cx<R>(0),
              cx<R> xi2 = cx<R>(0)) const {
    const Vec<R> col = phi(a, mu, z + xi2);
    const Vec<R> row = phib(a, mu, z + xi1);
    return outer(col, row);
  }

  // scalar transfer blocks: dual row (around a+mu) x boundary matrix x column
  cx<R> F1_direct(const Heights& a, int mu, int nu, cx<R> z,
                  cx<R> xi2 = cx<R>(0)) const {
    const Heights amu = shifted(a, mu, +1);
    Mat<R> m(n, n);
    for (int lam = 0; lam < n; ++lam) {
      const Vec<R> col = phi(shifted(amu, lam, -1), lam, z + xi2);
      for (int i = 0; i < n; ++i) m(i, lam) = col[i];
    }
    const Mat<R> inv = m.inverse();
    Vec<R> row(n);
    for (int j = 0; j < n; ++j) row[j] = inv(nu, j);
    const Vec<R> col = phi(a, mu, -z + xi2);
    return dot(row, matvec(K(z), col));
  }
  cx<R> F2_direct(const Heights& a, int mu, int nu, cx<R> z,
                  cx<R> xi1 = cx<R>(0)) const {
    const Vec<R> row = phib(a, mu, -z + xi1);
    const Heights amn = shifted(shifted(a, mu, +1), nu, -1);
    const Vec<R> col = phi(amn, nu, z + xi1);
    return dot(row, matvec(Kt(z), col));
  }

  cx<R> U2g(int g1, int g2, cx<R> z) const {
    const cx<R> den = sigma(2 * g1, 2 * g2, c);
    guard_pole(den, "boundary weight denominator");
    return sigma(2 * g1, 2 * g2, z + c) / den;
  }

  // closed double-characteristic sums for the same blocks (equal to the
  // direct forms up to one n-dependent overall constant, resolved by the
  // caller at a reference point)
  cx<R> F1_closed(const Heights& a, int mu, int nu, cx<R> z) const {
    const std::vector<R> ab = abar(a);
    R ds{};
    for (R d : delta) ds += d;
    const cx<R> Xden = -z + w * ds + w * R(1 - n) + cx<R>(R(n - 1) / R(2));
    const cx<R> Xnu = Xden - w * (ab[nu] + R(mu == nu ? 1 : 0) - R(1) + ab[mu]);
    const R two_pi = R(2) * pi_of<R>();
    cx<R> tot{};
    for (int g1 = 0; g1 < n; ++g1)
      for (int g2 = 0; g2 < n; ++g2) {
        cx<R> term = U2g(g1, g2, z) * expi<R>(-two_pi * R(2 * g1 * g2) / R(n));
        term *= sigma(2 * g1, 2 * g2 + 1, Xnu) / h(Xden);
        for (int j = 0; j < n; ++j) {
          if (j == nu) continue;
          const cx<R> Yj = -w * (ab[j] + R(mu == j ? 1 : 0) - R(1) + ab[mu]);
          const cx<R> Dj =
              -w * (ab[j] + R(mu == j ? 1 : 0) - ab[nu] - R(mu == nu ? 1 : 0));
          term *= sigma(2 * g1, 2 * g2 + 1, Yj) / h(Dj);
        }
        tot += term;
      }
    return tot;
  }
  cx<R> F2_closed(const Heights& a, int mu, int nu, cx<R> z) const {
    const std::vector<R> ab = abar(a);
    R ds{};
    for (R d : delta) ds += d;
    const cx<R> Xden = z + w * ds + cx<R>(R(n - 1) / R(2));
    const cx<R> Xmu = Xden - w * (ab[mu] + ab[nu] + R(mu == nu ? 1 : 0) - R(1));
    const R two_pi = R(2) * pi_of<R>();
    cx<R> tot{};
    for (int g1 = 0; g1 < n; ++g1)
      for (int g2 = 0; g2 < n; ++g2) {
        cx<R> term = U2g(g1, g2, -z - R(n) * w / R(2)) *
                     expi<R>(-two_pi * R(2 * g1 * g2) / R(n));
        term *= sigma(2 * g1, 2 * g2 + 1, Xmu) / h(Xden);
        for (int j = 0; j < n; ++j) {
          if (j == mu) continue;
          const cx<R> Yj = -w * (ab[j] + R(mu == nu ? 1 : 0) - R(1) + ab[nu]);
          term *= sigma(2 * g1, 2 * g2 + 1, Yj) / h(-w * (ab[j] - ab[mu]));
        }
        tot += term;
      }
    return tot;
  }

 private:
  void guard_pole(const cx<R>& den, const char* what) const {
    // every theta block decays like exp(-pi Im tau / 4) or slower, so the
    // zero detector must track that scale or it fires spuriously at the
    // large-modulus end of the degeneration studies
    const R scale = r_exp(-pi_of<R>() * tau.imag() / R(4));
    if (cabs(den) < R(1e-8) * scale) throw PoleNearby(what);
  }
};

}  // namespace lab
