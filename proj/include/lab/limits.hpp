#pragma once
// The two-step degeneration of the open-chain transfer operator:
//   (i) large Im tau with the boundary parameter tied to tau, which turns the
//       scalar theta blocks into finite sums of sine ratios, and
//  (ii) large |Im z|, which strips the spectral parameter and leaves the
//       z-independent coefficient limits used to assemble candidate
//       conserved difference operators (one distinguished operator H plus the
//       split family H1, H2, H3, H11, H12 read off the two oscillating modes
//       of the product form).
// Only odd n admits the single surviving branch in the mode bookkeeping, so
// the family code asserts n odd.

#include "lab/diffop.hpp"

namespace lab {

// generic real shift data surviving the trigonometric limit
template <class R>
struct Trig {
  int n;
  R w;
  std::vector<R> delta;

  R kappa() const { return R(n - 1) / R(2); }
  R dsum() const {
    R s{};
    for (R d : delta) s += d;
    return s;
  }
  std::vector<R> abar(const Heights& a) const {
    R mean{};
    for (int v : a) mean += R(v);
    mean /= R(n);
    std::vector<R> out(n);
    for (int i = 0; i < n; ++i) out[i] = R(a[i]) - mean + delta[i];
    return out;
  }
};

template <class R>
cx<R> sinpi(const cx<R>& z) {
  return csin(cx<R>(pi_of<R>()) * z);
}
template <class R>
cx<R> sinpi(R x) {
  return cx<R>(r_sin(pi_of<R>() * x), R(0));
}

// geometric sum over the doubled characteristic: sum_{g2} omega^{2 g1 g2};
// vanishes unless 2 g1 = 0 mod n
inline std::complex<double> roots_of_unity_sum(int g1, int n) {
  std::complex<double> s{};
  for (int g2 = 0; g2 < n; ++g2)
    s += std::polar(1.0, 2.0 * M_PI * (2.0 * g1 * g2) / n);
  return s;
}

// single-sine collapsed forms of the two scalar blocks
template <class R>
cx<R> F1_collapsed(const Trig<R>& tr, const Heights& a, int mu, int nu,
                   cx<R> z) {
  const auto ab = tr.abar(a);
  const int n = tr.n;
  cx<R> den(1);
  for (int j = 0; j < n; ++j) {
    if (j == nu) continue;
    den *= sinpi<R>(-tr.w * (ab[j] + R(mu == j ? 1 : 0) - ab[nu] - R(mu == nu ? 1 : 0)));
  }
  if (cabs(den) < R(1e-8)) throw PoleNearby("sine denominator");
  return sinpi<R>(-z + cx<R>(tr.kappa() - R(n) * tr.w * ab[mu])) / den;
}

template <class R>
cx<R> F2_collapsed(const Trig<R>& tr, const Heights& a, int mu, int nu,
                   cx<R> z) {
  const auto ab = tr.abar(a);
  const int n = tr.n;
  const R bb = ab[nu] + R(mu == nu ? 1 : 0) - R(1);
  cx<R> den(1);
  for (int k = 0; k < n; ++k) {
    if (k == mu) continue;
    den *= sinpi<R>(-tr.w * (ab[k] - ab[mu]));
  }
  if (cabs(den) < R(1e-8)) throw PoleNearby("sine denominator");
  return sinpi<R>(z + cx<R>(tr.kappa() - R(n) * tr.w * bb)) / den;
}

// the finite characteristic sums these collapse from
template <class R>
cx<R> F1_gsum(const Trig<R>& tr, const Heights& a, int mu, int nu, cx<R> z) {
  const auto ab = tr.abar(a);
  const int n = tr.n;
  const cx<R> Xden = -z + cx<R>(tr.w * tr.dsum() + tr.w * R(1 - n) + tr.kappa());
  const cx<R> Xnu = Xden - cx<R>(tr.w * (ab[nu] + R(mu == nu ? 1 : 0) - R(1) + ab[mu]));
  cx<R> tot{};
  for (int g2 = 0; g2 < n; ++g2) {
    const R s = R(2 * g2 + 1) / R(n);
    cx<R> term = sinpi<R>(Xnu + cx<R>(s)) / sinpi<R>(Xden);
    for (int j = 0; j < n; ++j) {
      if (j == nu) continue;
      const R Yj = -tr.w * (ab[j] + R(mu == j ? 1 : 0) - R(1) + ab[mu]);
      const R Dj = -tr.w * (ab[j] + R(mu == j ? 1 : 0) - ab[nu] - R(mu == nu ? 1 : 0));
      term *= sinpi<R>(Yj + s) / sinpi<R>(Dj);
    }
    tot += term;
  }
  return tot;
}

template <class R>
cx<R> F2_gsum(const Trig<R>& tr, const Heights& a, int mu, int nu, cx<R> z) {
  const auto ab = tr.abar(a);
  const int n = tr.n;
  const cx<R> Xden = z + cx<R>(tr.w * tr.dsum() + tr.kappa());
  const cx<R> Xmu = Xden - cx<R>(tr.w * (ab[mu] + ab[nu] + R(mu == nu ? 1 : 0) - R(1)));
  cx<R> tot{};
  for (int g2 = 0; g2 < n; ++g2) {
    const R s = R(2 * g2 + 1) / R(n);
    cx<R> term = sinpi<R>(Xmu + cx<R>(s)) / sinpi<R>(Xden);
    for (int j = 0; j < n; ++j) {
      if (j == mu) continue;
      const R Yj = -tr.w * (ab[j] + R(mu == nu ? 1 : 0) - R(1) + ab[nu]);
      term *= sinpi<R>(Yj + s) / sinpi<R>(-tr.w * (ab[j] - ab[mu]));
    }
    tot += term;
  }
  return tot;
}

// spectral-parameter-free limits of the blocks at large |Im z|, kept as the
// full characteristic sum (the mode-selection argument collapses them; see
// asymptotic_reconstructed)
template <class R>
cx<R> asymptotic_F(int which, const Trig<R>& tr, const Heights& a, int mu,
                   int nu) {
  const auto ab = tr.abar(a);
  const int n = tr.n;
  const R pi = pi_of<R>();
  cx<R> tot{};
  for (int g2 = 0; g2 < n; ++g2) {
    const R s = R(2 * g2 + 1) / R(n);
    if (which == 1) {
      cx<R> term = expi<R>(pi * (-tr.w * (ab[nu] + R(mu == nu ? 1 : 0) - R(1) + ab[mu]) + s));
      for (int j = 0; j < n; ++j) {
        if (j == nu) continue;
        const R Yj = -tr.w * (ab[j] + R(mu == j ? 1 : 0) - R(1) + ab[mu]);
        const R Dj = -tr.w * (ab[j] + R(mu == j ? 1 : 0) - ab[nu] - R(mu == nu ? 1 : 0));
        term *= sinpi<R>(Yj + s) / sinpi<R>(Dj);
      }
      tot += term;
    } else {
      cx<R> term = expi<R>(-pi * (-tr.w * (ab[mu] + ab[nu] + R(mu == nu ? 1 : 0) - R(1)) + s));
      for (int j = 0; j < n; ++j) {
        if (j == mu) continue;
        const R Yj = -tr.w * (ab[j] + R(mu == nu ? 1 : 0) - R(1) + ab[nu]);
        term *= sinpi<R>(Yj + s) / sinpi<R>(-tr.w * (ab[j] - ab[mu]));
      }
      tot += term;
    }
  }
  return tot;
}

// keep only the single surviving exponential branch of every sine factor and
// perform the characteristic sum in closed form (odd n: the alternating sum
// contributes -n); equals asymptotic_F identically
template <class R>
cx<R> asymptotic_reconstructed(int which, const Trig<R>& tr, const Heights& a,
                               int mu, int nu) {
  const auto ab = tr.abar(a);
  const int n = tr.n;
  const R pi = pi_of<R>();
  // (2i)^{1-n} for the stripped sine prefactors
  cx<R> pref = cx<R>(R(-n));
  const cx<R> inv2i = cx<R>(0, R(-0.5));  // 1/(2i)
  for (int k = 0; k < n - 1; ++k) pref *= inv2i;
  if (which == 1) {
    R phase = -tr.w * (ab[nu] + R(mu == nu ? 1 : 0) - R(1) + ab[mu]);
    cx<R> den(1);
    for (int j = 0; j < n; ++j) {
      if (j == nu) continue;
      phase += -tr.w * (ab[j] + R(mu == j ? 1 : 0) - R(1) + ab[mu]);
      den *= sinpi<R>(-tr.w * (ab[j] + R(mu == j ? 1 : 0) - ab[nu] - R(mu == nu ? 1 : 0)));
    }
    return pref * expi<R>(pi * phase) / den;
  }
  R phase = -tr.w * (ab[mu] + ab[nu] + R(mu == nu ? 1 : 0) - R(1));
  cx<R> den(1);
  for (int j = 0; j < n; ++j) {
    if (j == mu) continue;
    phase += -tr.w * (ab[j] + R(mu == nu ? 1 : 0) - R(1) + ab[nu]);
    den *= sinpi<R>(-tr.w * (ab[j] - ab[mu]));
  }
  // conjugate branch: every factor contributes e^{-i pi(...)}
  cx<R> prefc = cx<R>(R(-n));
  const cx<R> conj2i = cx<R>(0, R(0.5));  // 1/(-2i)
  for (int k = 0; k < n - 1; ++k) prefc *= conj2i;
  return prefc * expi<R>(-pi * phase) / den;
}

// ---- z-independent coefficient limits and the operator family ----

// product of all sine denominators shared by the family members
template <class R>
cx<R> family_denominator(const Trig<R>& tr, const std::vector<R>& ab, int mu,
                         int nu) {
  const int n = tr.n;
  cx<R> den(1);
  for (int j = 0; j < n; ++j) {
    if (j == nu) continue;
    den *= sinpi<R>(-tr.w * (ab[j] + R(mu == j ? 1 : 0) - ab[nu] - R(mu == nu ? 1 : 0)));
  }
  for (int k = 0; k < n; ++k) {
    if (k == mu) continue;
    den *= sinpi<R>(-tr.w * (ab[k] - ab[mu]));
  }
  if (cabs(den) < R(1e-10)) throw PoleNearby("family denominator");
  return den;
}

// limit coefficient of the full product block at large |Im z|
template <class R>
cx<R> G_limit(const Trig<R>& tr, const Heights& a, int mu, int nu) {
  const auto ab = tr.abar(a);
  const R pi = pi_of<R>();
  const R ph = tr.w * R(tr.n) * (ab[nu] - ab[mu]) + R(tr.n) * tr.w * R(mu == nu ? 1 : 0) - tr.w;
  return expi<R>(pi * ph) / family_denominator(tr, ab, mu, nu);
}

// one-row factors of the factorized display of the same operator
template <class R>
cx<R> H_row_plus(const Trig<R>& tr, const Heights& a, int nu) {
  const auto ab = tr.abar(a);
  const R pi = pi_of<R>();
  cx<R> v = expi<R>(pi * R(tr.n) * tr.w * (R(a[nu]) + tr.delta[nu]));
  for (int j = 0; j < tr.n; ++j) {
    if (j == nu) continue;
    v /= sinpi<R>(-tr.w * (ab[j] - ab[nu]));
  }
  return v;
}
template <class R>
cx<R> H_row_minus(const Trig<R>& tr, const Heights& a, int mu) {
  const auto ab = tr.abar(a);
  const R pi = pi_of<R>();
  cx<R> v = expi<R>(-pi * R(tr.n) * tr.w * (R(a[mu]) + tr.delta[mu]));
  for (int k = 0; k < tr.n; ++k) {
    if (k == mu) continue;
    v /= sinpi<R>(-tr.w * (ab[k] - ab[mu]));
  }
  return v;
}

template <class R>
DiffOp<R> build_H_from_limit(const Trig<R>& tr) {
  return op_from_blocks<R>(tr.n, [tr](const Heights& a, int mu, int nu) {
    return G_limit(tr, a, mu, nu);
  });
}

template <class R>
DiffOp<R> build_H_from_rows(const Trig<R>& tr) {
  DiffOp<R> opP, opQ;
  for (int nu = 0; nu < tr.n; ++nu) {
    std::vector<int> m(tr.n, 0);
    m[nu] = 1;
    opP[m] = [tr, nu](const Heights& a) {
      return H_row_plus(tr, shifted(a, nu, +1), nu);
    };
  }
  for (int mu = 0; mu < tr.n; ++mu) {
    std::vector<int> m(tr.n, 0);
    m[mu] = -1;
    opQ[m] = [tr, mu](const Heights& a) {
      return H_row_minus(tr, shifted(a, mu, -1), mu);
    };
  }
  return op_compose(opP, opQ);
}

template <class R>
DiffOp<R> build_H_from_blocks(const Trig<R>& tr) {
  return op_from_blocks<R>(tr.n, [tr](const Heights& a, int mu, int nu) {
    return asymptotic_F(1, tr, a, mu, nu) * asymptotic_F(2, tr, a, mu, nu);
  });
}

// family coefficients: the non-oscillating part (G1 = G11 + G12) and the two
// e^{-+2 pi i z} mode amplitudes (G2, G3); z-dependent scalars dropped
enum class FamilyMember { H1, H2, H3, H11, H12 };

template <class R>
cx<R> family_coeff(FamilyMember which, const Trig<R>& tr, const Heights& a,
                   int mu, int nu) {
  const auto ab = tr.abar(a);
  const int n = tr.n;
  const R pi = pi_of<R>();
  const cx<R> gden = family_denominator(tr, ab, mu, nu);
  const R Phi = R(n + 1) - R(n) * tr.w * (ab[mu] + ab[nu] + R(mu == nu ? 1 : 0) - R(1));
  const R Psi = -R(n) * tr.w * (ab[mu] + R(1) - ab[nu] - R(mu == nu ? 1 : 0));
  switch (which) {
    case FamilyMember::H1:
      return (expi<R>(pi * Phi) + expi<R>(-pi * Phi)) / gden;
    case FamilyMember::H2:
      return expi<R>(pi * Psi) / gden;
    case FamilyMember::H3:
      return expi<R>(-pi * Psi) / gden;
    case FamilyMember::H11:
      return expi<R>(pi * Phi) / gden;
    case FamilyMember::H12:
      return expi<R>(-pi * Phi) / gden;
  }
  return cx<R>(0);
}

template <class R>
DiffOp<R> build_family_member(FamilyMember which, const Trig<R>& tr) {
  if (tr.n % 2 == 0) throw std::runtime_error("family construction needs odd n");
  return op_from_blocks<R>(tr.n, [which, tr](const Heights& a, int mu, int nu) {
    return family_coeff(which, tr, a, mu, nu);
  });
}

// full coefficient of the product block at finite z (four-exponential split);
// equals G1 - e^{-2 pi i z} G2 - e^{+2 pi i z} G3 term by term
template <class R>
cx<R> G_split_display(const Trig<R>& tr, const Heights& a, int mu, int nu,
                      cx<R> z) {
  const auto ab = tr.abar(a);
  const int n = tr.n;
  const R pi = pi_of<R>();
  const cx<R> gden = family_denominator(tr, ab, mu, nu);
  const R Phi = R(n + 1) - R(n) * tr.w * (ab[mu] + ab[nu] + R(mu == nu ? 1 : 0) - R(1));
  const cx<R> arg2 = cx<R>(-2) * z + cx<R>(-R(n) * tr.w * (ab[mu] + R(1) - ab[nu] - R(mu == nu ? 1 : 0)));
  const cx<R> I(0, 1);
  return (expi<R>(pi * Phi) + expi<R>(-pi * Phi) - cexp(I * cx<R>(pi) * arg2) -
          cexp(-I * cx<R>(pi) * arg2)) /
         gden;
}

// trigonometric transfer operator from the collapsed blocks
template <class R>
DiffOp<R> transfer_trig(const Trig<R>& tr, cx<R> z) {
  return op_from_blocks<R>(tr.n, [tr, z](const Heights& a, int mu, int nu) {
    return F1_collapsed(tr, a, mu, nu, z) * F2_collapsed(tr, a, mu, nu, z);
  });
}

// recover the three mode amplitudes of t(z) = M0 + e^{2 pi i z} Mp +
// e^{-2 pi i z} Mm from samples at three spectral points
template <class R>
std::array<DiffOp<R>, 3> extract_modes(const Trig<R>& tr,
                                       const std::array<cx<R>, 3>& zs) {
  auto tshared = std::make_shared<std::array<DiffOp<R>, 3>>();
  for (int k = 0; k < 3; ++k) (*tshared)[k] = transfer_trig(tr, zs[k]);
  Mat<R> V(3, 3);
  const R two_pi = R(2) * pi_of<R>();
  const cx<R> I(0, 1);
  for (int k = 0; k < 3; ++k) {
    V(k, 0) = cx<R>(1);
    V(k, 1) = cexp(I * cx<R>(two_pi) * zs[k]);
    V(k, 2) = cexp(-I * cx<R>(two_pi) * zs[k]);
  }
  auto Vinv = std::make_shared<Mat<R>>(V.inverse());
  std::array<DiffOp<R>, 3> out;
  std::map<std::vector<int>, int> keys;
  for (const auto& [m, c] : (*tshared)[0]) keys[m] = 1;
  for (int mode = 0; mode < 3; ++mode) {
    for (const auto& [m, tag] : keys) {
      out[mode][m] = [tshared, Vinv, mode, m](const Heights& a) {
        cx<R> s{};
        for (int k = 0; k < 3; ++k) s += (*Vinv)(mode, k) * (*tshared)[k].at(m)(a);
        return s;
      };
    }
  }
  return out;
}

// ---- convergence of the elliptic blocks to the trigonometric ones ----

// per-(mu,nu) ratio of the elliptic block at modulus i*T (boundary parameter
// tied to the modulus: c = eps*tau + c') to the trigonometric block,
// normalized by the (0,0) reference so overall scalars cancel
template <class R>
std::vector<cx<R>> block_ratio_table(int n, R wre, const std::vector<R>& delta,
                                     R eps, R cprime, R T, cx<R> z,
                                     const Heights& a) {
  const cx<R> tau(0, T);
  const Model<R> md(n, tau, cx<R>(wre), cx<R>(cprime) + eps * tau, delta);
  const Trig<R> tr{n, wre, delta};
  std::vector<cx<R>> out;
  out.reserve(n * n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      out.push_back(md.F1_direct(a, mu, nu, z) / F1_gsum(tr, a, mu, nu, z));
  const cx<R> ref = out[0];
  for (auto& v : out) v /= ref;
  return out;
}

// worst relative movement of the normalized ratio table between consecutive
// schedule points; the last entry is the headline drift
template <class R>
std::vector<R> ratio_drift_schedule(int n, R wre, const std::vector<R>& delta,
                                    R eps, R cprime, const std::vector<R>& Ts,
                                    cx<R> z, const Heights& a) {
  std::vector<std::vector<cx<R>>> tables;
  for (R T : Ts) tables.push_back(block_ratio_table<R>(n, wre, delta, eps, cprime, T, z, a));
  std::vector<R> drifts;
  for (size_t i = 0; i + 1 < tables.size(); ++i) {
    R worst{};
    for (size_t k = 0; k < tables[i].size(); ++k) {
      const cx<R> r = tables[i + 1][k] / tables[i][k] - cx<R>(1);
      worst = std::max(worst, cabs(r));
    }
    drifts.push_back(worst);
  }
  return drifts;
}

}  // namespace lab
