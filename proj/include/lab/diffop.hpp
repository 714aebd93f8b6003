#pragma once
// Difference operators acting on functions of an integer height vector a:
//   O = sum_m c_m(a) Gamma_m,   Gamma_m f(a) = f(a + m) Gamma_m,
// stored in normal form as a map shift -> coefficient closure.  Composition
// follows from the commutation rule: (c1 Gamma_m1)(c2 Gamma_m2) =
// c1(a) c2(a+m1) Gamma_{m1+m2}.  A matrix-valued variant carries n x n
// coefficient blocks for the factorized lattice operators.

#include <functional>
#include <map>
#include <memory>
#include <tuple>

#include "lab/model.hpp"

namespace lab {

template <class R>
using Coeff = std::function<cx<R>(const Heights&)>;

template <class R>
using DiffOp = std::map<std::vector<int>, Coeff<R>>;

inline std::vector<int> shift_add(const std::vector<int>& m1,
                                  const std::vector<int>& m2) {
  std::vector<int> m(m1.size());
  for (size_t i = 0; i < m1.size(); ++i) m[i] = m1[i] + m2[i];
  return m;
}

inline Heights height_add(const Heights& a, const std::vector<int>& m) {
  Heights b(a.size());
  for (size_t i = 0; i < a.size(); ++i) b[i] = a[i] + m[i];
  return b;
}

inline std::vector<int> unit_shift(int n, int nu, int mu) {
  std::vector<int> m(n, 0);
  m[nu] += 1;
  m[mu] -= 1;
  return m;
}

template <class R>
DiffOp<R> op_compose(const DiffOp<R>& A, const DiffOp<R>& B) {
  using Term = std::tuple<Coeff<R>, Coeff<R>, std::vector<int>>;
  std::map<std::vector<int>, std::vector<Term>> parts;
  for (const auto& [m1, c1] : A)
    for (const auto& [m2, c2] : B)
      parts[shift_add(m1, m2)].emplace_back(c1, c2, m1);
  DiffOp<R> out;
  for (auto& [m, terms] : parts) {
    out[m] = [terms](const Heights& a) {
      cx<R> s{};
      for (const auto& [c1, c2, m1] : terms) s += c1(a) * c2(height_add(a, m1));
      return s;
    };
  }
  return out;
}

// max |A - B| over shifts and sample heights, normalized by the larger of the
// two coefficient scales
template <class R>
R op_residual(const DiffOp<R>& A, const DiffOp<R>& B,
              const std::vector<Heights>& samples) {
  std::map<std::vector<int>, int> keys;
  for (const auto& [m, c] : A) keys[m] = 1;
  for (const auto& [m, c] : B) keys[m] = 1;
  R num{}, den{};
  for (const auto& a : samples) {
    for (const auto& [m, tag] : keys) {
      const auto ia = A.find(m);
      const auto ib = B.find(m);
      const cx<R> v1 = ia != A.end() ? ia->second(a) : cx<R>(0);
      const cx<R> v2 = ib != B.end() ? ib->second(a) : cx<R>(0);
      num = std::max(num, cabs(v1 - v2));
      den = std::max({den, cabs(v1), cabs(v2)});
    }
  }
  return den > R(0) ? num / den : num;
}

template <class R>
DiffOp<R> op_scale(const DiffOp<R>& A, cx<R> s) {
  DiffOp<R> out;
  for (const auto& [m, c] : A)
    out[m] = [c, s](const Heights& a) { return s * c(a); };
  return out;
}

template <class R>
R comm_residual(const DiffOp<R>& A, const DiffOp<R>& B,
                const std::vector<Heights>& samples) {
  return op_residual(op_compose(A, B), op_compose(B, A), samples);
}

// assemble sum_{mu nu} Gamma_{nu - mu} with normal-form coefficient
// F(a + nu - mu, mu, nu)
template <class R>
DiffOp<R> op_from_blocks(
    int n, std::function<cx<R>(const Heights&, int, int)> F) {
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> groups;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) groups[unit_shift(n, nu, mu)].emplace_back(mu, nu);
  DiffOp<R> out;
  for (auto& [m, pairs] : groups) {
    out[m] = [F, pairs, m](const Heights& a) {
      const Heights ash = height_add(a, m);
      cx<R> s{};
      for (const auto& [mu, nu] : pairs) s += F(ash, mu, nu);
      return s;
    };
  }
  return out;
}

// open-boundary transfer operator from the scalar blocks, with a shared
// memo so repeated composition/sampling does not recompute theta sums
template <class R>
DiffOp<R> transfer_direct(const Model<R>& md, cx<R> z) {
  auto mdp = std::make_shared<Model<R>>(md);
  auto memo =
      std::make_shared<std::map<std::tuple<Heights, int, int>, cx<R>>>();
  return op_from_blocks<R>(md.n, [mdp, memo, z](const Heights& a, int mu, int nu) {
    const auto key = std::make_tuple(a, mu, nu);
    auto it = memo->find(key);
    if (it != memo->end()) return it->second;
    const cx<R> v = mdp->F1_direct(a, mu, nu, z) * mdp->F2_direct(a, mu, nu, z);
    (*memo)[key] = v;
    return v;
  });
}

// the same operator assembled as tr[ Kt(z) f(a+nu) K(z) g(a+nu-mu) ]
template <class R>
DiffOp<R> transfer_trace(const Model<R>& md, cx<R> z) {
  auto mdp = std::make_shared<Model<R>>(md);
  auto Ktm = std::make_shared<Mat<R>>(md.Kt(z));
  auto Km = std::make_shared<Mat<R>>(md.K(z));
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> groups;
  for (int mu = 0; mu < md.n; ++mu)
    for (int nu = 0; nu < md.n; ++nu)
      groups[unit_shift(md.n, nu, mu)].emplace_back(mu, nu);
  DiffOp<R> out;
  for (auto& [m, pairs] : groups) {
    out[m] = [mdp, Ktm, Km, pairs, z, m](const Heights& a) {
      cx<R> s{};
      for (const auto& [mu, nu] : pairs) {
        const Mat<R> fm = mdp->f_op(shifted(a, nu, +1), nu, z);
        const Mat<R> gm = mdp->g_op(height_add(a, m), mu, -z);
        s += ((*Ktm) * fm * (*Km) * gm).trace();
      }
      return s;
    };
  }
  return out;
}

// ---- matrix-valued difference operators (lattice L operators) ----

template <class R>
using MatCoeff = std::function<Mat<R>(const Heights&)>;

template <class R>
using MatOp = std::map<std::vector<int>, MatCoeff<R>>;

template <class R>
MatOp<R> build_L(const Model<R>& md, cx<R> z) {
  auto mdp = std::make_shared<Model<R>>(md);
  MatOp<R> out;
  for (int mu = 0; mu < md.n; ++mu) {
    std::vector<int> m(md.n, 0);
    m[mu] = 1;
    out[m] = [mdp, mu, z](const Heights& a) {
      return mdp->f_op(shifted(a, mu, +1), mu, z);
    };
  }
  return out;
}

template <class R>
MatOp<R> build_Linv(const Model<R>& md, cx<R> z) {
  auto mdp = std::make_shared<Model<R>>(md);
  MatOp<R> out;
  for (int mu = 0; mu < md.n; ++mu) {
    std::vector<int> m(md.n, 0);
    m[mu] = -1;
    out[m] = [mdp, mu, z](const Heights& a) {
      return mdp->g_op(shifted(a, mu, -1), mu, z);
    };
  }
  return out;
}

// plain matrix-product composition, for L Linv = Id
template <class R>
MatOp<R> matop_compose(const MatOp<R>& A, const MatOp<R>& B) {
  using Term = std::tuple<MatCoeff<R>, MatCoeff<R>, std::vector<int>>;
  std::map<std::vector<int>, std::vector<Term>> parts;
  for (const auto& [m1, c1] : A)
    for (const auto& [m2, c2] : B)
      parts[shift_add(m1, m2)].emplace_back(c1, c2, m1);
  MatOp<R> out;
  for (auto& [m, terms] : parts) {
    out[m] = [terms](const Heights& a) {
      Mat<R> s;
      bool first = true;
      for (const auto& [c1, c2, m1] : terms) {
        const Mat<R> v = c1(a) * c2(height_add(a, m1));
        if (first) { s = v; first = false; } else { s = s + v; }
      }
      return s;
    };
  }
  return out;
}

// two-slot composition in a tensor square: entry ((ik),(jl)) of the result is
// the operator product of slot-1 and slot-2 entries.  With `first_in_slot1`
// the operator applied first carries tensor slot 1, i.e. the coefficient is
// kron(A[m1](a), B[m2](a+m1)); otherwise the first-applied operator sits in
// slot 2 and the roles in the Kronecker product swap.
template <class R>
MatOp<R> matop_kron_compose(const MatOp<R>& A, const MatOp<R>& B,
                            bool first_in_slot1) {
  using Term = std::tuple<MatCoeff<R>, MatCoeff<R>, std::vector<int>>;
  std::map<std::vector<int>, std::vector<Term>> parts;
  for (const auto& [m1, c1] : A)
    for (const auto& [m2, c2] : B)
      parts[shift_add(m1, m2)].emplace_back(c1, c2, m1);
  MatOp<R> out;
  for (auto& [m, terms] : parts) {
    out[m] = [terms, first_in_slot1](const Heights& a) {
      Mat<R> s;
      bool first = true;
      for (const auto& [c1, c2, m1] : terms) {
        const Mat<R> va = c1(a), vb = c2(height_add(a, m1));
        const Mat<R> v = first_in_slot1 ? va.kron(vb) : vb.kron(va);
        if (first) { s = v; first = false; } else { s = s + v; }
      }
      return s;
    };
  }
  return out;
}

template <class R>
MatOp<R> matop_lmul(const Mat<R>& M, const MatOp<R>& A) {
  MatOp<R> out;
  for (const auto& [m, c] : A)
    out[m] = [M, c](const Heights& a) { return M * c(a); };
  return out;
}

template <class R>
MatOp<R> matop_rmul(const MatOp<R>& A, const Mat<R>& M) {
  MatOp<R> out;
  for (const auto& [m, c] : A)
    out[m] = [M, c](const Heights& a) { return c(a) * M; };
  return out;
}

template <class R>
R matop_residual(const MatOp<R>& A, const MatOp<R>& B,
                 const std::vector<Heights>& samples) {
  std::map<std::vector<int>, int> keys;
  for (const auto& [m, c] : A) keys[m] = 1;
  for (const auto& [m, c] : B) keys[m] = 1;
  R num{}, den{};
  for (const auto& a : samples) {
    for (const auto& [m, tag] : keys) {
      const auto ia = A.find(m);
      const auto ib = B.find(m);
      Mat<R> va, vb;
      if (ia != A.end()) va = ia->second(a);
      if (ib != B.end()) vb = ib->second(a);
      if (va.rows == 0 && vb.rows == 0) continue;
      if (va.rows == 0) va = Mat<R>(vb.rows, vb.cols);
      if (vb.rows == 0) vb = Mat<R>(va.rows, va.cols);
      num = std::max(num, (va - vb).max_abs());
      den = std::max({den, va.max_abs(), vb.max_abs()});
    }
  }
  return den > R(0) ? num / den : num;
}

}  // namespace lab
