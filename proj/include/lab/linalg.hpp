#pragma once
// Dense complex matrices sized for this problem (n <= 5, so at most n^2 x n^2
// = 25 x 25 in the three-site Yang-Baxter checks).  Row-major storage,
// Gauss-Jordan inversion with partial pivoting; templated on the real type.

#include <cassert>
#include <stdexcept>
#include <vector>

#include "lab/scalar.hpp"

namespace lab {

template <class R>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<cx<R>> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  cx<R>& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const cx<R>& operator()(int i, int j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }

  static Mat id(int k) {
    Mat m(k, k);
    for (int i = 0; i < k; ++i) m(i, i) = cx<R>(1);
    return m;
  }

  Mat operator+(const Mat& b) const {
    assert(rows == b.rows && cols == b.cols);
    Mat c = *this;
    for (size_t i = 0; i < a.size(); ++i) c.a[i] += b.a[i];
    return c;
  }

  Mat operator-(const Mat& b) const {
    assert(rows == b.rows && cols == b.cols);
    Mat c = *this;
    for (size_t i = 0; i < a.size(); ++i) c.a[i] -= b.a[i];
    return c;
  }

  Mat operator*(const Mat& b) const {
    assert(cols == b.rows);
    Mat c(rows, b.cols);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        const cx<R> aik = (*this)(i, k);
        if (aik == cx<R>(0)) continue;
        for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  Mat operator*(const cx<R>& s) const {
    Mat c = *this;
    for (auto& v : c.a) v *= s;
    return c;
  }

  Mat kron(const Mat& b) const {
    Mat c(rows * b.rows, cols * b.cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        const cx<R> s = (*this)(i, j);
        if (s == cx<R>(0)) continue;
        for (int k = 0; k < b.rows; ++k)
          for (int l = 0; l < b.cols; ++l)
            c(i * b.rows + k, j * b.cols + l) = s * b(k, l);
      }
    return c;
  }

  cx<R> trace() const {
    assert(rows == cols);
    cx<R> t{};
    for (int i = 0; i < rows; ++i) t += (*this)(i, i);
    return t;
  }

  R max_abs() const {
    R m{};
    for (const auto& v : a) {
      R w = cabs(v);
      if (w > m) m = w;
    }
    return m;
  }

  Mat pow(int k) const {
    assert(rows == cols && k >= 0);
    Mat out = id(rows), base = *this;
    while (k > 0) {
      if (k & 1) out = out * base;
      base = base * base;
      k >>= 1;
    }
    return out;
  }

  Mat inverse() const {
    assert(rows == cols);
    const int n = rows;
    Mat aug = *this, inv = id(n);
    for (int col = 0; col < n; ++col) {
      int piv = col;
      R best = cabs2(aug(col, col));
      for (int r = col + 1; r < n; ++r) {
        R w = cabs2(aug(r, col));
        if (w > best) { best = w; piv = r; }
      }
      if (!(best > R(0))) throw std::runtime_error("singular matrix in inverse()");
      if (piv != col) {
        for (int j = 0; j < n; ++j) {
          std::swap(aug(col, j), aug(piv, j));
          std::swap(inv(col, j), inv(piv, j));
        }
      }
      const cx<R> d = aug(col, col);
      for (int j = 0; j < n; ++j) { aug(col, j) /= d; inv(col, j) /= d; }
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const cx<R> f = aug(r, col);
        if (f == cx<R>(0)) continue;
        for (int j = 0; j < n; ++j) {
          aug(r, j) -= f * aug(col, j);
          inv(r, j) -= f * inv(col, j);
        }
      }
    }
    return inv;
  }

  cx<R> det() const {
    assert(rows == cols);
    const int n = rows;
    Mat lu = *this;
    cx<R> d(1);
    for (int col = 0; col < n; ++col) {
      int piv = col;
      R best = cabs2(lu(col, col));
      for (int r = col + 1; r < n; ++r) {
        R w = cabs2(lu(r, col));
        if (w > best) { best = w; piv = r; }
      }
      if (!(best > R(0))) return cx<R>(0);
      if (piv != col) {
        for (int j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
        d = -d;
      }
      d *= lu(col, col);
      for (int r = col + 1; r < n; ++r) {
        const cx<R> f = lu(r, col) / lu(col, col);
        if (f == cx<R>(0)) continue;
        for (int j = col; j < n; ++j) lu(r, j) -= f * lu(col, j);
      }
    }
    return d;
  }

  // transpose in the second tensor slot of an (nloc*nloc) square matrix:
  // out[(i,l),(j,k)] = in[(i,k),(j,l)]
  Mat partial_transpose_2(int nloc) const {
    assert(rows == nloc * nloc && cols == nloc * nloc);
    Mat out(rows, cols);
    for (int i = 0; i < nloc; ++i)
      for (int k = 0; k < nloc; ++k)
        for (int j = 0; j < nloc; ++j)
          for (int l = 0; l < nloc; ++l)
            out(i * nloc + l, j * nloc + k) = (*this)(i * nloc + k, j * nloc + l);
    return out;
  }
};

template <class R>
Mat<R> operator*(const cx<R>& s, const Mat<R>& m) { return m * s; }

template <class R> using Vec = std::vector<cx<R>>;

template <class R>
Vec<R> matvec(const Mat<R>& m, const Vec<R>& v) {
  assert(m.cols == static_cast<int>(v.size()));
  Vec<R> out(m.rows);
  for (int i = 0; i < m.rows; ++i) {
    cx<R> s{};
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

template <class R>
Vec<R> vecmat(const Vec<R>& v, const Mat<R>& m) {
  assert(m.rows == static_cast<int>(v.size()));
  Vec<R> out(m.cols);
  for (int j = 0; j < m.cols; ++j) {
    cx<R> s{};
    for (int i = 0; i < m.rows; ++i) s += v[i] * m(i, j);
    out[j] = s;
  }
  return out;
}

template <class R>
cx<R> dot(const Vec<R>& u, const Vec<R>& v) {
  assert(u.size() == v.size());
  cx<R> s{};
  for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

template <class R>
Mat<R> outer(const Vec<R>& u, const Vec<R>& v) {
  Mat<R> m(static_cast<int>(u.size()), static_cast<int>(v.size()));
  for (size_t i = 0; i < u.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = u[i] * v[j];
  return m;
}

template <class R>
Vec<R> kron_vec(const Vec<R>& u, const Vec<R>& v) {
  Vec<R> out(u.size() * v.size());
  for (size_t i = 0; i < u.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i * v.size() + j] = u[i] * v[j];
  return out;
}

// swap-of-factors permutation on C^n (x) C^n
template <class R>
Mat<R> perm_swap(int n) {
  Mat<R> p(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i * n + j, j * n + i) = cx<R>(1);
  return p;
}

}  // namespace lab
