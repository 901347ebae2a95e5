#pragma once

// Theta-indexed vectors and (2n+1)x(2n+1) matrices over a HermitianCtx.
//
// Index set Theta = {1..n, 0, -n..-1} in that order; position of i is
//   i-1 for i > 0,  n for i = 0,  2n+1+i for i < 0.

#include <cstddef>
#include <functional>
#include <vector>

#include "oddform/ring.hpp"

namespace oddform {

inline int theta_pos(int n, int i) { return i > 0 ? i - 1 : (i == 0 ? n : 2 * n + 1 + i); }
inline int theta_index(int n, int p) { return p < n ? p + 1 : (p == n ? 0 : p - 2 * n - 1); }
inline int eps(int i) { return i > 0 ? 1 : -1; }

/// Theta in its total order 1 < ... < n < 0 < -n < ... < -1.
inline std::vector<int> theta_all(int n) {
  std::vector<int> out;
  for (int p = 0; p < 2 * n + 1; ++p) out.push_back(theta_index(n, p));
  return out;
}

/// Theta_hb = Theta \ {0}, in order.
inline std::vector<int> theta_hb(int n) {
  std::vector<int> out;
  for (int i : theta_all(n))
    if (i != 0) out.push_back(i);
  return out;
}

inline bool in_theta(int n, int i) { return i >= -n && i <= n; }

/// Column vector (or row, for polarity images) in Theta-position order.
struct Vec {
  int n = 0;
  std::vector<Elem> e;

  Elem operator()(int i) const { return e[theta_pos(n, i)]; }
  Elem& operator()(int i) { return e[theta_pos(n, i)]; }
  friend bool operator==(const Vec&, const Vec&) = default;
};

struct Mat {
  int n = 0;
  std::vector<Elem> e;  // row-major by position

  int dim() const { return 2 * n + 1; }
  Elem operator()(int i, int j) const { return e[theta_pos(n, i) * dim() + theta_pos(n, j)]; }
  Elem& operator()(int i, int j) { return e[theta_pos(n, i) * dim() + theta_pos(n, j)]; }
  Elem raw(int p, int q) const { return e[p * dim() + q]; }
  Elem& raw(int p, int q) { return e[p * dim() + q]; }
  friend bool operator==(const Mat&, const Mat&) = default;
};

inline Vec zero_vec(const HermitianCtx& c, int n) { return {n, std::vector<Elem>(2 * n + 1, c.zero())}; }

inline Vec basis_vec(const HermitianCtx& c, int n, int i) {
  Vec v = zero_vec(c, n);
  v(i) = c.one();
  return v;
}

inline Mat zero_mat(const HermitianCtx& c, int n) {
  return {n, std::vector<Elem>((2 * n + 1) * (2 * n + 1), c.zero())};
}

inline Mat identity(const HermitianCtx& c, int n) {
  Mat m = zero_mat(c, n);
  for (int p = 0; p < m.dim(); ++p) m.raw(p, p) = c.one();
  return m;
}

inline Vec vadd(const HermitianCtx& c, const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t k = 0; k < r.e.size(); ++k) r.e[k] = c.add(a.e[k], b.e[k]);
  return r;
}

inline Vec vneg(const HermitianCtx& c, const Vec& a) {
  Vec r = a;
  for (auto& x : r.e) x = c.neg(x);
  return r;
}

/// u * x (right scalar multiplication)
inline Vec vscale(const HermitianCtx& c, const Vec& a, Elem x) {
  Vec r = a;
  for (auto& y : r.e) y = c.mul(y, x);
  return r;
}

inline Mat madd(const HermitianCtx& c, const Mat& a, const Mat& b) {
  Mat r = a;
  for (std::size_t k = 0; k < r.e.size(); ++k) r.e[k] = c.add(a.e[k], b.e[k]);
  return r;
}

inline Mat msub(const HermitianCtx& c, const Mat& a, const Mat& b) {
  Mat r = a;
  for (std::size_t k = 0; k < r.e.size(); ++k) r.e[k] = c.sub(a.e[k], b.e[k]);
  return r;
}

inline Mat mscale(const HermitianCtx& c, Elem x, const Mat& a) {
  Mat r = a;
  for (auto& y : r.e) y = c.mul(x, y);
  return r;
}

inline Mat mul(const HermitianCtx& c, const Mat& a, const Mat& b) {
  const int d = a.dim();
  Mat r = zero_mat(c, a.n);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const Elem aik = a.raw(i, k);
      if (aik == c.zero()) continue;
      for (int j = 0; j < d; ++j) r.raw(i, j) = c.add(r.raw(i, j), c.mul(aik, b.raw(k, j)));
    }
  return r;
}

template <class... Ms>
Mat mul(const HermitianCtx& c, const Mat& a, const Mat& b, const Ms&... rest) {
  return mul(c, mul(c, a, b), rest...);
}

inline Vec apply(const HermitianCtx& c, const Mat& a, const Vec& u) {
  const int d = a.dim();
  Vec r = zero_vec(c, a.n);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) r.e[i] = c.add(r.e[i], c.mul(a.raw(i, k), u.e[k]));
  return r;
}

/// Row vector times matrix.
inline Vec row_apply(const HermitianCtx& c, const Vec& w, const Mat& a) {
  const int d = a.dim();
  Vec r = zero_vec(c, a.n);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) r.e[j] = c.add(r.e[j], c.mul(w.e[k], a.raw(k, j)));
  return r;
}

/// Column vector times row vector.
inline Mat outer(const HermitianCtx& c, const Vec& col, const Vec& row) {
  Mat r = zero_mat(c, col.n);
  const int d = r.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r.raw(i, j) = c.mul(col.e[i], row.e[j]);
  return r;
}

inline Vec column(const Mat& a, int j) {
  Vec v{a.n, std::vector<Elem>(a.dim())};
  for (int p = 0; p < a.dim(); ++p) v.e[p] = a.raw(p, theta_pos(a.n, j));
  return v;
}

inline Vec row(const Mat& a, int i) {
  Vec v{a.n, std::vector<Elem>(a.dim())};
  for (int q = 0; q < a.dim(); ++q) v.e[q] = a.raw(theta_pos(a.n, i), q);
  return v;
}

/// e^{ij}
inline Mat unit_mat(const HermitianCtx& c, int n, int i, int j) {
  Mat m = zero_mat(c, n);
  m(i, j) = c.one();
  return m;
}

/// Characteristic polynomial coefficients [1, c_1, ..., c_d] of det(tI - A),
/// computed division-free (Berkowitz).
inline std::vector<Elem> charpoly(const HermitianCtx& c, const std::vector<Elem>& a, int d) {
  if (d == 0) return {c.one()};
  if (d == 1) return {c.one(), c.neg(a[0])};
  const Elem a00 = a[0];
  // R = row 0 without (0,0), C = column 0 without (0,0), S = the trailing block
  const int s = d - 1;
  std::vector<Elem> R(s), C(s), S(s * s);
  for (int j = 0; j < s; ++j) R[j] = a[j + 1];
  for (int i = 0; i < s; ++i) C[i] = a[(i + 1) * d];
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) S[i * s + j] = a[(i + 1) * d + j + 1];

  std::vector<Elem> diags{c.one(), c.neg(a00)};
  std::vector<Elem> v = C;
  for (int k = 0; k < s; ++k) {
    Elem dot = c.zero();
    for (int j = 0; j < s; ++j) dot = c.add(dot, c.mul(R[j], v[j]));
    diags.push_back(c.neg(dot));
    std::vector<Elem> next(s, c.zero());
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) next[i] = c.add(next[i], c.mul(S[i * s + j], v[j]));
    v = std::move(next);
  }
  const std::vector<Elem> sub = charpoly(c, S, s);
  std::vector<Elem> out(d + 1, c.zero());
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= s && j <= i; ++j)
      out[i] = c.add(out[i], c.mul(diags[i - j], sub[j]));
  return out;
}

inline Elem det(const HermitianCtx& c, const Mat& a) {
  const auto cp = charpoly(c, a.e, a.dim());
  Elem d = cp.back();
  return a.dim() % 2 == 0 ? d : c.neg(d);
}

/// Exact inverse: adjugate times det^{-1}, the adjugate obtained from Cayley-Hamilton.
inline Mat minv(const HermitianCtx& c, const Mat& a) {
  const int d = a.dim();
  const auto cp = charpoly(c, a.e, d);
  const Elem cd = cp[d];
  if (!c.is_unit(cd)) throw Error(Errc::not_invertible, "determinant is not a unit");
  // A (A^{d-1} + c_1 A^{d-2} + ... + c_{d-1}) = -c_d I
  Mat p = identity(c, a.n);
  for (int k = 1; k < d; ++k) {
    p = mul(c, p, a);
    for (int i = 0; i < d; ++i) p.raw(i, i) = c.add(p.raw(i, i), cp[k]);
  }
  return mscale(c, c.neg(c.inverse(cd)), p);
}

/// [g, h] = g h g^{-1} h^{-1}
inline Mat commutator(const HermitianCtx& c, const Mat& g, const Mat& h) {
  return mul(c, g, h, minv(c, g), minv(c, h));
}

inline std::size_t hash_mat(const Mat& m) {
  std::size_t h = 1469598103934665603ull;
  for (Elem x : m.e) {
    h ^= x.v;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace oddform

template <>
struct std::hash<oddform::Mat> {
  std::size_t operator()(const oddform::Mat& m) const noexcept { return oddform::hash_mat(m); }
};
