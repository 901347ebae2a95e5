#pragma once

// Bit-packed N x N matrices over F2, one machine word for the whole matrix:
// row r occupies bits [r*N, r*N + N), column c is bit c of the row.

#include <bit>
#include <cstdint>
#include <functional>
#include <type_traits>

#include "oddform/matrix.hpp"

namespace oddform {

template <int N>
struct PackedF2 {
  static_assert(N >= 1 && N * N <= 128);
  using word = std::conditional_t<(N * N <= 64), std::uint64_t, unsigned __int128>;
  static constexpr word kRowMask = (word{1} << N) - 1;

  word bits = 0;

  static constexpr PackedF2 identity() {
    PackedF2 m;
    for (int r = 0; r < N; ++r) m.bits |= word{1} << (r * N + r);
    return m;
  }
  constexpr word row(int r) const { return (bits >> (r * N)) & kRowMask; }
  constexpr bool at(int r, int c) const { return (bits >> (r * N + c)) & 1; }
  constexpr void set(int r, int c, bool v) {
    const word b = word{1} << (r * N + c);
    bits = v ? (bits | b) : (bits & ~b);
  }

  friend constexpr bool operator==(PackedF2 a, PackedF2 b) { return a.bits == b.bits; }

  friend PackedF2 operator*(PackedF2 a, PackedF2 b) {
    word brow[N];
    for (int k = 0; k < N; ++k) brow[k] = b.row(k);
    PackedF2 out;
    for (int r = 0; r < N; ++r) {
      auto ar = static_cast<std::uint32_t>(a.row(r));
      word acc = 0;
      while (ar) {
        const int k = std::countr_zero(ar);
        acc ^= brow[k];
        ar &= ar - 1;
      }
      out.bits |= acc << (r * N);
    }
    return out;
  }

  /// Gauss-Jordan inverse; `ok` is cleared when singular.
  PackedF2 inverse(bool* ok = nullptr) const {
    word a[N], e[N];
    for (int r = 0; r < N; ++r) {
      a[r] = row(r);
      e[r] = word{1} << r;
    }
    for (int col = 0; col < N; ++col) {
      int piv = -1;
      for (int r = col; r < N; ++r)
        if ((a[r] >> col) & 1) {
          piv = r;
          break;
        }
      if (piv < 0) {
        if (ok) *ok = false;
        return {};
      }
      std::swap(a[piv], a[col]);
      std::swap(e[piv], e[col]);
      for (int r = 0; r < N; ++r)
        if (r != col && ((a[r] >> col) & 1)) {
          a[r] ^= a[col];
          e[r] ^= e[col];
        }
    }
    PackedF2 out;
    for (int r = 0; r < N; ++r) out.bits |= e[r] << (r * N);
    if (ok) *ok = true;
    return out;
  }

  std::size_t hash() const noexcept {
    if constexpr (std::is_same_v<word, std::uint64_t>) {
      return static_cast<std::size_t>(mix(bits));
    } else {
      return static_cast<std::size_t>(mix(static_cast<std::uint64_t>(bits) ^
                                          mix(static_cast<std::uint64_t>(bits >> 64))));
    }
  }

 private:
  static constexpr std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ull;
    return x ^ (x >> 33);
  }
};

/// Dense matrix over a ring whose elements are exactly {0, 1} (|R| = 2).
template <int N>
PackedF2<N> pack(const HermitianCtx& c, const Mat& m) {
  if (c.size() != 2 || m.dim() != N) throw Error(Errc::bad_arguments, "pack needs |R| = 2 and matching size");
  PackedF2<N> p;
  for (int r = 0; r < N; ++r)
    for (int q = 0; q < N; ++q) p.set(r, q, m.raw(r, q) == c.one());
  return p;
}

template <int N>
Mat unpack(const HermitianCtx& c, PackedF2<N> p) {
  Mat m = zero_mat(c, (N - 1) / 2);
  for (int r = 0; r < N; ++r)
    for (int q = 0; q < N; ++q) m.raw(r, q) = p.at(r, q) ? c.one() : c.zero();
  return m;
}

}  // namespace oddform

template <int N>
struct std::hash<oddform::PackedF2<N>> {
  std::size_t operator()(const oddform::PackedF2<N>& m) const noexcept { return m.hash(); }
};
