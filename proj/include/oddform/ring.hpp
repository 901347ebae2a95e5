#pragma once

// Finite commutative rings with involution, symmetry lambda and element mu.
//
// Every ring is realised by dense operation tables indexed by a canonical
// element number, so all axioms can be checked exhaustively at construction.

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "oddform/error.hpp"

namespace oddform {

/// Canonical ring element: an index into the context's tables.
struct Elem {
  std::uint16_t v = 0;
  friend constexpr auto operator<=>(const Elem&, const Elem&) = default;
};

enum class RingKind { modular, gaussian_modular, table };
enum class InvolutionKind { identity, gaussian_conjugation, table };

struct RingSpec {
  RingKind kind = RingKind::modular;
  int m = 2;  // modulus for the modular kinds, table size otherwise
  // table kind: element k is written "#k"
  std::vector<std::vector<int>> add_table;
  std::vector<std::vector<int>> mul_table;
  int one = 1;
  InvolutionKind involution = InvolutionKind::identity;
  std::vector<int> bar_table;
  std::string lambda = "1";
  std::string mu = "1";
  int n = 3;

  friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

enum class Validation { full, ring_only };

inline constexpr int kMaxRingSize = 64;

class HermitianCtx {
 public:
  std::size_t size() const noexcept { return size_; }
  int n() const noexcept { return spec_.n; }
  const RingSpec& spec() const noexcept { return spec_; }

  Elem zero() const noexcept { return zero_; }
  Elem one() const noexcept { return one_; }
  Elem lambda() const noexcept { return lambda_; }
  Elem mu() const noexcept { return mu_; }

  Elem add(Elem a, Elem b) const { check(a, b); return Elem{add_[idx(a, b)]}; }
  Elem mul(Elem a, Elem b) const { check(a, b); return Elem{mul_[idx(a, b)]}; }
  Elem neg(Elem a) const { check(a); return Elem{neg_[a.v]}; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem bar(Elem a) const { check(a); return Elem{bar_[a.v]}; }

  Elem mul(Elem a, Elem b, Elem c) const { return mul(mul(a, b), c); }
  Elem mul(Elem a, Elem b, Elem c, Elem d) const { return mul(mul(mul(a, b), c), d); }

  bool is_unit(Elem a) const { check(a); return inv_[a.v] >= 0; }
  Elem inverse(Elem a) const {
    check(a);
    if (inv_[a.v] < 0) throw Error(Errc::not_invertible, format(a) + " is not a unit");
    return Elem{static_cast<std::uint16_t>(inv_[a.v])};
  }

  /// lambda^e for the exponents produced by epsilon arithmetic, e in [-2, 2].
  Elem lambda_power(int e) const {
    switch (e) {
      case 0: return one_;
      case 1: return lambda_;
      case -1: return bar(lambda_);
      case 2: return mul(lambda_, lambda_);
      case -2: return mul(bar(lambda_), bar(lambda_));
      default:
        throw Error(Errc::unsupported_exponent, "lambda exponent " + std::to_string(e));
    }
  }

  /// mu for sign +1, bar(mu) for the inverse Hermitian ring (sign -1).
  Elem mu_k(int k) const { return k > 0 ? mu_ : bar(mu_); }

  /// Elements in canonical order.
  std::vector<Elem> elements() const {
    std::vector<Elem> out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = Elem{static_cast<std::uint16_t>(i)};
    return out;
  }

  Elem from_int(long long k) const {
    Elem acc = zero_;
    Elem step = k >= 0 ? one_ : neg(one_);
    for (long long i = 0, e = k >= 0 ? k : -k; i < e; ++i) acc = add(acc, step);
    return acc;
  }

  Elem parse(std::string_view text) const;
  std::string format(Elem a) const;

  bool contains(Elem a) const noexcept { return a.v < size_; }

 private:
  friend HermitianCtx make_ctx(const RingSpec&, Validation);

  std::size_t idx(Elem a, Elem b) const noexcept { return a.v * size_ + b.v; }
  void check(Elem a) const {
    if (a.v >= size_) throw Error(Errc::context_mismatch, "element index out of range");
  }
  void check(Elem a, Elem b) const { check(a); check(b); }

  RingSpec spec_;
  std::size_t size_ = 0;
  std::vector<std::uint16_t> add_, mul_, neg_, bar_;
  std::vector<int> inv_;
  Elem zero_, one_, lambda_, mu_;
};

namespace detail {

inline long long parse_int(std::string_view s) {
  if (s.empty()) throw Error(Errc::malformed_spec, "empty integer");
  long long sign = 1;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    sign = s[0] == '-' ? -1 : 1;
    i = 1;
  }
  if (i == s.size()) throw Error(Errc::malformed_spec, "bad integer '" + std::string(s) + "'");
  long long v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw Error(Errc::malformed_spec, "bad integer '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
    if (v > 1'000'000'000) throw Error(Errc::malformed_spec, "integer too large");
  }
  return sign * v;
}

inline long long mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

// Parses a sum of terms "a", "b*w", "bw", "w" with signs; returns (a, b).
inline std::pair<long long, long long> parse_gaussian(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw Error(Errc::malformed_spec, "empty gaussian element");
  long long re = 0, im = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i + 1;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    long long sign = 1;
    if (term[0] == '+' || term[0] == '-') {
      sign = term[0] == '-' ? -1 : 1;
      term = term.substr(1);
    }
    if (term.empty()) throw Error(Errc::malformed_spec, "bad gaussian element '" + s + "'");
    if (term.back() == 'w') {
      term.pop_back();
      if (!term.empty() && term.back() == '*') term.pop_back();
      im += sign * (term.empty() ? 1 : parse_int(term));
    } else {
      re += sign * parse_int(term);
    }
    i = j;
  }
  return {re, im};
}

}  // namespace detail

inline Elem HermitianCtx::parse(std::string_view text) const {
  const auto m = static_cast<long long>(spec_.m);
  switch (spec_.kind) {
    case RingKind::modular:
      return Elem{static_cast<std::uint16_t>(detail::mod(detail::parse_int(text), m))};
    case RingKind::gaussian_modular: {
      auto [re, im] = detail::parse_gaussian(text);
      return Elem{static_cast<std::uint16_t>(detail::mod(re, m) * m + detail::mod(im, m))};
    }
    case RingKind::table: {
      if (text.size() < 2 || text[0] != '#')
        throw Error(Errc::malformed_spec, "table element must be '#k': " + std::string(text));
      long long k = detail::parse_int(text.substr(1));
      if (k < 0 || static_cast<std::size_t>(k) >= size_)
        throw Error(Errc::malformed_spec, "table element out of range: " + std::string(text));
      return Elem{static_cast<std::uint16_t>(k)};
    }
  }
  throw Error(Errc::malformed_spec, "unknown ring kind");
}

inline std::string HermitianCtx::format(Elem a) const {
  check(a);
  switch (spec_.kind) {
    case RingKind::modular: return std::to_string(a.v);
    case RingKind::gaussian_modular:
      return std::to_string(a.v / spec_.m) + "+" + std::to_string(a.v % spec_.m) + "*w";
    case RingKind::table: return "#" + std::to_string(a.v);
  }
  return "?";
}

/// Builds and exhaustively validates a Hermitian ring context.
inline HermitianCtx make_ctx(const RingSpec& spec, Validation validation = Validation::full) {
  HermitianCtx c;
  c.spec_ = spec;
  if (spec.n < 3) throw Error(Errc::malformed_spec, "n must be at least 3");

  std::size_t N = 0;
  auto fill = [&](auto&& add_fn, auto&& mul_fn) {
    c.add_.resize(N * N);
    c.mul_.resize(N * N);
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b) {
        c.add_[a * N + b] = static_cast<std::uint16_t>(add_fn(a, b));
        c.mul_[a * N + b] = static_cast<std::uint16_t>(mul_fn(a, b));
      }
  };

  switch (spec.kind) {
    case RingKind::modular: {
      if (spec.m < 2 || spec.m > kMaxRingSize)
        throw Error(Errc::malformed_spec, "modulus out of range");
      const std::size_t m = spec.m;
      N = m;
      fill([m](std::size_t a, std::size_t b) { return (a + b) % m; },
           [m](std::size_t a, std::size_t b) { return (a * b) % m; });
      c.zero_ = Elem{0};
      c.one_ = Elem{1};
      break;
    }
    case RingKind::gaussian_modular: {
      if (spec.m < 2 || spec.m * spec.m > kMaxRingSize)
        throw Error(Errc::malformed_spec, "gaussian modulus out of range");
      const std::size_t m = spec.m;
      N = m * m;
      // element a*m + b represents a + b*w with w^2 = -1
      fill(
          [m](std::size_t x, std::size_t y) {
            return ((x / m + y / m) % m) * m + (x % m + y % m) % m;
          },
          [m](std::size_t x, std::size_t y) {
            std::size_t a = x / m, b = x % m, cc = y / m, d = y % m;
            std::size_t re = (a * cc + (m - (b * d) % m)) % m;
            std::size_t im = (a * d + b * cc) % m;
            return re * m + im;
          });
      c.zero_ = Elem{0};
      c.one_ = Elem{static_cast<std::uint16_t>(m)};
      break;
    }
    case RingKind::table: {
      N = spec.add_table.size();
      if (N < 2 || N > static_cast<std::size_t>(kMaxRingSize) || spec.mul_table.size() != N)
        throw Error(Errc::malformed_spec, "table ring size out of range");
      for (std::size_t a = 0; a < N; ++a) {
        if (spec.add_table[a].size() != N || spec.mul_table[a].size() != N)
          throw Error(Errc::malformed_spec, "tables must be square");
        for (std::size_t b = 0; b < N; ++b) {
          int s = spec.add_table[a][b], p = spec.mul_table[a][b];
          if (s < 0 || p < 0 || static_cast<std::size_t>(s) >= N ||
              static_cast<std::size_t>(p) >= N)
            throw Error(Errc::malformed_spec, "table entry out of range");
        }
      }
      fill([&](std::size_t a, std::size_t b) { return spec.add_table[a][b]; },
           [&](std::size_t a, std::size_t b) { return spec.mul_table[a][b]; });
      if (spec.one < 0 || static_cast<std::size_t>(spec.one) >= N)
        throw Error(Errc::malformed_spec, "unit out of range");
      c.one_ = Elem{static_cast<std::uint16_t>(spec.one)};
      bool found = false;
      for (std::size_t z = 0; z < N && !found; ++z) {
        bool ok = true;
        for (std::size_t a = 0; a < N && ok; ++a) ok = c.add_[z * N + a] == a;
        if (ok) {
          c.zero_ = Elem{static_cast<std::uint16_t>(z)};
          found = true;
        }
      }
      if (!found) throw Error(Errc::malformed_spec, "addition has no identity");
      break;
    }
  }
  c.size_ = N;

  // ring axioms
  const auto& A = c.add_;
  const auto& M = c.mul_;
  c.neg_.assign(N, 0);
  for (std::size_t a = 0; a < N; ++a) {
    bool has_neg = false;
    for (std::size_t b = 0; b < N; ++b) {
      if (A[a * N + b] != A[b * N + a]) throw Error(Errc::malformed_spec, "addition not commutative");
      if (M[a * N + b] != M[b * N + a])
        throw Error(Errc::malformed_spec, "multiplication not commutative");
      if (A[a * N + b] == c.zero_.v && !has_neg) {
        c.neg_[a] = static_cast<std::uint16_t>(b);
        has_neg = true;
      }
      for (std::size_t d = 0; d < N; ++d) {
        if (A[A[a * N + b] * N + d] != A[a * N + A[b * N + d]])
          throw Error(Errc::malformed_spec, "addition not associative");
        if (M[M[a * N + b] * N + d] != M[a * N + M[b * N + d]])
          throw Error(Errc::malformed_spec, "multiplication not associative");
        if (M[a * N + A[b * N + d]] != A[M[a * N + b] * N + M[a * N + d]])
          throw Error(Errc::malformed_spec, "multiplication not distributive");
      }
    }
    if (!has_neg) throw Error(Errc::malformed_spec, "element without additive inverse");
    if (M[c.one_.v * N + a] != a) throw Error(Errc::malformed_spec, "unit is not neutral");
  }
  if (c.one_ == c.zero_) throw Error(Errc::malformed_spec, "ring must satisfy 1 != 0");

  c.inv_.assign(N, -1);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      if (M[a * N + b] == c.one_.v) c.inv_[a] = static_cast<int>(b);

  // involution
  c.bar_.assign(N, 0);
  switch (spec.involution) {
    case InvolutionKind::identity:
      for (std::size_t a = 0; a < N; ++a) c.bar_[a] = static_cast<std::uint16_t>(a);
      break;
    case InvolutionKind::gaussian_conjugation: {
      if (spec.kind != RingKind::gaussian_modular)
        throw Error(Errc::malformed_spec, "gaussian conjugation needs a gaussian ring");
      const std::size_t m = spec.m;
      for (std::size_t a = 0; a < N; ++a)
        c.bar_[a] = static_cast<std::uint16_t>((a / m) * m + (m - a % m) % m);
      break;
    }
    case InvolutionKind::table:
      if (spec.bar_table.size() != N) throw Error(Errc::malformed_spec, "bar table size");
      for (std::size_t a = 0; a < N; ++a) {
        int b = spec.bar_table[a];
        if (b < 0 || static_cast<std::size_t>(b) >= N)
          throw Error(Errc::malformed_spec, "bar table entry out of range");
        c.bar_[a] = static_cast<std::uint16_t>(b);
      }
      break;
  }
  {
    std::vector<bool> hit(N, false);
    for (std::size_t a = 0; a < N; ++a) hit[c.bar_[a]] = true;
    for (bool h : hit)
      if (!h) throw Error(Errc::malformed_spec, "involution is not bijective");
  }
  if (c.bar_[c.one_.v] != c.one_.v) throw Error(Errc::malformed_spec, "bar(1) != 1");
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      if (c.bar_[A[a * N + b]] != A[c.bar_[a] * N + c.bar_[b]])
        throw Error(Errc::malformed_spec, "involution not additive");
      if (c.bar_[M[a * N + b]] != M[c.bar_[b] * N + c.bar_[a]])
        throw Error(Errc::malformed_spec, "involution not an anti-homomorphism");
    }

  c.lambda_ = c.parse(spec.lambda);
  c.mu_ = c.parse(spec.mu);

  if (validation == Validation::full) {
    const Elem lam = c.lambda_, lam_bar = c.bar(lam);
    for (Elem x : c.elements())
      if (c.bar(c.bar(x)) != c.mul(lam, x, lam_bar))
        throw Error(Errc::invalid_symmetry, "bar(bar(x)) != lambda x bar(lambda) at x=" + c.format(x));
    if (c.mul(lam, lam_bar) != c.one_)
      throw Error(Errc::non_unit_lambda, "lambda bar(lambda) != 1");
    if (c.mu_ != c.mul(c.bar(c.mu_), lam))
      throw Error(Errc::invalid_mu, "mu != bar(mu) lambda");
  }
  return c;
}

/// Convenience constructors for the standard desk-scale contexts.
inline RingSpec modular_spec(int m, std::string lambda, std::string mu, int n = 3) {
  RingSpec s;
  s.kind = RingKind::modular;
  s.m = m;
  s.involution = InvolutionKind::identity;
  s.lambda = std::move(lambda);
  s.mu = std::move(mu);
  s.n = n;
  return s;
}

inline RingSpec gaussian_spec(int m, std::string lambda, std::string mu, int n = 3) {
  RingSpec s;
  s.kind = RingKind::gaussian_modular;
  s.m = m;
  s.involution = InvolutionKind::gaussian_conjugation;
  s.lambda = std::move(lambda);
  s.mu = std::move(mu);
  s.n = n;
  return s;
}

}  // namespace oddform

template <>
struct std::hash<oddform::Elem> {
  std::size_t operator()(oddform::Elem e) const noexcept { return e.v; }
};
