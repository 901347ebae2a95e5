#pragma once

// Forms B and Q, the polarity map, both unitary membership predicates and the
// transvection constructors.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oddform/formideal.hpp"
#include "oddform/matrix.hpp"

namespace oddform {

/// B(u, v) = sum_{i>0} bar(u_i) v_{-i} + bar(u_0) mu v_0 + sum_{i<0} bar(u_i) lambda v_{-i}
inline Elem form_B(const HermitianCtx& c, const Vec& u, const Vec& v) {
  const int n = u.n;
  Elem s = c.mul(c.bar(u(0)), c.mu(), v(0));
  for (int i = 1; i <= n; ++i) {
    s = c.add(s, c.mul(c.bar(u(i)), v(-i)));
    s = c.add(s, c.mul(c.bar(u(-i)), c.lambda(), v(i)));
  }
  return s;
}

/// Q(u) = (u_0, sum_{i=1}^n bar(u_i) u_{-i})
inline HeisElem form_Q(const HermitianCtx& c, const Vec& u) {
  Elem s = c.zero();
  for (int i = 1; i <= u.n; ++i) s = c.add(s, c.mul(c.bar(u(i)), u(-i)));
  return {u(0), s};
}

/// Row (bar(u_{-1}) lambda, ..., bar(u_{-n}) lambda, bar(u_0) mu, bar(u_n), ..., bar(u_1)).
inline Vec polarity(const HermitianCtx& c, const Vec& u) {
  Vec r = zero_vec(c, u.n);
  r(0) = c.mul(c.bar(u(0)), c.mu());
  for (int i = 1; i <= u.n; ++i) {
    r(i) = c.mul(c.bar(u(-i)), c.lambda());
    r(-i) = c.bar(u(i));
  }
  return r;
}

/// Q(u) == Q(v) mod D, i.e. -Q(v) + Q(u) lies in D.
inline bool q_congruent(const HermitianCtx& c, HeisElem qu, HeisElem qv, const HSet& d) {
  return hset_contains(c, d, hplus(c, hminus(c, qv), qu));
}

inline constexpr std::size_t kExhaustiveQLimit = std::size_t{1} << 21;

/// Defining predicate: B preserved on basis pairs, Q preserved mod Delta on M
/// (all of M when |M| <= 2^21, otherwise `sample_budget` seeded samples).
inline bool is_unitary_def(const FormRing& fr, const Mat& s, std::size_t sample_budget = 4096,
                           std::uint64_t seed = 0) {
  const auto& c = fr.ctx;
  (void)minv(c, s);  // NotInvertible
  const int n = s.n;
  const auto th = theta_all(n);
  for (int i : th)
    for (int j : th)
      if (form_B(c, column(s, i), column(s, j)) != form_B(c, basis_vec(c, n, i), basis_vec(c, n, j)))
        return false;

  const int d = s.dim();
  const std::size_t R = c.size();
  double total = 1;
  for (int k = 0; k < d; ++k) total *= static_cast<double>(R);
  auto check = [&](const Vec& u) {
    return q_congruent(c, form_Q(c, apply(c, s, u)), form_Q(c, u), fr.delta.elements);
  };
  Vec u = zero_vec(c, n);
  if (total <= static_cast<double>(kExhaustiveQLimit)) {
    const auto count = static_cast<std::size_t>(total);
    for (std::size_t code = 0; code < count; ++code) {
      std::size_t x = code;
      for (int p = 0; p < d; ++p) {
        u.e[p] = Elem{static_cast<std::uint16_t>(x % R)};
        x /= R;
      }
      if (!check(u)) return false;
    }
    return true;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, R - 1);
  for (std::size_t t = 0; t < sample_budget; ++t) {
    for (int p = 0; p < d; ++p) u.e[p] = Elem{static_cast<std::uint16_t>(pick(rng))};
    if (!check(u)) return false;
  }
  return true;
}

/// Finite criterion: inverse-entry identities plus Q of every column.
inline bool is_unitary_l36(const FormRing& fr, const Mat& s) {
  const auto& c = fr.ctx;
  const Mat si = minv(c, s);
  const int n = s.n;
  const auto hb = theta_hb(n);
  for (int i : hb)
    for (int j : hb) {
      Elem rhs = c.mul(c.lambda_power(-(eps(i) + 1) / 2), c.bar(s(-j, -i)),
                       c.lambda_power((eps(j) + 1) / 2));
      if (si(i, j) != rhs) return false;
    }
  for (int j : hb)
    if (c.mul(c.mu(), si(0, j)) != c.mul(c.bar(s(-j, 0)), c.lambda_power((eps(j) + 1) / 2)))
      return false;
  for (int i : hb)
    if (si(i, 0) != c.mul(c.lambda_power(-(eps(i) + 1) / 2), c.bar(s(0, -i)), c.mu())) return false;
  if (c.mul(c.mu(), si(0, 0)) != c.mul(c.bar(s(0, 0)), c.mu())) return false;

  for (int j : theta_all(n)) {
    HeisElem target{j == 0 ? c.one() : c.zero(), c.zero()};
    if (!q_congruent(c, form_Q(c, column(s, j)), target, fr.delta.elements)) return false;
  }
  return true;
}

inline void check_pair(int n, int i, int j) {
  if (!in_theta(n, i) || !in_theta(n, j) || i == 0 || j == 0 || i == j || i == -j)
    throw Error(Errc::bad_indices,
                "need i, j in Theta_hb with i != +-j (got " + std::to_string(i) + ", " +
                    std::to_string(j) + ")");
}

/// The coefficient lambda^{(eps(j)-1)/2} bar(x) lambda^{(1-eps(i))/2} of e^{-j,-i} in T_ij(x).
inline Elem short_partner(const HermitianCtx& c, int i, int j, Elem x) {
  return c.mul(c.lambda_power((eps(j) - 1) / 2), c.bar(x), c.lambda_power((1 - eps(i)) / 2));
}

/// Short root transvection T_ij(x) = e + x e^{ij} - lambda^{..} bar(x) lambda^{..} e^{-j,-i}.
inline Mat t_short(const HermitianCtx& c, int n, int i, int j, Elem x) {
  check_pair(n, i, j);
  Mat m = identity(c, n);
  m(i, j) = c.add(m(i, j), x);
  m(-j, -i) = c.sub(m(-j, -i), short_partner(c, i, j, x));
  return m;
}

/// Extra short root transvection without the parameter check.
inline Mat t_extra_raw(const HermitianCtx& c, int n, int i, HeisElem a) {
  if (!in_theta(n, i) || i == 0) throw Error(Errc::bad_indices, "need i in Theta_hb");
  Mat m = identity(c, n);
  m(0, -i) = c.add(m(0, -i), a.x);
  m(i, 0) = c.sub(m(i, 0), c.mul(c.lambda_power(-(1 + eps(i)) / 2), c.bar(a.x), c.mu()));
  m(i, -i) = c.add(m(i, -i), a.y);
  return m;
}

/// T_i(x, y) for (x, y) in Delta^{-eps(i)}.
inline Mat t_extra(const FormRing& fr, int i, HeisElem a) {
  const auto& c = fr.ctx;
  const int n = c.n();
  const HSet allowed = signed_set(c, fr.delta.elements, -eps(i));
  if (!hset_contains(c, allowed, a))
    throw Error(Errc::not_in_parameter, "(" + c.format(a.x) + "," + c.format(a.y) +
                                            ") not in Delta^{" + std::to_string(-eps(i)) + "}");
  return t_extra_raw(c, n, i, a);
}

/// e + u e_j^t - e_{-j} lambda^{(eps(j)-1)/2} polarity(u) + x e^{-j,j}, unchecked.
inline Mat esd_raw(const HermitianCtx& c, int j, const Vec& u, Elem x) {
  const int n = u.n;
  Mat m = identity(c, n);
  const Vec tu = polarity(c, u);
  const Elem lp = c.lambda_power((eps(j) - 1) / 2);
  for (int i : theta_all(n)) m(i, j) = c.add(m(i, j), u(i));
  for (int k : theta_all(n)) m(-j, k) = c.sub(m(-j, k), c.mul(lp, tu(k)));
  m(-j, j) = c.add(m(-j, j), x);
  return m;
}

/// The parameter of the T_{-j} factor in the ESD factorisation.
inline HeisElem esd_extra_param(const HermitianCtx& c, int j, const Vec& u, Elem x) {
  const int k = eps(j);
  HeisElem a = twist_pow(c, form_Q(c, u), k);
  a = hplus(c, a, {c.zero(), x}, k);
  const Elem w = u(-j);
  a = hplus(c, a, {c.zero(), c.sub(w, c.mul(c.lambda_power(k), c.bar(w)))}, k);
  return a;
}

/// (prod_{i != +-j} T_ij(u_i)) T_{-j}(Q(u)^{eps(j)} + (0,x) + (0, u_{-j} - lambda^{eps(j)} bar(u_{-j}))).
inline Mat esd_factorized(const HermitianCtx& c, int j, const Vec& u, Elem x) {
  const int n = u.n;
  Mat m = identity(c, n);
  for (int i : theta_hb(n)) {
    if (i == j || i == -j) continue;
    m = mul(c, m, t_short(c, n, i, j, u(i)));
  }
  return mul(c, m, t_extra_raw(c, n, -j, esd_extra_param(c, j, u, x)));
}

/// ESD transvection T_{*j}(u, x) relative to the odd form ideal p.
inline Mat t_esd(const FormRing& fr, const OddFormIdeal& p, int j, const Vec& u, Elem x) {
  const auto& c = fr.ctx;
  const int n = c.n();
  if (!in_theta(n, j) || j == 0) throw Error(Errc::bad_indices, "need j in Theta_hb");
  if (u(j) != c.zero()) throw Error(Errc::precondition_violated, "u_j != 0");
  for (int i : theta_hb(n))
    if (!p.ideal.contains(u(i)))
      throw Error(Errc::precondition_violated, "u_" + std::to_string(i) + " not in I");
  const int k = eps(j);
  HeisElem a = hplus(c, twist_pow(c, form_Q(c, u), k), {c.zero(), x}, k);
  if (!hset_contains(c, signed_set(c, p.omega, k), a))
    throw Error(Errc::precondition_violated, "Q(u)^eps + (0,x) not in Omega^eps");
  return esd_raw(c, j, u, x);
}

/// Compares sigma T_{*j}(u) sigma^{-1} with its closed form
/// e + lambda^{(-eps(j)-1)/2} (sigma u) polarity(sigma_{*,-j}) - lambda^{(eps(j)-1)/2} sigma_{*,-j} polarity(sigma u).
inline bool conjugate_esd_formula_check(const HermitianCtx& c, const Mat& s, int j, const Vec& u) {
  const Mat t = esd_raw(c, j, u, c.zero());
  const Mat lhs = mul(c, s, t, minv(c, s));
  const Vec su = apply(c, s, u);
  const Vec col = column(s, -j);
  Mat rhs = identity(c, s.n);
  rhs = madd(c, rhs, mscale(c, c.lambda_power((-eps(j) - 1) / 2), outer(c, su, polarity(c, col))));
  rhs = msub(c, rhs, mscale(c, c.lambda_power((eps(j) - 1) / 2), outer(c, col, polarity(c, su))));
  return lhs == rhs;
}

/// All (i, j) with i, j in Theta_hb, i != +-j, in Theta order.
inline std::vector<std::pair<int, int>> short_index_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i : theta_hb(n))
    for (int j : theta_hb(n))
      if (i != j && i != -j) out.emplace_back(i, j);
  return out;
}

/// A uniformly chosen elementary transvection of EU(R, Delta).
template <class Rng>
Mat random_elementary(const FormRing& fr, Rng& rng) {
  const auto& c = fr.ctx;
  const int n = c.n();
  const auto hb = theta_hb(n);
  std::uniform_int_distribution<int> coin(0, 3);
  if (coin(rng) != 0) {
    const auto pairs = short_index_pairs(n);
    std::uniform_int_distribution<std::size_t> pp(0, pairs.size() - 1);
    std::uniform_int_distribution<std::size_t> px(0, c.size() - 1);
    auto [i, j] = pairs[pp(rng)];
    return t_short(c, n, i, j, Elem{static_cast<std::uint16_t>(px(rng))});
  }
  std::uniform_int_distribution<std::size_t> pi(0, hb.size() - 1);
  const int i = hb[pi(rng)];
  const auto params = hset_elements(c, signed_set(c, fr.delta.elements, -eps(i)));
  std::uniform_int_distribution<std::size_t> pa(0, params.size() - 1);
  return t_extra(fr, i, params[pa(rng)]);
}

template <class Rng>
Mat random_elementary_product(const FormRing& fr, std::size_t length, Rng& rng) {
  Mat m = identity(fr.ctx, fr.ctx.n());
  for (std::size_t k = 0; k < length; ++k) m = mul(fr.ctx, m, random_elementary(fr, rng));
  return m;
}

}  // namespace oddform
