#pragma once

// The Heisenberg group on R x R, its twisted (-1) variant, and odd form
// parameters stored as explicit element sets.

#include <boost/dynamic_bitset.hpp>

#include <compare>
#include <cstddef>
#include <vector>

#include "oddform/ring.hpp"

namespace oddform {

struct HeisElem {
  Elem x, y;
  friend constexpr auto operator<=>(const HeisElem&, const HeisElem&) = default;
};

/// Set of ring elements (bit k <=> element k).
using ElemSet = boost::dynamic_bitset<>;
/// Set of Heisenberg elements (bit x*|R|+y).
using HSet = boost::dynamic_bitset<>;

inline std::size_t heis_index(const HermitianCtx& ctx, HeisElem a) {
  return a.x.v * ctx.size() + a.y.v;
}

inline HeisElem heis_at(const HermitianCtx& ctx, std::size_t k) {
  return {Elem{static_cast<std::uint16_t>(k / ctx.size())},
          Elem{static_cast<std::uint16_t>(k % ctx.size())}};
}

inline HSet empty_hset(const HermitianCtx& ctx) { return HSet(ctx.size() * ctx.size()); }
inline ElemSet empty_eset(const HermitianCtx& ctx) { return ElemSet(ctx.size()); }

inline bool hset_contains(const HermitianCtx& ctx, const HSet& s, HeisElem a) {
  return s.test(heis_index(ctx, a));
}

inline std::vector<HeisElem> hset_elements(const HermitianCtx& ctx, const HSet& s) {
  std::vector<HeisElem> out;
  for (auto k = s.find_first(); k != HSet::npos; k = s.find_next(k)) out.push_back(heis_at(ctx, k));
  return out;
}

inline std::vector<Elem> eset_elements(const ElemSet& s) {
  std::vector<Elem> out;
  for (auto k = s.find_first(); k != ElemSet::npos; k = s.find_next(k))
    out.push_back(Elem{static_cast<std::uint16_t>(k)});
  return out;
}

/// Group law of H (k = +1) or of the inverse Hermitian ring's H^{-1} (k = -1).
inline HeisElem hplus(const HermitianCtx& c, HeisElem a, HeisElem b, int k = 1) {
  return {c.add(a.x, b.x), c.sub(c.add(a.y, b.y), c.mul(c.bar(a.x), c.mu_k(k), b.x))};
}

inline HeisElem hminus(const HermitianCtx& c, HeisElem a, int k = 1) {
  return {c.neg(a.x), c.sub(c.neg(a.y), c.mul(c.bar(a.x), c.mu_k(k), a.x))};
}

/// a "minus" b, i.e. a + (-b), evaluated left to right.
inline HeisElem hdiff(const HermitianCtx& c, HeisElem a, HeisElem b, int k = 1) {
  return hplus(c, a, hminus(c, b, k), k);
}

inline HeisElem hcirc(const HermitianCtx& c, HeisElem a, Elem r) {
  return {c.mul(a.x, r), c.mul(c.bar(r), a.y, r)};
}

/// Trace map of H^k: bar(x) mu_k x + y + bar(y) lambda^k.
inline Elem trace(const HermitianCtx& c, HeisElem a, int k = 1) {
  return c.add(c.add(c.mul(c.bar(a.x), c.mu_k(k), a.x), a.y),
               c.mul(c.bar(a.y), c.lambda_power(k)));
}

/// (x, y)^{-1} := (x, bar(lambda) y); maps Delta onto Delta^{-1}.
inline HeisElem twist_elem(const HermitianCtx& c, HeisElem a) {
  return {a.x, c.mul(c.bar(c.lambda()), a.y)};
}

/// (x, y)^{k}: identity for k = +1, twist for k = -1.
inline HeisElem twist_pow(const HermitianCtx& c, HeisElem a, int k) {
  return k > 0 ? a : twist_elem(c, a);
}

struct FormParam {
  HSet elements;
  std::vector<HeisElem> generators;
  int twist = 1;

  friend bool operator==(const FormParam& a, const FormParam& b) {
    return a.elements == b.elements && a.twist == b.twist;
  }
};

/// Closure of `seed` under +_k, negation and scalar multiplication by R.
inline HSet module_closure(const HermitianCtx& c, const HSet& seed, int k) {
  HSet in = seed;
  in.set(heis_index(c, {c.zero(), c.zero()}));
  std::vector<HeisElem> members = hset_elements(c, in);
  std::vector<HeisElem> queue = members;
  const auto ring = c.elements();
  auto push = [&](HeisElem a) {
    const auto id = heis_index(c, a);
    if (!in.test(id)) {
      in.set(id);
      members.push_back(a);
      queue.push_back(a);
    }
  };
  while (!queue.empty()) {
    HeisElem a = queue.back();
    queue.pop_back();
    push(hminus(c, a, k));
    for (Elem r : ring) push(hcirc(c, a, r));
    for (std::size_t i = 0; i < members.size(); ++i) {
      HeisElem b = members[i];
      push(hplus(c, a, b, k));
      push(hplus(c, b, a, k));
    }
  }
  return in;
}

/// Subgroup of (H^k, +) generated by `seed` (no scalar closure).
inline HSet subgroup_closure(const HermitianCtx& c, const HSet& seed, int k) {
  HSet in = seed;
  in.set(heis_index(c, {c.zero(), c.zero()}));
  std::vector<HeisElem> members = hset_elements(c, in);
  std::vector<HeisElem> queue = members;
  auto push = [&](HeisElem a) {
    const auto id = heis_index(c, a);
    if (!in.test(id)) {
      in.set(id);
      members.push_back(a);
      queue.push_back(a);
    }
  };
  while (!queue.empty()) {
    HeisElem a = queue.back();
    queue.pop_back();
    push(hminus(c, a, k));
    for (std::size_t i = 0; i < members.size(); ++i) {
      HeisElem b = members[i];
      push(hplus(c, a, b, k));
      push(hplus(c, b, a, k));
    }
  }
  return in;
}

inline HSet delta_min_set(const HermitianCtx& c, int k = 1) {
  HSet s = empty_hset(c);
  const Elem lam = c.lambda_power(k);
  for (Elem x : c.elements()) s.set(heis_index(c, {c.zero(), c.sub(x, c.mul(c.bar(x), lam))}));
  return s;
}

inline HSet delta_max_set(const HermitianCtx& c, int k = 1) {
  HSet s = empty_hset(c);
  for (Elem x : c.elements())
    for (Elem y : c.elements())
      if (trace(c, {x, y}, k) == c.zero()) s.set(heis_index(c, {x, y}));
  return s;
}

inline FormParam delta_min(const HermitianCtx& c, int k = 1) { return {delta_min_set(c, k), {}, k}; }
inline FormParam delta_max(const HermitianCtx& c, int k = 1) { return {delta_max_set(c, k), {}, k}; }

/// Smallest odd form parameter of H^k containing the generators.
inline FormParam param_closure(const HermitianCtx& c, const std::vector<HeisElem>& gens, int k = 1) {
  HSet seed = delta_min_set(c, k);
  for (HeisElem g : gens) {
    if (!c.contains(g.x) || !c.contains(g.y))
      throw Error(Errc::context_mismatch, "generator outside the ring");
    if (trace(c, g, k) != c.zero())
      throw Error(Errc::generator_outside_delta_max,
                  "(" + c.format(g.x) + "," + c.format(g.y) + ") has nonzero trace");
    seed.set(heis_index(c, g));
  }
  return {module_closure(c, seed, k), gens, k};
}

/// {(x, y) : (x, bar(y)) in s}
inline HSet bar_second(const HermitianCtx& c, const HSet& s) {
  HSet out = empty_hset(c);
  for (HeisElem a : hset_elements(c, s)) out.set(heis_index(c, {a.x, c.bar(a.y)}));
  return out;
}

/// Elementwise twist image {d^{-1} : d in s}.
inline HSet twist_set(const HermitianCtx& c, const HSet& s) {
  HSet out = empty_hset(c);
  for (HeisElem a : hset_elements(c, s)) out.set(heis_index(c, twist_elem(c, a)));
  return out;
}

/// Delta^{-1} for a parameter of sign +1.
inline FormParam twist_param(const HermitianCtx& c, const FormParam& d) {
  if (d.twist != 1) throw Error(Errc::bad_arguments, "twist_param expects a sign +1 parameter");
  FormParam out{twist_set(c, d.elements), {}, -1};
  for (HeisElem g : d.generators) out.generators.push_back(twist_elem(c, g));
  return out;
}

/// The set Delta^{k} for a sign +1 element set: itself for k=+1, Delta^{-1} otherwise.
inline HSet signed_set(const HermitianCtx& c, const HSet& s, int k) {
  return k > 0 ? s : bar_second(c, s);
}

/// J(Delta): projection onto the first coordinate.
inline ElemSet jdelta(const HermitianCtx& c, const HSet& s) {
  ElemSet out = empty_eset(c);
  for (HeisElem a : hset_elements(c, s)) out.set(a.x.v);
  return out;
}

/// Checks the expansion of (a,b) o (x_1 + ... + x_m) as an iterated +_k sum.
inline bool sum_expansion_check(const HermitianCtx& c, HeisElem ab, const std::vector<Elem>& xs,
                                int k) {
  if (xs.empty()) return true;
  Elem total = c.zero();
  for (Elem x : xs) total = c.add(total, x);
  const HeisElem lhs = hcirc(c, ab, total);

  HeisElem rhs = hcirc(c, ab, xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) rhs = hplus(c, rhs, hcirc(c, ab, xs[i]), k);
  Elem cross = c.zero();
  const Elem lam = c.lambda_power(k);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const Elem t = c.mul(c.bar(xs[i]), ab.y, xs[j]);
      cross = c.add(cross, c.sub(t, c.mul(c.bar(t), lam)));
    }
  rhs = hplus(c, rhs, {c.zero(), cross}, k);
  return lhs == rhs;
}

}  // namespace oddform
