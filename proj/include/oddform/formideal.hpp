#pragma once

// Involution-invariant ideals, relative odd form parameters and odd form
// ideals, with the star / colon calculus.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "oddform/heisenberg.hpp"

namespace oddform {

/// A Hermitian form ring (R, Delta).
struct FormRing {
  HermitianCtx ctx;
  FormParam delta;
};

inline FormRing make_form_ring(HermitianCtx ctx, FormParam delta) {
  if (delta.twist != 1) throw Error(Errc::bad_arguments, "form ring needs a sign +1 parameter");
  return {std::move(ctx), std::move(delta)};
}

struct Ideal {
  ElemSet elements;
  std::vector<Elem> generators;

  bool contains(Elem a) const { return elements.test(a.v); }
  friend bool operator==(const Ideal& a, const Ideal& b) { return a.elements == b.elements; }
};

/// Smallest involution-invariant ideal containing `gens`.
inline Ideal ideal_closure(const HermitianCtx& c, const std::vector<Elem>& gens) {
  ElemSet in = empty_eset(c);
  std::vector<Elem> members, queue;
  auto push = [&](Elem a) {
    if (!in.test(a.v)) {
      in.set(a.v);
      members.push_back(a);
      queue.push_back(a);
    }
  };
  push(c.zero());
  for (Elem g : gens) {
    if (!c.contains(g)) throw Error(Errc::context_mismatch, "ideal generator outside the ring");
    push(g);
  }
  const auto ring = c.elements();
  while (!queue.empty()) {
    Elem a = queue.back();
    queue.pop_back();
    push(c.bar(a));
    push(c.neg(a));
    for (Elem r : ring) push(c.mul(a, r));
    for (std::size_t i = 0; i < members.size(); ++i) push(c.add(a, members[i]));
  }
  return {in, gens};
}

inline Ideal zero_ideal(const HermitianCtx& c) { return ideal_closure(c, {}); }
inline Ideal unit_ideal(const HermitianCtx& c) { return ideal_closure(c, {c.one()}); }

inline Ideal ideal_from_set(const HermitianCtx& c, const ElemSet& s) {
  return ideal_closure(c, eset_elements(s));
}

inline Ideal ideal_product(const HermitianCtx& c, const Ideal& a, const Ideal& b) {
  std::vector<Elem> prods;
  for (Elem x : eset_elements(a.elements))
    for (Elem y : eset_elements(b.elements)) prods.push_back(c.mul(x, y));
  std::sort(prods.begin(), prods.end());
  prods.erase(std::unique(prods.begin(), prods.end()), prods.end());
  return ideal_closure(c, prods);
}

/// A^k with the convention A^0 = R.
inline Ideal ideal_power(const HermitianCtx& c, const Ideal& a, int k) {
  if (k < 0) throw Error(Errc::bad_arguments, "negative ideal power");
  Ideal acc = unit_ideal(c);
  for (int i = 0; i < k; ++i) {
    Ideal next = ideal_product(c, acc, a);
    if (next == acc) break;  // powers have stabilised
    acc = std::move(next);
  }
  return acc;
}

/// {x in R : x B subset A}
inline Ideal ideal_quotient(const HermitianCtx& c, const Ideal& a, const Ideal& b) {
  ElemSet out = empty_eset(c);
  const auto bs = eset_elements(b.elements);
  for (Elem x : c.elements()) {
    bool ok = std::all_of(bs.begin(), bs.end(), [&](Elem y) { return a.contains(c.mul(x, y)); });
    if (ok) out.set(x.v);
  }
  return {out, eset_elements(out)};
}

/// {x in R : bar(J(Delta)) mu x subset A}
inline ElemSet tilde_ideal(const FormRing& fr, const Ideal& a) {
  const auto& c = fr.ctx;
  const auto js = eset_elements(jdelta(c, fr.delta.elements));
  ElemSet out = empty_eset(c);
  for (Elem x : c.elements()) {
    bool ok = std::all_of(js.begin(), js.end(),
                          [&](Elem j) { return a.contains(c.mul(c.bar(j), c.mu(), x)); });
    if (ok) out.set(x.v);
  }
  return out;
}

/// Omega_min^A: generated by (0, x - bar(x) lambda), x in A, together with Delta o A.
inline HSet omega_min(const FormRing& fr, const Ideal& a) {
  const auto& c = fr.ctx;
  HSet seed = empty_hset(c);
  const auto as = eset_elements(a.elements);
  for (Elem x : as) seed.set(heis_index(c, {c.zero(), c.sub(x, c.mul(c.bar(x), c.lambda()))}));
  for (HeisElem d : hset_elements(c, fr.delta.elements))
    for (Elem x : as) seed.set(heis_index(c, hcirc(c, d, x)));
  return module_closure(c, seed, 1);
}

/// Omega_max^A = Delta intersected with (tilde A x A).
inline HSet omega_max(const FormRing& fr, const Ideal& a) {
  const auto& c = fr.ctx;
  const ElemSet tl = tilde_ideal(fr, a);
  HSet out = empty_hset(c);
  for (HeisElem d : hset_elements(c, fr.delta.elements))
    if (tl.test(d.x.v) && a.contains(d.y)) out.set(heis_index(c, d));
  return out;
}

struct OddFormIdeal {
  Ideal ideal;
  HSet omega;

  friend bool operator==(const OddFormIdeal& a, const OddFormIdeal& b) {
    return a.ideal == b.ideal && a.omega == b.omega;
  }
};

/// I subset J and Omega subset Sigma.
inline bool off_subset(const OddFormIdeal& p, const OddFormIdeal& q) {
  return p.ideal.elements.is_subset_of(q.ideal.elements) && p.omega.is_subset_of(q.omega);
}

inline bool is_ideal(const HermitianCtx& c, const ElemSet& s) {
  return ideal_from_set(c, s).elements == s;
}

/// Whether (ideal, omega) is an odd form ideal of (R, Delta).
inline bool is_odd_form_ideal(const FormRing& fr, const OddFormIdeal& p, std::string* why = nullptr) {
  const auto& c = fr.ctx;
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (!is_ideal(c, p.ideal.elements)) return fail("ideal is not an involution invariant ideal");
  if (module_closure(c, p.omega, 1) != p.omega) return fail("omega is not a submodule");
  if (!omega_min(fr, p.ideal).is_subset_of(p.omega)) return fail("omega misses omega_min");
  if (!p.omega.is_subset_of(omega_max(fr, p.ideal))) return fail("omega exceeds omega_max");
  return true;
}

inline OddFormIdeal zero_off(const FormRing& fr) {
  Ideal z = zero_ideal(fr.ctx);
  return {z, omega_min(fr, z)};
}

/// Odd form ideal (A, Omega) with Omega generated over Omega_min^A by `omega_gens`.
inline OddFormIdeal make_off(const FormRing& fr, const Ideal& a,
                             const std::vector<HeisElem>& omega_gens) {
  const auto& c = fr.ctx;
  if (!is_ideal(c, a.elements))
    throw Error(Errc::bad_arguments, "level must be an involution invariant ideal");
  const HSet lo = omega_min(fr, a);
  const HSet hi = omega_max(fr, a);
  HSet seed = lo;
  for (HeisElem g : omega_gens) {
    if (!c.contains(g.x) || !c.contains(g.y))
      throw Error(Errc::context_mismatch, "omega generator outside the ring");
    if (!hset_contains(c, hi, g))
      throw Error(Errc::generator_outside_omega_max,
                  "(" + c.format(g.x) + "," + c.format(g.y) + ") not in omega_max");
    seed.set(heis_index(c, g));
  }
  HSet om = module_closure(c, seed, 1);
  if (!om.is_subset_of(hi)) throw Error(Errc::closure_escapes_omega_max, "closure left omega_max");
  return {a, om};
}

/// The set Omega o J (subgroup generated by products).
inline HSet circ_set(const HermitianCtx& c, const HSet& omega, const ElemSet& j) {
  HSet seed = empty_hset(c);
  const auto js = eset_elements(j);
  for (HeisElem w : hset_elements(c, omega))
    for (Elem x : js) seed.set(heis_index(c, hcirc(c, w, x)));
  return subgroup_closure(c, seed, 1);
}

/// (I, Omega) * J = (IJ, Omega_min^{IJ} + Omega o J)
inline OddFormIdeal off_star(const FormRing& fr, const OddFormIdeal& p, const Ideal& j) {
  const auto& c = fr.ctx;
  Ideal ij = ideal_product(c, p.ideal, j);
  HSet seed = omega_min(fr, ij) | circ_set(c, p.omega, j.elements);
  return {ij, module_closure(c, seed, 1)};
}

/// (I, Omega) : J = (I:J, Omega_min^{I:J} + {a in Omega_max^{I:J} : a o J subset Omega})
inline OddFormIdeal off_colon(const FormRing& fr, const OddFormIdeal& p, const Ideal& j) {
  const auto& c = fr.ctx;
  Ideal q = ideal_quotient(c, p.ideal, j);
  HSet seed = omega_min(fr, q);
  const auto js = eset_elements(j.elements);
  for (HeisElem a : hset_elements(c, omega_max(fr, q))) {
    bool ok = std::all_of(js.begin(), js.end(),
                          [&](Elem x) { return hset_contains(c, p.omega, hcirc(c, a, x)); });
    if (ok) seed.set(heis_index(c, a));
  }
  return {q, module_closure(c, seed, 1)};
}

/// All involution-invariant ideals, ordered by (size, bit pattern).
inline std::vector<Ideal> enumerate_ideals(const HermitianCtx& c) {
  auto key = [](const ElemSet& s) {
    std::string k;
    boost::to_string(s, k);
    return std::make_pair(s.count(), k);
  };
  std::set<std::pair<std::size_t, std::string>> seen;
  std::vector<Ideal> all{zero_ideal(c)};
  seen.insert(key(all[0].elements));
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (Elem r : c.elements()) {
      if (all[i].contains(r)) continue;
      auto gens = eset_elements(all[i].elements);
      gens.push_back(r);
      Ideal next = ideal_closure(c, gens);
      if (seen.insert(key(next.elements)).second) all.push_back(std::move(next));
    }
  }
  std::sort(all.begin(), all.end(), [&](const Ideal& a, const Ideal& b) {
    return key(a.elements) < key(b.elements);
  });
  for (auto& a : all) a.generators = eset_elements(a.elements);
  return all;
}

/// All odd form ideals of (R, Delta).
inline std::vector<OddFormIdeal> enumerate_odd_form_ideals(const FormRing& fr) {
  const auto& c = fr.ctx;
  std::vector<OddFormIdeal> out;
  for (const Ideal& a : enumerate_ideals(c)) {
    const HSet lo = omega_min(fr, a);
    const HSet hi = omega_max(fr, a);
    if (!lo.is_subset_of(hi)) continue;
    std::vector<HSet> params{lo};
    std::set<std::string> seen;
    auto key = [](const HSet& s) {
      std::string k;
      boost::to_string(s, k);
      return k;
    };
    seen.insert(key(lo));
    for (std::size_t i = 0; i < params.size(); ++i) {
      for (HeisElem g : hset_elements(c, hi)) {
        if (hset_contains(c, params[i], g)) continue;
        HSet seed = params[i];
        seed.set(heis_index(c, g));
        HSet next = module_closure(c, seed, 1);
        if (next.is_subset_of(hi) && seen.insert(key(next)).second) params.push_back(next);
      }
    }
    for (auto& om : params) out.push_back({a, om});
  }
  return out;
}

}  // namespace oddform
