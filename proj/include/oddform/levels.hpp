#pragma once

// Lower and upper levels of a subgroup, exponent rules and the sandwich checks.

#include <optional>
#include <string>
#include <vector>

#include "oddform/subgroup.hpp"

namespace oddform {

// ---------------------------------------------------------------------------
// upper level

/// Harvests the entry set Y and the Heisenberg set Z from group elements.
class UpperLevelAccumulator {
 public:
  explicit UpperLevelAccumulator(const FormRing& fr)
      : fr_(fr), c_(fr.ctx), hb_(theta_hb(c_.n())),
        jd_(eset_elements(jdelta(c_, fr.delta.elements))),
        dl_(hset_elements(c_, fr.delta.elements)),
        y_(empty_eset(c_)), z_(empty_hset(c_)) {}

  void add(const Mat& s) {
    auto Y = [&](Elem a) { y_.set(a.v); };
    for (int i : hb_)
      for (int j : hb_)
        if (i != j) {
          Y(s(i, j));
          Y(c_.sub(s(i, i), s(j, j)));
        }
    for (int i : hb_)
      for (Elem a : jd_) {
        Y(c_.mul(s(i, 0), a));
        Y(c_.mul(c_.bar(a), c_.mu(), s(0, i)));
        const Elem d = c_.sub(s(0, 0), s(i, i));
        for (Elem b : jd_) Y(c_.mul(c_.bar(a), c_.mu(), d, b));
      }
    for (int j : hb_) z_.set(heis_index(c_, form_Q(c_, column(s, j))));
    const HeisElem q = hdiff(c_, form_Q(c_, column(s, 0)), {c_.one(), c_.zero()});
    for (int i : hb_)
      for (HeisElem yz : dl_) {
        HeisElem v = hcirc(c_, q, yz.x);
        v = hplus(c_, v, yz);
        v = hplus(c_, v, hminus(c_, hcirc(c_, yz, s(i, i))));
        z_.set(heis_index(c_, v));
      }
    ++count_;
  }

  std::size_t count() const { return count_; }

  /// (I, Omega) with I generated by Y and bar(Y), Omega = Omega_min^I + Z o R.
  /// Throws ClosureEscapesOmegaMax when Omega leaves Omega_max^I.
  OddFormIdeal result() const {
    Ideal I = ideal_closure(c_, eset_elements(y_));
    HSet om = module_closure(c_, omega_min(fr_, I) | z_, 1);
    if (!om.is_subset_of(omega_max(fr_, I)))
      throw Error(Errc::closure_escapes_omega_max, "upper level parameter leaves omega_max");
    return {I, om};
  }

  /// True once the level is (R, Delta); for unitary input it cannot grow further.
  bool saturated() const {
    if (!y_.test(c_.one().v) && y_.count() < c_.size()) {
      Ideal I = ideal_closure(c_, eset_elements(y_));
      if (I.elements.count() != c_.size()) return false;
    }
    return module_closure(c_, delta_min_set(c_) | z_, 1) == fr_.delta.elements;
  }

 private:
  const FormRing& fr_;
  const HermitianCtx& c_;
  std::vector<int> hb_;
  std::vector<Elem> jd_;
  std::vector<HeisElem> dl_;
  ElemSet y_;
  HSet z_;
  std::size_t count_ = 0;
};

inline OddFormIdeal upper_level(const FormRing& fr, const std::vector<Mat>& elems, bool check = false) {
  UpperLevelAccumulator acc(fr);
  for (const Mat& s : elems) {
    if (check && !is_unitary_l36(fr, s)) throw Error(Errc::not_unitary, "element is not unitary");
    acc.add(s);
  }
  return acc.result();
}

/// U(H) over all elements of a group set, stopping once the level is (R, Delta).
template <class A>
OddFormIdeal upper_level(const FormRing& fr, const GroupSet<A>& h) {
  UpperLevelAccumulator acc(fr);
  const auto& alg = h.algebra();
  std::size_t k = 0;
  for (const auto& e : h.elements()) {
    acc.add(alg.to_dense(e));
    if (++k % 4096 == 0 && acc.saturated()) break;
  }
  return acc.result();
}

// ---------------------------------------------------------------------------
// normality helpers

/// g^{-1} h g stays in h for every generator g (and inverse) of the list.
template <class A>
bool normalised_by(const GroupSet<A>& h, const std::vector<Mat>& gens) {
  const auto& alg = h.algebra();
  const auto moves = with_inverses(alg, gens);
  for (const auto& g : moves) {
    const auto gi = alg.inv(g);
    for (const auto& e : h.elements())
      if (!h.contains(alg.mul(alg.mul(gi, e), g))) return false;
  }
  return true;
}

/// Whether the normal closure of `seeds` under `ambient` lies inside h.
/// With `h_normal` (h already normalised by ambient) this is plain membership.
template <class A>
bool normal_closure_inside(const GroupSet<A>& h, const std::vector<Mat>& seeds,
                           const std::vector<Mat>& ambient, bool h_normal) {
  const auto& alg = h.algebra();
  using V = typename A::value_type;
  std::vector<V> s;
  for (const Mat& m : seeds) {
    V v = alg.from_dense(m);
    if (!h.contains(v)) return false;
    s.push_back(v);
  }
  if (h_normal || s.empty()) return true;
  // conjugates of the seeds suffice: the closure is generated by them
  const auto a = with_inverses(alg, ambient);
  absl::flat_hash_set<V, std::hash<V>> seen(s.begin(), s.end());
  std::vector<V> queue = s;
  while (!queue.empty()) {
    V x = queue.back();
    queue.pop_back();
    for (const V& g : a) {
      V y = alg.mul(alg.mul(g, x), alg.inv(g));
      if (seen.insert(y).second) {
        if (!h.contains(y)) return false;
        queue.push_back(y);
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// lower level

struct LowerLevel {
  OddFormIdeal level;
  bool valid = true;  // re-validates as an odd form ideal
  std::string why;
  bool normal_shortcut = false;
};

/// L(H): each candidate family tested by normal-closure containment.
template <class A>
LowerLevel lower_level(const FormRing& fr, const GroupSet<A>& h, const std::vector<Mat>& ambient) {
  const auto& c = fr.ctx;
  const int n = c.n();
  const auto hb = theta_hb(n);
  const auto ring = c.elements();
  const bool normal = normalised_by(h, ambient);
  auto inside = [&](const std::vector<Mat>& seeds) { return normal_closure_inside(h, seeds, ambient, normal); };

  ElemSet in_i = empty_eset(c);
  for (Elem x : ring) {
    std::vector<Mat> seeds;
    for (Elem r : ring) {
      const Elem xr = c.mul(x, r), bxr = c.mul(c.bar(x), r);
      for (auto [i, j] : short_index_pairs(n)) seeds.push_back(t_short(c, n, i, j, xr));
      for (int i : hb) {
        const Elem w = c.sub(xr, c.mul(c.bar(xr), c.lambda_power(-eps(i))));
        seeds.push_back(t_extra_raw(c, n, i, {c.zero(), w}));
        for (HeisElem al : hset_elements(c, signed_set(c, fr.delta.elements, -eps(i)))) {
          seeds.push_back(t_extra_raw(c, n, i, hcirc(c, al, xr)));
          seeds.push_back(t_extra_raw(c, n, i, hcirc(c, al, bxr)));
        }
      }
    }
    if (inside(seeds)) in_i.set(x.v);
  }
  LowerLevel out;
  out.normal_shortcut = normal;
  Ideal I{in_i, eset_elements(in_i)};
  if (!is_ideal(c, in_i)) {
    out.valid = false;
    out.why = "lower level I is not an involution invariant ideal";
    I = ideal_closure(c, eset_elements(in_i));
  }

  HSet seed = omega_min(fr, I);
  for (HeisElem yz : hset_elements(c, omega_max(fr, I))) {
    std::vector<Mat> seeds;
    for (Elem r : ring)
      for (int i : hb) {
        const HeisElem a = i < 0 ? hcirc(c, yz, r) : hcirc(c, {yz.x, c.bar(yz.y)}, r);
        seeds.push_back(t_extra_raw(c, n, i, a));
      }
    if (inside(seeds)) seed.set(heis_index(c, yz));
  }
  out.level = {I, module_closure(c, seed, 1)};
  std::string why;
  if (out.valid && !is_odd_form_ideal(fr, out.level, &why)) {
    out.valid = false;
    out.why = why;
  }
  return out;
}

// ---------------------------------------------------------------------------
// exponents

enum class ExponentMode { single, chain };

/// Single step: 12 (n = 3) or 10 (n >= 4). Chain of defect d:
/// (12^d - 1)/11 - 1 resp. (10^d - 1)/9 - 1.
inline long long k_exponent(int n, int d, ExponentMode mode) {
  if (n < 3) throw Error(Errc::bad_arguments, "n must be at least 3");
  if (d < 1) throw Error(Errc::bad_arguments, "d must be at least 1");
  const long long base = n == 3 ? 12 : 10;
  if (mode == ExponentMode::single) return base;
  if (d > 16) throw Error(Errc::bad_arguments, "defect too large");
  long long p = 1;
  for (int i = 0; i < d; ++i) p *= base;
  return (p - 1) / (base - 1) - 1;
}

// ---------------------------------------------------------------------------
// sandwich

struct LevelReport {
  OddFormIdeal lower, upper;
  bool lower_valid = true, upper_valid = true;
  bool eu_in_H = false, H_in_CU = false, lower_in_upper = false;
  bool closure_in_H = false, star_in_lower = false, upper_in_colon = false, forms_agree = false;
  bool hypothesis = false;
  bool sandwich_ok = false;
  std::size_t order = 0;
  std::size_t generators_checked = 0;
  long long k = 0;
};

/// Both inclusions of the sandwich for H, with I (default: the ideal of U(H))
/// raised to the k-th power, and the equivalent level formulations.
template <class A>
LevelReport sandwich_check(const FormRing& fr, const GroupSet<A>& h, const std::vector<Mat>& ambient,
                           long long k, const std::optional<Ideal>& ictx = std::nullopt) {
  const auto& c = fr.ctx;
  LevelReport rep;
  rep.k = k;
  rep.order = h.size();
  rep.upper = upper_level(fr, h);
  rep.upper_valid = is_odd_form_ideal(fr, rep.upper);
  const LowerLevel low = lower_level(fr, h, ambient);
  rep.lower = low.level;
  rep.lower_valid = low.valid;

  const Ideal I = ictx ? *ictx : rep.upper.ideal;
  const Ideal Ik = ideal_power(c, I, static_cast<int>(std::min<long long>(k, 1 << 20)));
  const OddFormIdeal target = off_star(fr, rep.upper, Ik);

  const auto gens = eu_generators(fr, target);
  rep.generators_checked = gens.size();
  rep.eu_in_H = std::all_of(gens.begin(), gens.end(), [&](const Mat& g) { return h.contains_dense(g); });

  const LevelTester cu(fr, rep.upper);
  const auto& alg = h.algebra();
  rep.H_in_CU = std::all_of(h.elements().begin(), h.elements().end(),
                            [&](const auto& e) { return cu.cu(alg.to_dense(e)); });
  rep.lower_in_upper = off_subset(rep.lower, rep.upper);

  rep.closure_in_H = normal_closure_inside(h, gens, ambient, low.normal_shortcut);
  rep.star_in_lower = off_subset(target, rep.lower);
  rep.upper_in_colon = off_subset(rep.upper, off_colon(fr, rep.lower, Ik));
  rep.forms_agree = rep.closure_in_H == rep.star_in_lower && rep.star_in_lower == rep.upper_in_colon;

  const OddFormIdeal hyp{I, omega_min(fr, I)};
  rep.hypothesis = normalised_by(h, eu_generators(fr, hyp));
  rep.sandwich_ok = rep.eu_in_H && rep.H_in_CU && rep.lower_in_upper && rep.forms_agree &&
                    rep.lower_valid && rep.upper_valid;
  return rep;
}

/// {g^{-1} h g : h in H}
template <class A>
GroupSet<A> conjugate_set(const GroupSet<A>& h, const Mat& g) {
  const auto& alg = h.algebra();
  const auto gv = alg.from_dense(g), gi = alg.inv(gv);
  GroupSet<A> out(alg);
  out.reserve(h.size());
  for (const auto& e : h.elements()) out.insert(alg.mul(alg.mul(gi, e), gv));
  for (const Mat& m : h.generators) out.generators.push_back(alg.to_dense(alg.mul(alg.mul(gi, alg.from_dense(m)), gv)));
  return out;
}

/// U(H) == U(H^tau) for each tau.
template <class A>
bool conjugation_invariance_check(const FormRing& fr, const GroupSet<A>& h, const std::vector<Mat>& taus) {
  const OddFormIdeal u = upper_level(fr, h);
  for (const Mat& t : taus)
    if (!(upper_level(fr, conjugate_set(h, t)) == u)) return false;
  return true;
}

/// Every odd form ideal P with H <= CU(P) contains U(H).
template <class A>
bool minimality_check(const FormRing& fr, const GroupSet<A>& h, std::size_t* admissible = nullptr) {
  const OddFormIdeal u = upper_level(fr, h);
  const auto& alg = h.algebra();
  std::size_t adm = 0;
  bool ok = true;
  for (const OddFormIdeal& p : enumerate_odd_form_ideals(fr)) {
    const LevelTester t(fr, p);
    const bool all = std::all_of(h.elements().begin(), h.elements().end(),
                                 [&](const auto& e) { return t.cu(alg.to_dense(e)); });
    if (!all) continue;
    ++adm;
    if (!off_subset(u, p)) ok = false;
  }
  if (admissible) *admissible = adm;
  return ok;
}

}  // namespace oddform
