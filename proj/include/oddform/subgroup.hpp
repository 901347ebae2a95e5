#pragma once

// Finite subgroups as hashed element sets: generator lists for EU(I, Omega),
// closure and normal closure by level-synchronous BFS, and the membership
// predicates of the principal, normalised and full congruence subgroups.

#include <absl/container/flat_hash_set.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "oddform/formideal.hpp"
#include "oddform/packed.hpp"
#include "oddform/unitary.hpp"

namespace oddform {

// ---------------------------------------------------------------------------
// algebras: the element representation used by GroupSet

template <int N>
struct PackedAlgebra {
  using value_type = PackedF2<N>;
  const HermitianCtx* ctx;

  value_type one() const { return value_type::identity(); }
  value_type mul(value_type a, value_type b) const { return a * b; }
  value_type inv(value_type a) const {
    bool ok = false;
    value_type r = a.inverse(&ok);
    if (!ok) throw Error(Errc::not_invertible, "singular F2 matrix");
    return r;
  }
  value_type from_dense(const Mat& m) const { return pack<N>(*ctx, m); }
  Mat to_dense(value_type a) const { return unpack<N>(*ctx, a); }
};

struct DenseAlgebra {
  using value_type = Mat;
  const HermitianCtx* ctx;

  value_type one() const { return identity(*ctx, ctx->n()); }
  value_type mul(const Mat& a, const Mat& b) const { return oddform::mul(*ctx, a, b); }
  value_type inv(const Mat& a) const { return minv(*ctx, a); }
  value_type from_dense(const Mat& m) const { return m; }
  Mat to_dense(const Mat& a) const { return a; }
};

template <class A>
class GroupSet {
 public:
  using value_type = typename A::value_type;

  explicit GroupSet(A alg) : alg_(alg) {}

  const A& algebra() const { return alg_; }
  std::size_t size() const { return elems_.size(); }
  const std::vector<value_type>& elements() const { return elems_; }
  bool contains(const value_type& g) const { return index_.contains(g); }
  bool contains_dense(const Mat& m) const { return contains(alg_.from_dense(m)); }

  std::vector<Mat> generators;  // as supplied, dense

  /// Inserts if absent; true when new.
  bool insert(const value_type& g) {
    if (!index_.insert(g).second) return false;
    elems_.push_back(g);
    return true;
  }
  void reserve(std::size_t k) {
    index_.reserve(k);
    elems_.reserve(k);
  }

 private:
  A alg_;
  std::vector<value_type> elems_;  // discovery order
  absl::flat_hash_set<value_type, std::hash<value_type>> index_;
};

/// Worker count: explicit value, else ODDFORM_THREADS, else hardware concurrency.
inline unsigned worker_count(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ODDFORM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct ClosureOptions {
  std::size_t budget = 8'000'000;
  unsigned threads = 0;
};

/// BFS from `start`; each element h has `moves` successors move(h, k).
/// Candidates are generated in parallel against the previous level's set and
/// merged in frontier order, so the result is independent of the worker count.
template <class A, class Move>
void bfs_fill(GroupSet<A>& g, const std::vector<typename A::value_type>& start, std::size_t moves,
              Move&& move, const ClosureOptions& opt) {
  using V = typename A::value_type;
  std::vector<V> frontier;
  for (const V& s : start)
    if (g.insert(s)) frontier.push_back(s);
  if (g.size() > opt.budget) throw BudgetExceeded(g.size());
  const unsigned T = worker_count(opt.threads);

  while (!frontier.empty()) {
    const std::size_t chunks = std::min<std::size_t>(T, frontier.size());
    std::vector<std::vector<V>> found(chunks);
    auto work = [&](std::size_t w) {
      const std::size_t lo = frontier.size() * w / chunks, hi = frontier.size() * (w + 1) / chunks;
      auto& out = found[w];
      for (std::size_t f = lo; f < hi; ++f)
        for (std::size_t k = 0; k < moves; ++k) {
          V cand = move(frontier[f], k);
          if (!g.contains(cand)) out.push_back(std::move(cand));
        }
    };
    if (chunks == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < chunks; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    std::vector<V> next;
    for (auto& part : found)
      for (V& cand : part)
        if (g.insert(cand)) {
          next.push_back(std::move(cand));
          if (g.size() > opt.budget) throw BudgetExceeded(g.size());
        }
    frontier = std::move(next);
  }
}

template <class A>
std::vector<typename A::value_type> with_inverses(const A& alg, const std::vector<Mat>& gens) {
  using V = typename A::value_type;
  std::vector<V> out;
  auto add = [&](const V& v) {
    if (v == alg.one()) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const Mat& m : gens) {
    V v = alg.from_dense(m);
    add(v);
    add(alg.inv(v));
  }
  return out;
}

/// Subgroup generated by `gens`: closure of {e} under left multiplication by
/// the generators and their inverses.
template <class A>
GroupSet<A> closure(const A& alg, const std::vector<Mat>& gens, const ClosureOptions& opt = {}) {
  GroupSet<A> g(alg);
  g.generators = gens;
  const auto moves = with_inverses(alg, gens);
  bfs_fill(g, {alg.one()}, moves.size(),
           [&](const auto& h, std::size_t k) { return alg.mul(moves[k], h); }, opt);
  return g;
}

/// Normal closure of `seed` under conjugation by the group generated by
/// `ambient`: closure of {e} under right multiplication by seed^{+-1} and
/// conjugation by ambient^{+-1}.
template <class A>
GroupSet<A> normal_closure(const A& alg, const std::vector<Mat>& seed, const std::vector<Mat>& ambient,
                           const ClosureOptions& opt = {}) {
  using V = typename A::value_type;
  GroupSet<A> g(alg);
  g.generators = seed;
  const auto s = with_inverses(alg, seed);
  const auto a = with_inverses(alg, ambient);
  std::vector<V> ainv;
  for (const V& x : a) ainv.push_back(alg.inv(x));
  bfs_fill(g, {alg.one()}, s.size() + a.size(),
           [&](const V& h, std::size_t k) {
             if (k < s.size()) return alg.mul(h, s[k]);
             const std::size_t q = k - s.size();
             return alg.mul(alg.mul(a[q], h), ainv[q]);
           },
           opt);
  return g;
}

/// Element-set equality of two group sets.
template <class A>
bool same_elements(const GroupSet<A>& x, const GroupSet<A>& y) {
  if (x.size() != y.size()) return false;
  return std::all_of(x.elements().begin(), x.elements().end(), [&](const auto& e) { return y.contains(e); });
}

template <class A>
bool is_subset(const GroupSet<A>& x, const GroupSet<A>& y) {
  return std::all_of(x.elements().begin(), x.elements().end(), [&](const auto& e) { return y.contains(e); });
}

// ---------------------------------------------------------------------------
// generators

/// (R, Delta) as an odd form ideal of itself.
inline OddFormIdeal full_level(const FormRing& fr) {
  return {unit_ideal(fr.ctx), fr.delta.elements};
}

/// All nontrivial (I, Omega)-elementary transvections: T_ij(x), x in I, then
/// T_i(a), a in Omega^{-eps(i)}, in Theta order.
inline std::vector<Mat> eu_generators(const FormRing& fr, const OddFormIdeal& p) {
  const auto& c = fr.ctx;
  const int n = c.n();
  std::vector<Mat> out;
  const auto is = eset_elements(p.ideal.elements);
  for (auto [i, j] : short_index_pairs(n))
    for (Elem x : is)
      if (x != c.zero()) out.push_back(t_short(c, n, i, j, x));
  const HeisElem zero{c.zero(), c.zero()};
  for (int i : theta_hb(n))
    for (HeisElem a : hset_elements(c, signed_set(c, p.omega, -eps(i))))
      if (a != zero) out.push_back(t_extra_raw(c, n, i, a));
  return out;
}

// ---------------------------------------------------------------------------
// congruence subgroup membership

/// Membership tests at a fixed level (I, Omega) with the J-sets precomputed.
class LevelTester {
 public:
  LevelTester(const FormRing& fr, const OddFormIdeal& p)
      : fr_(fr), c_(fr.ctx), p_(p), n_(fr.ctx.n()), hb_(theta_hb(n_)),
        jd_(eset_elements(jdelta(c_, fr.delta.elements))),
        jo_(eset_elements(jdelta(c_, p.omega))),
        dl_(hset_elements(c_, fr.delta.elements)) {}

  const OddFormIdeal& level() const { return p_; }

  void require_unitary(const Mat& s) const {
    if (!is_unitary_l36(fr_, s)) throw Error(Errc::not_unitary, "matrix is not unitary");
  }

  bool in_omega(HeisElem a) const { return hset_contains(c_, p_.omega, a); }

  /// Q(sigma_{*0}) - (1, 0)
  HeisElem q0_shift(const Mat& s) const {
    return hdiff(c_, form_Q(c_, column(s, 0)), {c_.one(), c_.zero()});
  }

  /// Principal congruence subgroup.
  bool pcs(const Mat& s, bool check = false) const {
    if (check) require_unitary(s);
    for (int i : hb_)
      for (int j : hb_) {
        const Elem d = i == j ? c_.sub(s(i, j), c_.one()) : s(i, j);
        if (!p_.ideal.contains(d)) return false;
      }
    for (int j : hb_)
      if (!in_omega(form_Q(c_, column(s, j)))) return false;
    const HeisElem q = q0_shift(s);
    for (Elem a : jd_)
      if (!in_omega(hcirc(c_, q, a))) return false;
    return true;
  }

  /// Normalised principal congruence subgroup.
  bool nu(const Mat& s, bool check = false) const {
    if (check) require_unitary(s);
    if (jo_.size() <= 1) return true;  // J(Omega) = {0}
    return nu_half(s) && nu_half(minv(c_, s));
  }

  /// Full congruence subgroup: conditions (i)-(vii) together with nu.
  bool cu(const Mat& s, bool check = false) const {
    if (check) require_unitary(s);
    const auto& I = p_.ideal;
    for (int i : hb_)
      for (int j : hb_)
        if (i != j && !I.contains(s(i, j))) return false;  // (i)
    for (int i : hb_)
      for (int j : hb_)
        if (!I.contains(c_.sub(s(i, i), s(j, j)))) return false;  // (ii)
    for (int i : hb_)
      for (Elem a : jd_) {
        if (!I.contains(c_.mul(s(i, 0), a))) return false;                 // (iii)
        if (!I.contains(c_.mul(c_.bar(a), c_.mu(), s(0, i)))) return false;  // (iv)
        const Elem d = c_.sub(s(0, 0), s(i, i));
        for (Elem b : jd_)
          if (!I.contains(c_.mul(c_.bar(a), c_.mu(), d, b))) return false;  // (v)
      }
    for (int j : hb_)
      if (!in_omega(form_Q(c_, column(s, j)))) return false;  // (vi)
    const HeisElem q = q0_shift(s);
    for (int i : hb_)
      for (HeisElem yz : dl_) {  // (vii), left to right
        HeisElem v = hcirc(c_, q, yz.x);
        v = hplus(c_, v, yz);
        v = hplus(c_, v, hminus(c_, hcirc(c_, yz, s(i, i))));
        if (!in_omega(v)) return false;
      }
    return nu(s);
  }

 private:
  bool nu_half(const Mat& s) const {
    const HeisElem q = q0_shift(s);
    return std::all_of(jo_.begin(), jo_.end(), [&](Elem x) { return in_omega(hcirc(c_, q, x)); });
  }

  const FormRing& fr_;
  const HermitianCtx& c_;
  OddFormIdeal p_;
  int n_;
  std::vector<int> hb_;
  std::vector<Elem> jd_, jo_;
  std::vector<HeisElem> dl_;
};

inline bool membership_pcs(const FormRing& fr, const Mat& s, const OddFormIdeal& p) {
  return LevelTester(fr, p).pcs(s, true);
}
inline bool membership_nu(const FormRing& fr, const Mat& s, const OddFormIdeal& p) {
  return LevelTester(fr, p).nu(s, true);
}
inline bool membership_cu(const FormRing& fr, const Mat& s, const OddFormIdeal& p) {
  return LevelTester(fr, p).cu(s, true);
}

template <class A>
bool membership(const GroupSet<A>& g, const Mat& s) {
  return g.contains_dense(s);
}

// ---------------------------------------------------------------------------
// classical order oracle

/// |Sp_{2n}(q)| = q^{n^2} prod_{i=1}^{n} (q^{2i} - 1)
inline unsigned long long symplectic_order(unsigned q, unsigned n) {
  unsigned long long r = 1;
  for (unsigned k = 0; k < n * n; ++k) r *= q;
  unsigned long long qp = 1;
  for (unsigned i = 1; i <= n; ++i) {
    qp *= static_cast<unsigned long long>(q) * q;
    r *= qp - 1;
  }
  return r;
}

/// |Omega^+_{2n}(q)| for even q: q^{n(n-1)} (q^n - 1) prod_{i=1}^{n-1} (q^{2i} - 1)
inline unsigned long long omega_plus_order_even_q(unsigned q, unsigned n) {
  unsigned long long r = 1;
  for (unsigned k = 0; k < n * (n - 1); ++k) r *= q;
  unsigned long long qn = 1;
  for (unsigned k = 0; k < n; ++k) qn *= q;
  r *= qn - 1;
  unsigned long long qp = 1;
  for (unsigned i = 1; i < n; ++i) {
    qp *= static_cast<unsigned long long>(q) * q;
    r *= qp - 1;
  }
  return r;
}

}  // namespace oddform
