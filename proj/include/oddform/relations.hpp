#pragma once

// Relation suite for elementary transvections (S1)-(SE2), the identities of the
// forms B, Q and the polarity map, and the ESD transvection suite.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oddform/report.hpp"
#include "oddform/unitary.hpp"

namespace oddform {

struct SuiteOptions {
  bool exhaustive = true;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
};

/// Transvections with their inverses (computed by minv), built once per key.
class TransvectionCache {
 public:
  explicit TransvectionCache(const HermitianCtx& c) : c_(c), n_(c.n()) {}

  const std::pair<Mat, Mat>& short_t(int i, int j, Elem x) {
    const std::uint64_t key = (1ull << 40) | (enc(i) << 32) | (enc(j) << 24) | x.v;
    return get(key, [&] { return t_short(c_, n_, i, j, x); });
  }
  const std::pair<Mat, Mat>& extra_t(int i, HeisElem a) {
    const std::uint64_t key = (2ull << 40) | (enc(i) << 32) | (std::uint64_t{a.x.v} << 16) | a.y.v;
    return get(key, [&] { return t_extra_raw(c_, n_, i, a); });
  }

 private:
  static std::uint64_t enc(int i) { return static_cast<std::uint64_t>(i + 64); }
  template <class F>
  const std::pair<Mat, Mat>& get(std::uint64_t key, F&& make) {
    auto it = map_.find(key);
    if (it == map_.end()) {
      Mat m = make();
      Mat mi = minv(c_, m);
      it = map_.emplace(key, std::make_pair(std::move(m), std::move(mi))).first;
    }
    return it->second;
  }
  const HermitianCtx& c_;
  int n_;
  std::unordered_map<std::uint64_t, std::pair<Mat, Mat>> map_;
};

/// Runs `body(coords)` over the mixed-radix space `dims`: every point when
/// exhaustive, otherwise `samples` seeded points.
inline void sweep(const std::vector<std::size_t>& dims, const SuiteOptions& opt,
                  const std::string& suite, const std::function<void(const std::vector<std::size_t>&)>& body) {
  std::size_t total = 1;
  for (auto d : dims) {
    if (d == 0) return;
    total *= d;
  }
  std::vector<std::size_t> co(dims.size());
  auto decode = [&](std::size_t code) {
    for (std::size_t k = 0; k < dims.size(); ++k) {
      co[k] = code % dims[k];
      code /= dims[k];
    }
  };
  if (opt.exhaustive) {
    for (std::size_t code = 0; code < total; ++code) {
      decode(code);
      body(co);
    }
    return;
  }
  for (std::size_t s = 0; s < opt.samples; ++s) {
    auto rng = case_rng(opt.seed, suite, s);
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    decode(pick(rng));
    body(co);
  }
}

namespace detail {

struct RelEnv {
  const FormRing& fr;
  const HermitianCtx& c;
  int n;
  std::vector<Elem> ring;
  std::vector<int> hb;
  std::vector<std::pair<int, int>> pairs;
  std::array<std::vector<HeisElem>, 2> params;  // [0]: Delta^{-1}, [1]: Delta
  TransvectionCache cache;

  explicit RelEnv(const FormRing& f)
      : fr(f), c(f.ctx), n(f.ctx.n()), ring(c.elements()), hb(theta_hb(n)),
        pairs(short_index_pairs(n)), cache(c) {
    params[1] = hset_elements(c, f.delta.elements);
    params[0] = hset_elements(c, signed_set(c, f.delta.elements, -1));
  }
  /// Delta^{-eps(i)}
  const std::vector<HeisElem>& extra_params(int i) const { return params[eps(i) > 0 ? 0 : 1]; }

  const Mat& T(int i, int j, Elem x) { return cache.short_t(i, j, x).first; }
  const Mat& Ti(int i, int j, Elem x) { return cache.short_t(i, j, x).second; }
  const Mat& E(int i, HeisElem a) { return cache.extra_t(i, a).first; }
  const Mat& Ei(int i, HeisElem a) { return cache.extra_t(i, a).second; }
  Mat comm(const Mat& a, const Mat& ai, const Mat& b, const Mat& bi) const { return mul(c, a, b, ai, bi); }
  Elem lp(int e) const { return c.lambda_power(e); }
  json el(Elem x) const { return c.format(x); }
  json he(HeisElem a) const { return heis_json(c, a); }
};

}  // namespace detail

/// (S1)-(SE2) over every admissible index tuple and value.
inline Tally run_relation_suite(const FormRing& fr, const SuiteOptions& opt = {}) {
  detail::RelEnv env(fr);
  const auto& c = env.c;
  const std::size_t R = env.ring.size();
  Tally t;

  sweep({env.pairs.size(), R}, opt, "S1", [&](const auto& co) {
    auto [i, j] = env.pairs[co[0]];
    Elem x = env.ring[co[1]];
    Elem y = c.neg(short_partner(c, i, j, x));
    t.record("S1", env.T(i, j, x) == env.T(-j, -i, y),
             [&] { return json{{"i", i}, {"j", j}, {"x", env.el(x)}}; });
  });

  sweep({env.pairs.size(), R, R}, opt, "S2", [&](const auto& co) {
    auto [i, j] = env.pairs[co[0]];
    Elem x = env.ring[co[1]], y = env.ring[co[2]];
    t.record("S2", mul(c, env.T(i, j, x), env.T(i, j, y)) == env.T(i, j, c.add(x, y)),
             [&] { return json{{"i", i}, {"j", j}, {"x", env.el(x)}, {"y", env.el(y)}}; });
  });

  std::vector<std::array<int, 4>> quads;
  for (auto [i, j] : env.pairs)
    for (auto [k, l] : env.pairs)
      if (k != j && k != -i && l != i && l != -j) quads.push_back({i, j, k, l});
  sweep({quads.size(), R, R}, opt, "S3", [&](const auto& co) {
    auto [i, j, k, l] = quads[co[0]];
    Elem x = env.ring[co[1]], y = env.ring[co[2]];
    Mat m = env.comm(env.T(i, j, x), env.Ti(i, j, x), env.T(k, l, y), env.Ti(k, l, y));
    t.record("S3", m == identity(c, env.n), [&] {
      return json{{"i", i}, {"j", j}, {"k", k}, {"l", l}, {"x", env.el(x)}, {"y", env.el(y)}};
    });
  });

  std::vector<std::array<int, 3>> triples;
  for (auto [i, j] : env.pairs)
    for (int k : env.hb)
      if (k != j && k != -j && k != i && k != -i) triples.push_back({i, j, k});
  sweep({triples.size(), R, R}, opt, "S4", [&](const auto& co) {
    auto [i, j, k] = triples[co[0]];
    Elem x = env.ring[co[1]], y = env.ring[co[2]];
    Mat m = env.comm(env.T(i, j, x), env.Ti(i, j, x), env.T(j, k, y), env.Ti(j, k, y));
    t.record("S4", m == env.T(i, k, c.mul(x, y)), [&] {
      return json{{"i", i}, {"j", j}, {"k", k}, {"x", env.el(x)}, {"y", env.el(y)}};
    });
  });

  sweep({env.pairs.size(), R, R}, opt, "S5", [&](const auto& co) {
    auto [i, j] = env.pairs[co[0]];
    Elem x = env.ring[co[1]], y = env.ring[co[2]];
    Mat m = env.comm(env.T(i, j, x), env.Ti(i, j, x), env.T(j, -i, y), env.Ti(j, -i, y));
    const int e = eps(i);
    Elem z = c.sub(c.mul(x, y), c.mul(env.lp((-1 - e) / 2), c.bar(y), c.bar(x), env.lp((1 - e) / 2)));
    t.record("S5", m == t_extra_raw(c, env.n, i, {c.zero(), z}),
             [&] { return json{{"i", i}, {"j", j}, {"x", env.el(x)}, {"y", env.el(y)}}; });
  });

  const std::size_t P = env.params[1].size();
  sweep({env.hb.size(), P, P}, opt, "E1", [&](const auto& co) {
    const int i = env.hb[co[0]];
    const auto& ps = env.extra_params(i);
    HeisElem a = ps[co[1]], b = ps[co[2]];
    t.record("E1", mul(c, env.E(i, a), env.E(i, b)) == env.E(i, hplus(c, a, b, -eps(i))),
             [&] { return json{{"i", i}, {"a", env.he(a)}, {"b", env.he(b)}}; });
  });

  sweep({env.pairs.size(), P, P}, opt, "E2", [&](const auto& co) {
    auto [i, j] = env.pairs[co[0]];
    HeisElem a = env.extra_params(i)[co[1]], b = env.extra_params(j)[co[2]];
    Mat m = env.comm(env.E(i, a), env.Ei(i, a), env.E(j, b), env.Ei(j, b));
    Elem z = c.neg(c.mul(env.lp(-(1 + eps(i)) / 2), c.bar(a.x), c.mu(), b.x));
    t.record("E2", m == env.T(i, -j, z),
             [&] { return json{{"i", i}, {"j", j}, {"a", env.he(a)}, {"b", env.he(b)}}; });
  });

  sweep({env.hb.size(), P, P}, opt, "E3", [&](const auto& co) {
    const int i = env.hb[co[0]];
    const auto& ps = env.extra_params(i);
    HeisElem a = ps[co[1]], b = ps[co[2]];
    Mat m = env.comm(env.E(i, a), env.Ei(i, a), env.E(i, b), env.Ei(i, b));
    Elem d = c.sub(c.mul(c.bar(a.x), c.mu(), b.x), c.mul(c.bar(b.x), c.mu(), a.x));
    Elem z = c.neg(c.mul(env.lp(-(1 + eps(i)) / 2), d));
    t.record("E3", m == t_extra_raw(c, env.n, i, {c.zero(), z}),
             [&] { return json{{"i", i}, {"a", env.he(a)}, {"b", env.he(b)}}; });
  });

  std::vector<std::array<int, 3>> se1;
  for (auto [i, j] : env.pairs)
    for (int k : env.hb)
      if (k != j && k != -i) se1.push_back({i, j, k});
  sweep({se1.size(), R, P}, opt, "SE1", [&](const auto& co) {
    auto [i, j, k] = se1[co[0]];
    Elem x = env.ring[co[1]];
    HeisElem a = env.extra_params(k)[co[2]];
    Mat m = env.comm(env.T(i, j, x), env.Ti(i, j, x), env.E(k, a), env.Ei(k, a));
    t.record("SE1", m == identity(c, env.n), [&] {
      return json{{"i", i}, {"j", j}, {"k", k}, {"x", env.el(x)}, {"a", env.he(a)}};
    });
  });

  sweep({env.pairs.size(), R, P}, opt, "SE2", [&](const auto& co) {
    auto [i, j] = env.pairs[co[0]];
    Elem x = env.ring[co[1]];
    HeisElem a = env.extra_params(j)[co[2]];
    Mat m = env.comm(env.T(i, j, x), env.Ti(i, j, x), env.E(j, a), env.Ei(j, a));
    const Elem s = c.mul(env.lp((eps(j) - 1) / 2), c.bar(x), env.lp((1 - eps(i)) / 2));
    Mat rhs = mul(c, env.T(j, -i, c.mul(a.y, s)),
                  t_extra_raw(c, env.n, i, {c.mul(a.x, s), c.mul(x, a.y, s)}));
    t.record("SE2", m == rhs,
             [&] { return json{{"i", i}, {"j", j}, {"x", env.el(x)}, {"a", env.he(a)}}; });
  });

  return t;
}

/// Unitarity of every short and extra short transvection of `fr` under both
/// predicates, judged against `judge` (defaults to `fr` itself).
inline Tally run_constructor_suite(const FormRing& fr, const SuiteOptions& opt = {},
                                   const FormRing* judge = nullptr) {
  detail::RelEnv env(fr);
  const FormRing& jf = judge ? *judge : fr;
  Tally t;
  sweep({env.pairs.size(), env.ring.size()}, opt, "ctor.short", [&](const auto& co) {
    auto [i, j] = env.pairs[co[0]];
    Elem x = env.ring[co[1]];
    const Mat& m = env.T(i, j, x);
    auto params = [&] { return json{{"i", i}, {"j", j}, {"x", env.el(x)}}; };
    t.record("unitary.l36.short", is_unitary_l36(jf, m), params);
    t.record("unitary.def.short", is_unitary_def(jf, m, 256, opt.seed), params);
  });
  sweep({env.hb.size(), env.params[1].size()}, opt, "ctor.extra", [&](const auto& co) {
    const int i = env.hb[co[0]];
    HeisElem a = env.extra_params(i)[co[1]];
    const Mat& m = env.E(i, a);
    auto params = [&] { return json{{"i", i}, {"a", env.he(a)}}; };
    t.record("unitary.l36.extra", is_unitary_l36(jf, m), params);
    t.record("unitary.def.extra", is_unitary_def(jf, m, 256, opt.seed), params);
  });
  return t;
}

inline Vec random_vec(const HermitianCtx& c, int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  Vec v = zero_vec(c, n);
  for (auto& x : v.e) x = Elem{static_cast<std::uint16_t>(pick(rng))};
  return v;
}

/// Identities of B, Q and the polarity map on seeded vectors, scalars and
/// unitary matrices (random elementary products).
inline Tally run_form_identities(const FormRing& fr, std::size_t cases, std::uint64_t seed) {
  const auto& c = fr.ctx;
  const int n = c.n();
  const HSet dmin = delta_min_set(c);
  Tally t;
  for (std::size_t k = 0; k < cases; ++k) {
    auto rng = case_rng(seed, "forms", k);
    const Vec u = random_vec(c, n, rng), v = random_vec(c, n, rng);
    std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
    const Elem x{static_cast<std::uint16_t>(pick(rng))}, y{static_cast<std::uint16_t>(pick(rng))};
    auto params = [&] { return json{{"case", k}, {"u", vec_json(c, u)}, {"v", vec_json(c, v)}}; };

    t.record("B.hermitian", form_B(c, u, v) == c.mul(c.bar(form_B(c, v, u)), c.lambda()), params);
    t.record("B.sesquilinear",
             form_B(c, vscale(c, u, x), vscale(c, v, y)) == c.mul(c.bar(x), form_B(c, u, v), y), params);
    t.record("B.additive",
             form_B(c, vadd(c, u, v), v) == c.add(form_B(c, u, v), form_B(c, v, v)), params);
    t.record("Q.scalar", form_Q(c, vscale(c, u, x)) == hcirc(c, form_Q(c, u), x), params);
    HeisElem sum = hplus(c, hplus(c, form_Q(c, u), form_Q(c, v)), {c.zero(), form_B(c, u, v)});
    t.record("Q.sum", q_congruent(c, form_Q(c, vadd(c, u, v)), sum, dmin), params);
    t.record("Q.trace", trace(c, form_Q(c, u)) == form_B(c, u, u), params);
    t.record("polarity.pairing", [&] {
      const Vec pu = polarity(c, u);
      Elem s = c.zero();
      for (std::size_t p = 0; p < u.e.size(); ++p) s = c.add(s, c.mul(pu.e[p], v.e[p]));
      return s == form_B(c, u, v);
    }(), params);
    t.record("polarity.linear",
             polarity(c, vadd(c, u, v)) == vadd(c, polarity(c, u), polarity(c, v)) &&
                 polarity(c, vscale(c, u, x)) == [&] {
                   Vec r = polarity(c, u);
                   for (auto& e : r.e) e = c.mul(c.bar(x), e);
                   return r;
                 }(),
             params);

    const Mat s = random_elementary_product(fr, 6, rng);
    t.record("polarity.unitary",
             polarity(c, apply(c, s, u)) == row_apply(c, polarity(c, u), minv(c, s)),
             [&] { return json{{"case", k}, {"sigma", mat_json(c, s)}, {"u", vec_json(c, u)}}; });
  }
  return t;
}

/// All valid (j, u, x) for ESD transvections at level p: u_j = 0, u_hb in I,
/// Q(u)^{eps(j)} + (0, x) in Omega^{eps(j)}.
struct EsdCase {
  int j;
  Vec u;
  Elem x;
};

inline bool esd_valid(const FormRing& fr, const OddFormIdeal& p, int j, const Vec& u, Elem x) {
  const auto& c = fr.ctx;
  if (u(j) != c.zero()) return false;
  for (int i : theta_hb(u.n))
    if (!p.ideal.contains(u(i))) return false;
  const int k = eps(j);
  HeisElem a = hplus(c, twist_pow(c, form_Q(c, u), k), {c.zero(), x}, k);
  return hset_contains(c, signed_set(c, p.omega, k), a);
}

/// Factorisation, unitarity, inverse and conjugation identities of ESD
/// transvections. Exhaustive over (j, u, x) when |R|^{2n} is small, otherwise
/// `opt.samples` seeded draws. `sigmas` supplies the conjugating matrices.
inline Tally run_esd_suite(const FormRing& fr, const OddFormIdeal& p, const std::vector<Mat>& sigmas,
                           const SuiteOptions& opt = {}) {
  const auto& c = fr.ctx;
  const int n = c.n();
  const auto hb = theta_hb(n);
  const std::size_t R = c.size();
  Tally t;
  auto check = [&](int j, const Vec& u, Elem x) {
    if (!esd_valid(fr, p, j, u, x)) {
      t.skip("esd.invalid");
      return;
    }
    auto params = [&] { return json{{"j", j}, {"u", vec_json(c, u)}, {"x", c.format(x)}}; };
    const Mat m = t_esd(fr, p, j, u, x);
    t.record("esd.factorization", m == esd_factorized(c, j, u, x), params);
    t.record("esd.unitary", is_unitary_l36(fr, m), params);
    if (x == c.zero()) {
      t.record("esd.inverse", minv(c, m) == esd_raw(c, j, vneg(c, u), c.zero()), params);
      for (std::size_t s = 0; s < sigmas.size(); ++s)
        t.record("esd.conjugation", conjugate_esd_formula_check(c, sigmas[s], j, u), [&] {
          json q = params();
          q["sigma"] = mat_json(c, sigmas[s]);
          return q;
        });
    }
  };
  // the 2n free coordinates: Theta minus {j}
  double space = 1;
  for (int k = 0; k < 2 * n + 1; ++k) space *= static_cast<double>(R);
  if (opt.exhaustive && space <= static_cast<double>(std::size_t{1} << 20)) {
    for (int j : hb) {
      std::vector<int> free;
      for (int i : theta_all(n))
        if (i != j) free.push_back(i);
      std::size_t total = 1;
      for (std::size_t k = 0; k < free.size(); ++k) total *= R;
      for (std::size_t code = 0; code < total; ++code) {
        Vec u = zero_vec(c, n);
        std::size_t z = code;
        for (int i : free) {
          u(i) = Elem{static_cast<std::uint16_t>(z % R)};
          z /= R;
        }
        for (Elem x : c.elements()) check(j, u, x);
      }
    }
    return t;
  }
  const auto is = eset_elements(p.ideal.elements);
  for (std::size_t s = 0; s < opt.samples; ++s) {
    auto rng = case_rng(opt.seed, "esd", s);
    std::uniform_int_distribution<std::size_t> pj(0, hb.size() - 1), pi(0, is.size() - 1), pr(0, R - 1);
    const int j = hb[pj(rng)];
    Vec u = zero_vec(c, n);
    for (int i : hb)
      if (i != j) u(i) = is[pi(rng)];
    u(0) = Elem{static_cast<std::uint16_t>(pr(rng))};
    // pick x so the parameter condition can hold: try every x in order from a random start
    const std::size_t start = pr(rng);
    bool done = false;
    for (std::size_t d = 0; d < R && !done; ++d) {
      Elem x{static_cast<std::uint16_t>((start + d) % R)};
      if (esd_valid(fr, p, j, u, x)) {
        check(j, u, x);
        done = true;
      }
    }
    if (!done) t.skip("esd.invalid");
  }
  return t;
}

}  // namespace oddform
