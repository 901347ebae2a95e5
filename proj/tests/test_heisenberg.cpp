#include "fixtures.hpp"

using namespace fx;

namespace {

// Plain-integer Heisenberg law over Z/m with identity involution.
struct ZOracle {
  int m, mu;
  int md(int v) const { return ((v % m) + m) % m; }
  std::pair<int, int> plus(std::pair<int, int> a, std::pair<int, int> b) const {
    return {md(a.first + b.first), md(a.second + b.second - a.first * mu * b.first)};
  }
  int tr(std::pair<int, int> a, int lambda) const { return md(a.first * mu * a.first + a.second + a.second * lambda); }
};

std::vector<HSet> some_params(const HermitianCtx& c) {
  std::vector<HSet> out{delta_min_set(c), delta_max_set(c)};
  for (HeisElem g : hset_elements(c, delta_max_set(c))) out.push_back(param_closure(c, {g}).elements);
  return out;
}

}  // namespace

TEST(Heisenberg, PlusExamples) {
  auto z = z4();
  EXPECT_EQ(hplus(z, h(z, "1", "2"), h(z, "3", "1")), h(z, "0", "1"));
  const ZOracle o{4, 2};
  EXPECT_EQ(o.plus({1, 2}, {3, 1}), std::make_pair(0, 1));
  auto g = g3();
  EXPECT_EQ(hplus(g, h(g, "0+1*w", "0"), h(g, "0+1*w", "0"), -1), h(g, "0+2*w", "2"));
  for (const auto& c : {f2(), z4(), g3()})
    for (HeisElem a : hset_elements(c, ~empty_hset(c))) EXPECT_EQ(hplus(c, {c.zero(), c.zero()}, a), a);
}

TEST(Heisenberg, PlusMatchesIntegerOracleOverZ4) {
  auto z = z4();
  const ZOracle o{4, 2};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
          auto [p, q] = o.plus({a, b}, {x, y});
          const HeisElem got = hplus(z, {z.from_int(a), z.from_int(b)}, {z.from_int(x), z.from_int(y)});
          EXPECT_EQ(got, (HeisElem{z.from_int(p), z.from_int(q)}));
        }
}

TEST(Heisenberg, MinusCircTrace) {
  auto z = z4();
  auto f = f2();
  EXPECT_EQ(hminus(z, h(z, "1", "1")), h(z, "3", "1"));
  EXPECT_EQ(hminus(f, h(f, "1", "0")), h(f, "1", "1"));
  EXPECT_EQ(hminus(z, h(z, "0", "0")), h(z, "0", "0"));
  EXPECT_EQ(hcirc(z, h(z, "1", "1"), e(z, "2")), h(z, "2", "0"));
  EXPECT_EQ(trace(f, h(f, "0", "1")), f.zero());
  EXPECT_EQ(trace(f, h(f, "1", "0")), f.one());
  EXPECT_EQ(trace(z, h(z, "1", "1")), z.zero());
  EXPECT_EQ(ZOracle({4, 2}).tr({1, 1}, 1), 0);
}

TEST(Heisenberg, GroupAndModuleLaws) {
  for (const auto& c : {f2(), z4(), g3(), z4_lambda3()}) {
    const auto all = hset_elements(c, ~empty_hset(c));
    const HeisElem zero{c.zero(), c.zero()};
    for (int k : {1, -1})
      for (HeisElem a : all) {
        EXPECT_EQ(hplus(c, a, hminus(c, a, k), k), zero);
        EXPECT_EQ(hplus(c, hminus(c, a, k), a, k), zero);
        EXPECT_EQ(hcirc(c, a, c.one()), a);
        EXPECT_EQ(hcirc(c, a, c.zero()), zero);
        for (HeisElem b : all) {
          EXPECT_EQ(trace(c, hplus(c, a, b, k), k), c.add(trace(c, a, k), trace(c, b, k)));
          for (Elem r : c.elements())
            EXPECT_EQ(hcirc(c, hplus(c, a, b, k), r), hplus(c, hcirc(c, a, r), hcirc(c, b, r), k));
        }
        for (Elem r : c.elements()) EXPECT_EQ(trace(c, hcirc(c, a, r), k), c.mul(c.bar(r), trace(c, a, k), r));
      }
  }
}

TEST(Heisenberg, Associativity) {
  for (const auto& c : {f2(), z4(), g3()}) {
    const auto all = hset_elements(c, ~empty_hset(c));
    for (HeisElem a : all)
      for (HeisElem b : all)
        for (HeisElem d : all) EXPECT_EQ(hplus(c, hplus(c, a, b), d), hplus(c, a, hplus(c, b, d)));
  }
}

TEST(Heisenberg, DeltaBounds) {
  auto f = f2();
  auto z = z4();
  EXPECT_EQ(delta_min_set(f).count(), 1u);
  EXPECT_EQ(delta_max_set(f).count(), 2u);
  EXPECT_TRUE(hset_contains(f, delta_max_set(f), h(f, "0", "1")));
  // oracle: trace-zero pairs over Z/4 are those with y = x mod 2
  const ZOracle o{4, 2};
  std::size_t cnt = 0;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (o.tr({x, y}, 1) == 0) {
        ++cnt;
        EXPECT_EQ(x % 2, y % 2);
        EXPECT_TRUE(hset_contains(z, delta_max_set(z), {z.from_int(x), z.from_int(y)}));
      }
  EXPECT_EQ(cnt, 8u);
  EXPECT_EQ(delta_max_set(z).count(), 8u);
  for (const auto& c : {f2(), z4(), g3(), z4_lambda3()})
    for (int k : {1, -1}) EXPECT_TRUE(delta_min_set(c, k).is_subset_of(delta_max_set(c, k)));
}

TEST(Heisenberg, ParamClosure) {
  auto f = f2();
  auto z = z4();
  EXPECT_EQ(param_closure(f, {}).elements, delta_min_set(f));
  EXPECT_EQ(param_closure(f, {h(f, "0", "1")}).elements, delta_max_set(f));
  const HSet d = param_closure(z, {h(z, "1", "1")}).elements;
  for (Elem r : z.elements()) EXPECT_TRUE(hset_contains(z, d, hcirc(z, h(z, "1", "1"), r)));
  EXPECT_THROW(param_closure(f, {h(f, "1", "0")}), Error);
  for (const auto& c : {f2(), z4(), g3()})
    for (const HSet& s : some_params(c)) {
      EXPECT_TRUE(delta_min_set(c).is_subset_of(s));
      EXPECT_TRUE(s.is_subset_of(delta_max_set(c)));
      EXPECT_EQ(module_closure(c, s, 1), s);
    }
}

TEST(Heisenberg, Twist) {
  auto f = f2();
  EXPECT_EQ(twist_elem(f, h(f, "0", "1")), h(f, "0", "1"));
  auto z = z4_lambda3();
  EXPECT_EQ(twist_elem(z, h(z, "1", "1")), h(z, "1", "3"));
  for (const auto& c : {f2(), z4(), g3(), z4_lambda3()}) {
    EXPECT_EQ(twist_param(c, delta_min(c)).elements, delta_min_set(c, -1));
    EXPECT_EQ(twist_set(c, delta_max_set(c)), delta_max_set(c, -1));
    for (const HSet& s : some_params(c)) EXPECT_EQ(bar_second(c, s), twist_set(c, s));
  }
}

TEST(Heisenberg, JDelta) {
  auto f = f2();
  auto z = z4();
  EXPECT_EQ(jdelta(f, delta_max_set(f)).count(), 1u);
  EXPECT_EQ(jdelta(z, delta_max_set(z)).count(), 4u);
  for (const auto& c : {f2(), z4(), g3()}) EXPECT_EQ(jdelta(c, delta_min_set(c)).count(), 1u);
}

TEST(Heisenberg, SumExpansion) {
  auto f = f2();
  EXPECT_TRUE(sum_expansion_check(f, h(f, "0", "1"), {f.one(), f.one()}, 1));
  for (const auto& c : {z4(), g3()}) {
    const auto els = c.elements();
    for (HeisElem a : hset_elements(c, delta_max_set(c)))
      for (int k : {1, -1}) {
        for (Elem x : els) EXPECT_TRUE(sum_expansion_check(c, a, {x}, k));
        for (Elem x : els)
          for (Elem y : els) {
            EXPECT_TRUE(sum_expansion_check(c, a, {x, y}, k));
            if (c.size() <= 4) {
              for (Elem w : els) EXPECT_TRUE(sum_expansion_check(c, a, {x, y, w}, k));
            }
          }
      }
  }
}
