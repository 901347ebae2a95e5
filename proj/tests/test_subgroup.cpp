#include <random>

#include "fixtures.hpp"
#include "oddform/subgroup.hpp"

using namespace fx;

namespace {

using A7 = PackedAlgebra<7>;

// |Sp_6(2)| and |O^+_6(2)'| = |A_8| from their factorised orders
constexpr unsigned long long kSp6 = 512ull * 3 * 15 * 63;
constexpr unsigned long long kA8 = 40320ull / 2;

}  // namespace

TEST(Subgroup, Generators) {
  auto f = f2();
  EXPECT_EQ(eu_generators(fr_max(f), full_level(fr_max(f))).size(), 30u);
  EXPECT_EQ(eu_generators(fr_min(f), full_level(fr_min(f))).size(), 24u);
  EXPECT_TRUE(eu_generators(fr_max(f), zero_off(fr_max(f))).empty());
  for (const Mat& g : eu_generators(fr_max(z4()), full_level(fr_max(z4()))))
    EXPECT_TRUE(is_unitary_l36(fr_max(z4()), g));
}

TEST(Subgroup, PackedRoundTrip) {
  auto f = f2();
  std::mt19937_64 rng(2);
  const A7 alg{&f};
  for (int rep = 0; rep < 50; ++rep) {
    const Mat a = random_elementary_product(fr_max(f), 7, rng), b = random_elementary_product(fr_max(f), 7, rng);
    EXPECT_EQ(alg.to_dense(alg.from_dense(a)), a);
    EXPECT_EQ(alg.to_dense(alg.mul(alg.from_dense(a), alg.from_dense(b))), mul(f, a, b));
    EXPECT_EQ(alg.to_dense(alg.inv(alg.from_dense(a))), minv(f, a));
  }
  auto f4 = f2(4);
  const PackedAlgebra<9> alg9{&f4};
  const Mat a = random_elementary_product(fr_max(f4), 9, rng);
  EXPECT_EQ(alg9.to_dense(alg9.inv(alg9.from_dense(a))), minv(f4, a));
}

TEST(Subgroup, SmallClosures) {
  auto f = f2();
  const A7 alg{&f};
  EXPECT_EQ(closure(alg, {}).size(), 1u);
  const Mat t = t_short(f, 3, 1, 2, f.one());
  const auto g = closure(alg, {t});
  EXPECT_EQ(g.size(), 2u);
  EXPECT_TRUE(membership(g, identity(f, 3)));
  EXPECT_TRUE(membership(g, t));
  EXPECT_FALSE(membership(g, t_short(f, 3, 2, 1, f.one())));
  // T12 and T21 generate SL_2(2) = S_3
  EXPECT_EQ(closure(alg, {t, t_short(f, 3, 2, 1, f.one())}).size(), 6u);
  EXPECT_EQ(normal_closure(alg, {}, eu_generators(fr_max(f), full_level(fr_max(f)))).size(), 1u);
  // the dense engine agrees on a Z/4 subgroup
  auto z = z4();
  const DenseAlgebra dz{&z};
  EXPECT_EQ(closure(dz, {t_short(z, 3, 1, 2, z.one())}).size(), 4u);
}

TEST(Subgroup, BudgetIsEnforced) {
  auto f = f2();
  const A7 alg{&f};
  EXPECT_THROW(closure(alg, eu_generators(fr_max(f), full_level(fr_max(f))), {10, 1}), BudgetExceeded);
}

TEST(Subgroup, ElementaryGroupOrders) {
  EXPECT_EQ(symplectic_order(2, 3), kSp6);
  EXPECT_EQ(omega_plus_order_even_q(2, 3), kA8);
  auto f = f2();
  const A7 alg{&f};
  const auto lo = closure(alg, eu_generators(fr_min(f), full_level(fr_min(f))), {8'000'000, 1});
  EXPECT_EQ(lo.size(), kA8);
  const auto lo4 = closure(alg, eu_generators(fr_min(f), full_level(fr_min(f))), {8'000'000, 4});
  EXPECT_EQ(lo.elements(), lo4.elements());
  const auto hi = closure(alg, eu_generators(fr_max(f), full_level(fr_max(f))), {8'000'000, 2});
  EXPECT_EQ(hi.size(), kSp6);
  // the Delta_min group sits inside the Delta_max group
  EXPECT_TRUE(is_subset(lo, hi));
}

TEST(Subgroup, ClosureIsAGroup) {
  auto f = f2();
  const A7 alg{&f};
  const auto g = closure(alg, {t_short(f, 3, 1, 2, f.one()), t_short(f, 3, 2, -3, f.one()),
                               t_extra_raw(f, 3, 1, h(f, "0", "1"))});
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (int rep = 0; rep < 500; ++rep) {
    const auto a = g.elements()[pick(rng)], b = g.elements()[pick(rng)];
    EXPECT_TRUE(g.contains(alg.mul(a, b)));
    EXPECT_TRUE(g.contains(alg.inv(a)));
  }
}

TEST(Subgroup, NormalClosureIsNormal) {
  auto f = f2();
  const A7 alg{&f};
  const auto amb = eu_generators(fr_min(f), full_level(fr_min(f)));
  const auto n = normal_closure(alg, {t_short(f, 3, 1, 2, f.one())}, amb);
  // A_8 is simple
  EXPECT_EQ(n.size(), kA8);
  const auto one = normal_closure(alg, {identity(f, 3)}, amb);
  EXPECT_EQ(one.size(), 1u);
}

TEST(Subgroup, MembershipExamples) {
  auto z = z4();
  const FormRing fr = fr_max(z);
  const auto level2 = make_off(fr, ideal_closure(z, {e(z, "2")}), {h(z, "2", "2")});
  const LevelTester lt(fr, level2);
  for (Elem x : z.elements()) {
    const Mat t = t_short(z, 3, 1, 2, x);
    EXPECT_EQ(lt.pcs(t, true), level2.ideal.contains(x));
    EXPECT_EQ(lt.cu(t, true), level2.ideal.contains(x));
    EXPECT_TRUE(lt.nu(t, true));
  }
  EXPECT_TRUE(lt.pcs(identity(z, 3), true));
  EXPECT_TRUE(lt.cu(identity(z, 3), true));

  auto f = f2();
  Mat s = identity(f, 3);
  s(1, -1) = f.one();
  EXPECT_FALSE(membership_pcs(fr_max(f), s, zero_off(fr_max(f))));
  EXPECT_TRUE(membership_cu(fr_max(f), s, full_level(fr_max(f))));
  EXPECT_THROW(membership_pcs(fr_min(f), s, zero_off(fr_min(f))), Error);
}

TEST(Subgroup, CongruenceProperties) {
  std::mt19937_64 rng(6);
  for (const auto& fr : {fr_max(z4()), fr_min(z4()), fr_max(f2())}) {
    const auto& c = fr.ctx;
    const auto gens = eu_generators(fr, full_level(fr));
    for (const auto& p : enumerate_odd_form_ideals(fr)) {
      const LevelTester lt(fr, p);
      const auto lgens = eu_generators(fr, p);
      for (int rep = 0; rep < 40; ++rep) {
        Mat s = random_elementary_product(fr, 6, rng);
        EXPECT_TRUE(lt.nu(s));
        // products of level generators land in the principal subgroup
        Mat h = identity(c, 3);
        if (!lgens.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, lgens.size() - 1);
          for (int k = 0; k < 5; ++k) h = mul(c, h, lgens[pick(rng)]);
        }
        EXPECT_TRUE(lt.pcs(h));
        EXPECT_TRUE(lt.cu(h));
        for (const Mat& tau : {gens[rep % gens.size()], s}) EXPECT_TRUE(lt.pcs(mul(c, tau, h, minv(c, tau))));
        if (lt.pcs(s)) {
          EXPECT_TRUE(lt.cu(s));
        }
      }
    }
  }
}

TEST(Subgroup, FullLevelAcceptsEverything) {
  auto f = f2();
  const A7 alg{&f};
  const FormRing fr = fr_max(f);
  const LevelTester lt(fr, full_level(fr));
  const auto g = closure(alg, {t_short(f, 3, 1, 2, f.one()), t_short(f, 3, 2, -1, f.one()),
                               t_extra_raw(f, 3, -3, h(f, "0", "1"))});
  for (const auto& x : g.elements()) {
    EXPECT_TRUE(lt.cu(alg.to_dense(x)));
    EXPECT_TRUE(lt.pcs(alg.to_dense(x)));
  }
}
