#include "fixtures.hpp"
#include "oddform/relations.hpp"

using namespace fx;

namespace {

void expect_clean(const Tally& t, const std::vector<std::string>& checks) {
  EXPECT_EQ(t.failures(), 0u) << t.to_json()["findings"].dump();
  for (const auto& k : checks) {
    ASSERT_TRUE(t.counts().count(k)) << k;
    EXPECT_GT(t.counts().at(k).pass, 0u) << k;
  }
}

const std::vector<std::string> kRelations{"S1", "S2", "S3", "S4", "S5", "E1", "E2", "E3", "SE1", "SE2"};

}  // namespace

TEST(Relations, CommutatorByHand) {
  auto z = z4();
  for (Elem x : z.elements())
    for (Elem y : z.elements()) {
      const Mat a = t_short(z, 3, 1, 2, x), b = t_short(z, 3, 2, 3, y);
      EXPECT_EQ(commutator(z, a, b), t_short(z, 3, 1, 3, z.mul(x, y)));
      EXPECT_EQ(mul(z, a, t_short(z, 3, 1, 2, y)), t_short(z, 3, 1, 2, z.add(x, y)));
    }
}

TEST(Relations, ExhaustiveF2) {
  for (const auto& fr : {fr_max(f2()), fr_min(f2())}) expect_clean(run_relation_suite(fr), kRelations);
}

TEST(Relations, ExhaustiveZ4AndG3) {
  expect_clean(run_relation_suite(fr_max(z4())), kRelations);
  expect_clean(run_relation_suite(fr_max(g3())), kRelations);
}

TEST(Relations, SampledOtherContexts) {
  SuiteOptions opt{false, 3000, 17};
  expect_clean(run_relation_suite(fr_max(z4_lambda3()), opt), kRelations);
  expect_clean(run_relation_suite(fr_min(z4()), opt), kRelations);
  expect_clean(run_relation_suite(fr_max(f2(4)), opt), kRelations);
}

TEST(Relations, SamplingIsDeterministic) {
  SuiteOptions opt{false, 500, 99};
  const Tally a = run_relation_suite(fr_max(g3()), opt), b = run_relation_suite(fr_max(g3()), opt);
  EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(Relations, Constructors) {
  for (const auto& fr : {fr_max(f2()), fr_min(f2()), fr_max(z4()), fr_max(g3())})
    expect_clean(run_constructor_suite(fr), {"unitary.l36.short", "unitary.def.short", "unitary.l36.extra",
                                             "unitary.def.extra"});
}

TEST(Relations, FormIdentities) {
  for (const auto& fr : {fr_max(f2()), fr_max(z4()), fr_max(g3()), fr_max(z4_lambda3())})
    expect_clean(run_form_identities(fr, 300, 4), {"B.hermitian", "Q.sum", "Q.trace", "polarity.unitary"});
}

TEST(Relations, Esd) {
  auto f = f2();
  std::mt19937_64 rng(8);
  for (const auto& fr : {fr_max(f), fr_min(f)}) {
    std::vector<Mat> sigmas{identity(f, 3)};
    for (int k = 0; k < 3; ++k) sigmas.push_back(random_elementary_product(fr, 5, rng));
    for (const auto& p : enumerate_odd_form_ideals(fr)) {
      const Tally t = run_esd_suite(fr, p, sigmas);
      EXPECT_EQ(t.failures(), 0u);
    }
    const auto full = make_off(fr, unit_ideal(f), {});
    expect_clean(run_esd_suite(fr, full, sigmas), {"esd.factorization", "esd.unitary", "esd.inverse",
                                                   "esd.conjugation"});
  }
  auto z = z4();
  const FormRing zz = fr_max(z);
  std::vector<Mat> sigmas{identity(z, 3), random_elementary_product(zz, 5, rng)};
  expect_clean(run_esd_suite(zz, make_off(zz, unit_ideal(z), {}), sigmas, {false, 2000, 3}),
               {"esd.factorization", "esd.unitary"});
}

TEST(Relations, CorruptedMuIsCaught) {
  const auto bad = make_ctx(modular_spec(4, "3", "1"), Validation::ring_only);
  const FormRing fr = make_form_ring(bad, delta_max(bad));
  // the transvection relations do not involve mu - bar(mu) lambda; the form does
  const Tally t = run_form_identities(fr, 2000, 1);
  EXPECT_GT(t.counts().at("B.hermitian").fail, 0u);
  EXPECT_FALSE(t.findings().empty());
}

TEST(Relations, WrongParameterIsCaught) {
  auto f = f2();
  const FormRing lo = fr_min(f), hi = fr_max(f);
  const Tally t = run_constructor_suite(hi, {}, &lo);
  EXPECT_EQ(t.counts().at("unitary.l36.short").fail, 0u);
  EXPECT_GT(t.counts().at("unitary.l36.extra").fail, 0u);
  EXPECT_GT(t.counts().at("unitary.def.extra").fail, 0u);
}
