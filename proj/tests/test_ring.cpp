#include "fixtures.hpp"

using namespace fx;

TEST(Ring, StandardContextsValidate) {
  EXPECT_NO_THROW(f2());
  EXPECT_NO_THROW(z4());
  EXPECT_NO_THROW(g3());
  EXPECT_NO_THROW(f2(4));
}

TEST(Ring, BadMuRejected) {
  try {
    make_ctx(modular_spec(4, "3", "1"));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::invalid_mu);
  }
  // oracle: mu - bar(mu) lambda = 1 - 3 = 2 mod 4
  EXPECT_EQ(((1 - 1 * 3) % 4 + 4) % 4, 2);
}

TEST(Ring, OtherAxiomFailures) {
  EXPECT_THROW(make_ctx(modular_spec(4, "2", "0")), Error);  // 2 * 2 != 1
  EXPECT_THROW(make_ctx(modular_spec(2, "1", "1", 2)), Error);
  EXPECT_NO_THROW(make_ctx(modular_spec(4, "3", "1"), Validation::ring_only));
}

TEST(Ring, Arithmetic) {
  auto z = z4();
  auto f = f2();
  auto g = g3();
  EXPECT_EQ(z.mul(e(z, "3"), e(z, "3")), e(z, "1"));
  EXPECT_EQ(f.add(f.one(), f.one()), f.zero());
  EXPECT_EQ(g.mul(e(g, "1+1*w"), e(g, "1+2*w")), e(g, "2"));
  EXPECT_EQ(g.bar(e(g, "1+2*w")), e(g, "1+1*w"));
  EXPECT_EQ(z.bar(e(z, "3")), e(z, "3"));
  EXPECT_EQ(f.bar(f.zero()), f.zero());
}

TEST(Ring, GaussianMultiplicationAgainstIntegerOracle) {
  auto g = g3();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          const int re = ((a * c - b * d) % 3 + 3) % 3, im = (a * d + b * c) % 3;
          const Elem x = g.parse(std::to_string(a) + "+" + std::to_string(b) + "*w");
          const Elem y = g.parse(std::to_string(c) + "+" + std::to_string(d) + "*w");
          EXPECT_EQ(g.format(g.mul(x, y)), std::to_string(re) + "+" + std::to_string(im) + "*w");
        }
}

TEST(Ring, LambdaPower) {
  auto z = z4_lambda3();
  EXPECT_EQ(z.lambda_power(0), z.one());
  EXPECT_EQ(z.lambda_power(-1), e(z, "3"));
  EXPECT_EQ(f2().lambda_power(1), f2().one());
  try {
    z.lambda_power(3);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), Errc::unsupported_exponent);
  }
}

TEST(Ring, Enumeration) {
  EXPECT_EQ(f2().elements().size(), 2u);
  auto z = z4();
  std::vector<std::string> s;
  for (Elem x : z.elements()) s.push_back(z.format(x));
  EXPECT_EQ(s, (std::vector<std::string>{"0", "1", "2", "3"}));
  auto g = g3();
  ASSERT_EQ(g.elements().size(), 9u);
  EXPECT_EQ(g.format(g.elements()[1]), "0+1*w");
  EXPECT_EQ(g.format(g.elements()[3]), "1+0*w");
}

TEST(Ring, FormatParseRoundTrip) {
  for (const auto& c : {f2(), z4(), g3()})
    for (Elem x : c.elements()) EXPECT_EQ(c.parse(c.format(x)), x);
  EXPECT_EQ(z4().parse("-1"), z4().parse("3"));
  EXPECT_THROW(z4().parse("x"), Error);
}

TEST(Ring, InvolutionProperties) {
  for (const auto& c : {f2(), z4(), g3(), z4_lambda3()}) {
    const Elem l = c.lambda(), lb = c.bar(l);
    EXPECT_EQ(c.mul(l, lb), c.one());
    EXPECT_EQ(c.mu(), c.mul(c.bar(c.mu()), l));
    for (Elem x : c.elements()) {
      EXPECT_EQ(c.bar(c.bar(x)), x);
      EXPECT_EQ(c.mul(lb, c.bar(x), l), c.bar(x));
      for (Elem y : c.elements()) {
        EXPECT_EQ(c.bar(c.mul(x, y)), c.mul(c.bar(x), c.bar(y)));
        EXPECT_EQ(c.bar(c.add(x, y)), c.add(c.bar(x), c.bar(y)));
      }
    }
  }
}

TEST(Ring, TableRing) {
  // F2 x F2 with the swap involution, lambda = 1, mu = 0
  RingSpec s;
  s.kind = RingKind::table;
  s.add_table = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  s.mul_table = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 2, 2}, {0, 1, 2, 3}};
  s.one = 3;
  s.involution = InvolutionKind::table;
  s.bar_table = {0, 2, 1, 3};
  s.lambda = "#3";
  s.mu = "#0";
  auto c = make_ctx(s);
  EXPECT_EQ(c.bar(c.parse("#1")), c.parse("#2"));
  EXPECT_EQ(c.one(), c.parse("#3"));
  s.mul_table[1][2] = 1;  // breaks commutativity
  EXPECT_THROW(make_ctx(s), Error);
}
