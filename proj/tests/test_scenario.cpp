#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oddform/commands.hpp"

using namespace fx;

namespace {

std::string samples_dir() {
  const char* env = std::getenv("ODDFORM_SAMPLES");
  return env ? env : "samples";
}

std::string slurp(const std::string& name) {
  std::ifstream in(samples_dir() + "/" + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ScenarioConfig sample(const std::string& name) { return parse_config(slurp(name)); }

ScenarioConfig random_config(std::mt19937_64& rng) {
  auto coin = [&] { return rng() % 2 == 0; };
  auto num = [&](int hi) { return std::to_string(rng() % hi); };
  ScenarioConfig c;
  switch (rng() % 3) {
    case 0: c.ring.kind = RingKind::modular; break;
    case 1:
      c.ring.kind = RingKind::gaussian_modular;
      c.ring.involution = InvolutionKind::gaussian_conjugation;
      break;
    default:
      c.ring.kind = RingKind::table;
      c.ring.add_table = {{0, 1}, {1, 0}};
      c.ring.mul_table = {{0, 0}, {0, 1}};
      c.ring.involution = InvolutionKind::table;
      c.ring.bar_table = {0, 1};
      c.ring.one = 1;
  }
  c.ring.m = c.ring.kind == RingKind::table ? 2 : 2 + static_cast<int>(rng() % 5);
  c.ring.lambda = num(4);
  c.ring.mu = num(4);
  c.ring.n = 3 + static_cast<int>(rng() % 2);
  c.validation = coin() ? "full" : "ring_only";
  c.delta_kind = std::vector<std::string>{"min", "max", "generated"}[rng() % 3];
  for (std::size_t k = rng() % 3; k > 0; --k) c.delta_gens.emplace_back(num(4), num(4));
  if (coin()) c.ideal_gens = std::vector<std::string>{num(4)};
  for (std::size_t k = rng() % 2; k > 0; --k) c.omega_gens.emplace_back(num(4), num(4));
  if (coin()) {
    SubgroupSpec s;
    if (coin()) {
      s.seed = {SeedShort{1, -2, num(4)}, SeedExtra{-1, num(4), num(4)},
                SeedMatrix{3, std::vector<std::vector<std::string>>(7, std::vector<std::string>(7, "0"))}};
    } else {
      s.seed_kind = std::vector<std::string>{"eu-full", "eu-level", "trivial"}[rng() % 3];
    }
    s.ambient = coin() ? "eu-full" : "eu-level";
    s.mode = coin() ? "closure" : "normal";
    s.budget = rng() % 100000;
    c.subgroup = s;
  }
  if (coin()) c.membership_delta = coin() ? "min" : "max";
  c.lemma = coin() ? "all" : "spreading";
  c.seed = rng();
  c.samples = rng() % 5000;
  c.exhaustive = coin();
  c.k = static_cast<long long>(rng() % 200);
  c.threads = static_cast<unsigned>(rng() % 8);
  return c;
}

int exit_of(const std::string& cmd, const ScenarioConfig& cfg) { return run_command(cmd, cfg).exit_code(); }

}  // namespace

TEST(Scenario, SamplesRoundTrip) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(samples_dir())) {
    if (entry.path().extension() != ".json" || entry.path().filename() == "missing_mu.json") continue;
    const ScenarioConfig cfg = sample(entry.path().filename().string());
    const std::string text = config_to_json(cfg).dump();
    EXPECT_TRUE(parse_config(text) == cfg) << entry.path();
    EXPECT_EQ(config_to_json(parse_config(text)).dump(), text);
    ++seen;
  }
  EXPECT_GE(seen, 10u);
}

TEST(Scenario, RandomConfigsRoundTrip) {
  std::mt19937_64 rng(1234);
  for (int rep = 0; rep < 300; ++rep) {
    const ScenarioConfig cfg = random_config(rng);
    const std::string text = config_to_json(cfg).dump();
    EXPECT_TRUE(parse_config(text) == cfg) << text;
    EXPECT_EQ(config_to_json(parse_config(text)).dump(), text);
  }
}

TEST(Scenario, MalformedInput) {
  auto code = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& err) {
      return err.code();
    }
    return Errc::bad_arguments;
  };
  EXPECT_EQ(code("{"), Errc::malformed_spec);
  EXPECT_EQ(code(slurp("missing_mu.json")), Errc::malformed_spec);
  EXPECT_EQ(code(R"({"ring":{"kind":"weird","m":2},"involution":"identity","lambda":"1","mu":"1","n":3})"),
            Errc::malformed_spec);
  EXPECT_EQ(code(R"({"ring":{"kind":"modular","m":"two"},"involution":"identity","lambda":"1","mu":"1","n":3})"),
            Errc::malformed_spec);
  EXPECT_EQ(code(R"({"ring":{"kind":"modular","m":2},"involution":"swap","lambda":"1","mu":"1","n":3})"),
            Errc::malformed_spec);
  EXPECT_EQ(code(R"({"ring":{"kind":"modular","m":2},"involution":"identity","lambda":"1","mu":"1","n":3,
                     "subgroup":{"seed":[{"short":[1,2]}]}})"),
            Errc::malformed_spec);
}

TEST(Scenario, BuildObjects) {
  const auto cfg = sample("z4_level2.json");
  const FormRing fr = build_form_ring(cfg);
  EXPECT_EQ(fr.ctx.size(), 4u);
  const OddFormIdeal p = build_level(fr, cfg);
  EXPECT_EQ(p.ideal.elements.count(), 2u);
  EXPECT_TRUE(is_odd_form_ideal(fr, p));
  const auto f = build_form_ring(sample("f2.json"));
  EXPECT_TRUE(build_level(f, sample("f2.json")) == full_level(f));
  EXPECT_EQ(build_seed(f, SeedShort{1, 2, "1"}), t_short(f.ctx, 3, 1, 2, f.ctx.one()));
  EXPECT_EQ(build_seed(f, SeedExtra{1, "0", "1"}), t_extra(f, 1, h(f.ctx, "0", "1")));
  EXPECT_THROW(build_seed(build_form_ring(sample("f2_delta_misuse.json")), SeedShort{1, 1, "1"}), Error);
}

TEST(Scenario, CommandExitCodes) {
  EXPECT_EQ(exit_of("validate", sample("f2.json")), kExitPass);
  EXPECT_EQ(exit_of("validate", sample("g3.json")), kExitPass);
  EXPECT_EQ(exit_of("validate", sample("z4_level2.json")), kExitPass);
  EXPECT_EQ(exit_of("validate", sample("z4_bad_mu.json")), kExitFindings);
  EXPECT_EQ(exit_of("relations", sample("z4.json")), kExitPass);
  EXPECT_EQ(exit_of("relations", sample("z4_corrupt_mu.json")), kExitFindings);
  EXPECT_EQ(exit_of("relations", sample("f2_delta_misuse.json")), kExitFindings);
  EXPECT_EQ(exit_of("levels", sample("f2_min_trivial.json")), kExitPass);
  auto budget = sample("f2_full_eu.json");
  budget.subgroup->budget = 10;
  const RunReport r = run_command("closure", budget);
  EXPECT_TRUE(r.budget_hit);
  EXPECT_EQ(r.exit_code(), kExitFindings);
  auto pc = sample("z4_level2.json");
  pc.samples = 300;
  EXPECT_EQ(exit_of("proofcheck", pc), kExitPass);
  EXPECT_THROW(run_command("bogus", sample("f2.json")), Error);
  EXPECT_THROW(run_command("closure", sample("f2.json")), Error);
}

TEST(Scenario, ReportShape) {
  auto cfg = sample("z4.json");
  cfg.samples = 200;
  cfg.seed = 77;
  const RunReport a = run_command("relations", cfg), b = run_command("relations", cfg);
  const json ja = a.to_json(false);
  EXPECT_EQ(ja, b.to_json(false));
  EXPECT_EQ(ja.at("suite"), "relations");
  EXPECT_EQ(ja.at("seed"), 77);
  EXPECT_EQ(ja.at("version"), kVersion);
  EXPECT_FALSE(ja.contains("wall_time_s"));
  EXPECT_TRUE(a.to_json(true).contains("wall_time_s"));
}
