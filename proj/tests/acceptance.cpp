// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "oddform/commands.hpp"
#include "oddform/proofcheck.hpp"

using namespace oddform;

namespace {

constexpr double kRelationSeconds = 60;
constexpr double kClosureSeconds = 300;
constexpr long kClosureMaxRssKb = 2L * 1024 * 1024;
constexpr double kSandwichSeconds = 600;
constexpr std::size_t kF2Products = 10000, kZ4Products = 1000;
constexpr std::size_t kProofSamples = 1000;
constexpr std::uint64_t kSeed = 20240601;

using Clock = std::chrono::steady_clock;
using A7 = PackedAlgebra<7>;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

long max_rss_kb() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return ru.ru_maxrss;
}

HermitianCtx f2(int n = 3) { return make_ctx(modular_spec(2, "1", "1", n)); }
HermitianCtx z4() { return make_ctx(modular_spec(4, "1", "2")); }
HermitianCtx g3() { return make_ctx(gaussian_spec(3, "1", "1")); }
FormRing fr_max(const HermitianCtx& c) { return make_form_ring(c, delta_max(c)); }
FormRing fr_min(const HermitianCtx& c) { return make_form_ring(c, delta_min(c)); }

struct Outcome {
  bool pass;
  std::string detail;
};

int failed = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failed;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", seconds_since(t0));
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << " (" << buf << ")"
            << std::endl;
}

/// Unitary matrices with every third one perturbed in a single entry.
template <class F>
std::size_t count_disagreements(const FormRing& fr, std::size_t count, std::uint64_t salt, F&& def) {
  const auto& c = fr.ctx;
  std::size_t bad = 0;
  for (std::size_t k = 0; k < count; ++k) {
    auto rng = case_rng(kSeed + salt, "acceptance.membership", k);
    Mat s = random_elementary_product(fr, 1 + rng() % 8, rng);
    if (k % 3 == 2) {
      const int p = static_cast<int>(rng() % s.dim()), q = static_cast<int>(rng() % s.dim());
      s.raw(p, q) = c.add(s.raw(p, q), Elem{static_cast<std::uint16_t>(1 + rng() % (c.size() - 1))});
    }
    bool invertible = true;
    try {
      (void)minv(c, s);
    } catch (const Error&) {
      invertible = false;
    }
    if (!invertible) continue;
    if (is_unitary_l36(fr, s) != def(s, k)) ++bad;
  }
  return bad;
}

struct NamedGroup {
  std::string name;
  GroupSet<A7> h;
};

}  // namespace

int main() {
  const auto all_t0 = Clock::now();

  report(1, "relation suite", [] {
    const auto t0 = Clock::now();
    std::size_t pass = 0, fail = 0;
    for (const FormRing& fr : {fr_max(f2()), fr_min(f2()), fr_max(f2(4)), fr_min(f2(4)), fr_max(z4()), fr_max(g3())}) {
      const Tally t = run_relation_suite(fr);
      pass += t.passes();
      fail += t.failures();
    }
    const double s = seconds_since(t0);
    std::ostringstream d;
    d << pass << " relation instances, " << fail << " failures, " << s << "s (limit " << kRelationSeconds << "s)";
    return Outcome{fail == 0 && pass > 0 && s < kRelationSeconds, d.str()};
  });

  report(2, "membership predicates agree", [] {
    const FormRing ff = fr_max(f2()), zz = fr_max(z4());
    const std::size_t a = count_disagreements(ff, kF2Products, 0, [&](const Mat& s, std::size_t) {
      return is_unitary_def(ff, s);
    });
    const std::size_t b = count_disagreements(zz, kZ4Products, 1, [&](const Mat& s, std::size_t k) {
      return is_unitary_def(zz, s, 4096, k);
    });
    std::ostringstream d;
    d << a << " disagreements in " << kF2Products << " over F2, " << b << " in " << kZ4Products << " over Z/4";
    return Outcome{a == 0 && b == 0, d.str()};
  });

  report(3, "ESD factorisation and conjugation", [] {
    std::size_t fact = 0, conj = 0, fail = 0;
    const auto c = f2();
    for (const FormRing& fr : {fr_max(c), fr_min(c)}) {
      std::vector<Mat> sigmas{identity(c, 3)};
      for (int k = 0; k < 4; ++k) {
        auto rng = case_rng(kSeed, "acceptance.esd", k);
        sigmas.push_back(random_elementary_product(fr, 6, rng));
      }
      for (const auto& p : enumerate_odd_form_ideals(fr)) {
        const Tally t = run_esd_suite(fr, p, sigmas);
        fail += t.failures();
        if (t.counts().count("esd.factorization")) fact += t.counts().at("esd.factorization").pass;
        if (t.counts().count("esd.conjugation")) conj += t.counts().at("esd.conjugation").pass;
      }
    }
    std::ostringstream d;
    d << fact << " factorisations, " << conj << " conjugation formulas, " << fail << " failures";
    return Outcome{fail == 0 && fact > 0 && conj > 0, d.str()};
  });

  const auto c = f2();
  const FormRing hi = fr_max(c);
  const auto amb = eu_generators(hi, full_level(hi));
  const A7 alg{&c};
  std::vector<NamedGroup> groups;

  report(4, "closure determinism and order", [&] {
    const auto t0 = Clock::now();
    const unsigned long long expect = symplectic_order(2, 3);
    std::optional<GroupSet<A7>> first;
    std::ostringstream d;
    bool ok = true;
    for (unsigned threads : {1u, 4u, 8u}) {
      GroupSet<A7> g = closure(alg, amb, {8'000'000, threads});
      d << "threads " << threads << ": " << g.size() << "; ";
      if (g.size() != expect) ok = false;
      if (!first) {
        first.emplace(std::move(g));
      } else if (g.elements() != first->elements()) {
        ok = false;
      }
    }
    const double s = seconds_since(t0);
    const long rss = max_rss_kb();
    d << "oracle " << expect << ", " << s << "s, maxrss " << rss / 1024 << " MB";
    groups.push_back({"full EU", std::move(*first)});
    return Outcome{ok && s < kClosureSeconds && rss < kClosureMaxRssKb, d.str()};
  });

  groups.insert(groups.begin(), NamedGroup{"trivial", closure(alg, {})});
  for (int k = 0; k < 3; ++k) {
    auto rng = case_rng(kSeed, "acceptance.seed", k);
    Mat seed = random_elementary(hi, rng);
    while (seed == identity(c, 3)) seed = random_elementary(hi, rng);
    groups.push_back({"normal closure " + std::to_string(k + 1), normal_closure(alg, {seed}, amb)});
  }

  report(5, "level laws", [&] {
    std::ostringstream d;
    bool ok = true;
    for (const auto& [name, h] : groups) {
      const LowerLevel low = lower_level(hi, h, amb);
      const OddFormIdeal up = upper_level(hi, h);
      std::vector<Mat> taus;
      for (int k = 0; k < 10; ++k) {
        auto rng = case_rng(kSeed, "acceptance.tau", k);
        taus.push_back(random_elementary(hi, rng));
      }
      const bool good = low.valid && is_odd_form_ideal(hi, up) && off_subset(low.level, up) &&
                        conjugation_invariance_check(hi, h, taus) && minimality_check(hi, h);
      d << name << " (" << h.size() << ") " << (good ? "ok" : "FAILED") << "; ";
      ok = ok && good;
    }
    return Outcome{ok, d.str()};
  });

  report(6, "sandwich with k = 12", [&] {
    const auto t0 = Clock::now();
    std::ostringstream d;
    bool ok = true;
    for (const auto& [name, h] : groups) {
      const LevelReport r = sandwich_check(hi, h, amb, 12);
      const bool good = r.eu_in_H && r.H_in_CU && r.forms_agree && r.sandwich_ok;
      d << name << ": " << r.generators_checked << " generators " << (good ? "ok" : "FAILED") << "; ";
      ok = ok && good;
    }
    const double s = seconds_since(t0);
    d << s << "s (limit " << kSandwichSeconds << "s)";
    return Outcome{ok && s < kSandwichSeconds, d.str()};
  });

  report(7, "exponent rules", [] {
    const std::vector<long long> got{
        k_exponent(3, 1, ExponentMode::single),  k_exponent(4, 1, ExponentMode::single),
        k_exponent(3, 1, ExponentMode::chain),   k_exponent(3, 2, ExponentMode::chain),
        k_exponent(3, 3, ExponentMode::chain),   k_exponent(4, 1, ExponentMode::chain),
        k_exponent(4, 2, ExponentMode::chain),   k_exponent(4, 3, ExponentMode::chain)};
    const std::vector<long long> want{12, 10, 0, 12, (12 * 12 * 12 - 1) / 11 - 1, 0, 10, (10 * 10 * 10 - 1) / 9 - 1};
    std::ostringstream d;
    for (long long v : got) d << v << " ";
    return Outcome{got == want, d.str()};
  });

  report(8, "proof checks", [&] {
    std::ostringstream d;
    bool ok = true;
    auto run = [&](const std::string& name, const FormRing& fr, const OddFormIdeal& p, bool exhaustive) {
      ProofcheckOptions opt;
      opt.exhaustive = exhaustive;
      opt.samples = kProofSamples;
      opt.seed = kSeed;
      const ProofcheckReport rep = run_proofcheck_suite(fr, p, opt);
      const ProofcheckReport again = run_proofcheck_suite(fr, p, opt);
      const bool deterministic = rep.to_json() == again.to_json();
      const bool good = rep.tally.failures() == 0 && rep.probe.minus_holds == rep.probe.cases && deterministic;
      d << name << ": " << rep.tally.passes() << " checks, sign probe +" << rep.probe.plus_holds << "/"
        << rep.probe.cases << " -" << rep.probe.minus_holds << "/" << rep.probe.cases << "; ";
      ok = ok && good;
    };
    run("F2 exhaustive", hi, full_level(hi), true);
    const FormRing lo = fr_min(c);
    run("F2 min exhaustive", lo, full_level(lo), true);
    const auto z = z4();
    const FormRing zz = fr_max(z);
    run("Z/4", zz, full_level(zz), false);
    run("Z/4 level 2", zz, make_off(zz, ideal_closure(z, {z.parse("2")}), {{z.parse("2"), z.parse("2")}}), false);
    const FormRing gg = fr_max(g3());
    run("G3", gg, full_level(gg), false);
    const FormRing f4 = fr_max(f2(4));
    run("F2 n=4", f4, full_level(f4), false);

    std::size_t chains = 0, bad = 0;
    for (const FormRing& fr : {hi, zz, gg, f4}) {
      for (std::size_t len = 1; len <= 4; ++len)
        for (int k = 0; k < 5; ++k) {
          auto rng = case_rng(kSeed + len, "acceptance.chain", k);
          const ArrowState s0{random_elementary_product(fr, 3, rng), random_elementary_product(fr, 3, rng)};
          std::vector<Mat> gs;
          for (std::size_t q = 0; q < len; ++q) gs.push_back(random_elementary_product(fr, 2, rng));
          ++chains;
          if (!check_decomposition(fr.ctx, s0, gs, lemredux_decompose(fr.ctx, s0, gs)).ok()) ++bad;
        }
    }
    d << chains << " decomposed chains, " << bad << " bad; ";
    ok = ok && bad == 0;

    const Tally sp = run_spreading_suite(hi, full_level(hi), groups.back().h);
    d << "spreading " << sp.passes() << " passed, " << sp.failures() << " failed";
    ok = ok && sp.failures() == 0 && sp.counts().count("spreading") && sp.counts().at("spreading").pass > 0;
    return Outcome{ok, d.str()};
  });

  report(9, "negative controls", [] {
    const auto bad = make_ctx(modular_spec(4, "3", "1"), Validation::ring_only);
    const Tally mu = run_form_identities(make_form_ring(bad, delta_max(bad)), 1000, kSeed);
    const auto c = f2();
    const FormRing lo = fr_min(c), hi = fr_max(c);
    const Tally misuse = run_constructor_suite(hi, {}, &lo);
    std::ostringstream d;
    d << "corrupted mu: " << mu.failures() << " findings; min-vs-max parameter: " << misuse.failures()
      << " findings";
    return Outcome{mu.failures() > 0 && misuse.failures() > 0, d.str()};
  });

  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << " in "
            << seconds_since(all_t0) << "s" << std::endl;
  return failed == 0 ? 0 : 1;
}
