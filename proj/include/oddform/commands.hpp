#pragma once

// Suite drivers behind the command line tool. Each returns a RunReport whose
// JSON is deterministic for a fixed (config, seed, version).

#include <chrono>
#include <string>

#include "oddform/levels.hpp"
#include "oddform/proofcheck.hpp"
#include "oddform/relations.hpp"
#include "oddform/scenario.hpp"

namespace oddform {

enum ExitCode : int { kExitPass = 0, kExitFindings = 1, kExitInvalid = 2 };

struct RunReport {
  std::string suite;
  std::uint64_t seed = 0;
  Tally tally;
  json result = json::object();
  bool budget_hit = false;
  double wall_time = 0;

  int exit_code() const { return tally.failures() == 0 && !budget_hit ? kExitPass : kExitFindings; }

  json to_json(bool timing) const {
    json j = tally.to_json();
    j["suite"] = suite;
    j["seed"] = seed;
    j["version"] = kVersion;
    j["result"] = result;
    j["budget_hit"] = budget_hit;
    j["failures"] = tally.failures();
    j["status"] = exit_code() == kExitPass ? "pass" : "fail";
    if (timing) j["wall_time_s"] = wall_time;
    return j;
  }
};

inline json ideal_json(const HermitianCtx& c, const Ideal& i) {
  json a = json::array();
  for (Elem x : eset_elements(i.elements)) a.push_back(c.format(x));
  return a;
}

inline json hset_json(const HermitianCtx& c, const HSet& s) {
  json a = json::array();
  for (HeisElem x : hset_elements(c, s)) a.push_back(heis_json(c, x));
  return a;
}

inline json level_json(const HermitianCtx& c, const OddFormIdeal& p) {
  return {{"ideal", ideal_json(c, p.ideal)}, {"omega", hset_json(c, p.omega)}};
}

namespace detail {

inline bool is_axiom_error(Errc e) {
  return e == Errc::invalid_symmetry || e == Errc::non_unit_lambda || e == Errc::invalid_mu;
}

inline Finding error_finding(const std::string& check, const Error& e) {
  return {check, json{{"error", std::string(errc_name(e.code()))}}, e.what()};
}

template <class Fn>
RunReport timed(const std::string& suite, const ScenarioConfig& cfg, Fn&& body) {
  RunReport r;
  r.suite = suite;
  r.seed = cfg.seed;
  const auto t0 = std::chrono::steady_clock::now();
  body(r);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

/// Context, Delta and odd form ideal validation. Axiom violations become
/// findings; malformed input throws.
inline RunReport cmd_validate(const ScenarioConfig& cfg) {
  return detail::timed("validate", cfg, [&](RunReport& r) {
    std::optional<HermitianCtx> ctx;
    try {
      ctx.emplace(make_ctx(cfg.ring, Validation::full));
      r.tally.record("context", true);
    } catch (const Error& e) {
      if (!detail::is_axiom_error(e.code())) throw;
      r.tally.add_finding(detail::error_finding("context", e));
      return;
    }
    const auto& c = *ctx;
    bool inv = true;  // x -> bar(lambda) bar(x) lambda agrees with bar
    for (Elem x : c.elements()) inv = inv && c.mul(c.bar(c.lambda()), c.bar(x), c.lambda()) == c.bar(x);
    r.tally.record("context.inverse_involution", inv);
    r.result["ring_size"] = c.size();

    std::optional<FormRing> fr;
    try {
      fr.emplace(make_form_ring(c, build_delta(c, cfg.delta_kind, cfg.delta_gens)));
    } catch (const Error& e) {
      if (e.code() != Errc::generator_outside_delta_max && e.code() != Errc::context_mismatch) throw;
      r.tally.add_finding(detail::error_finding("delta", e));
      return;
    }
    const HSet& d = fr->delta.elements;
    r.tally.record("delta.between", delta_min_set(c).is_subset_of(d) && d.is_subset_of(delta_max_set(c)));
    r.tally.record("delta.module", module_closure(c, d, 1) == d);
    r.result["delta_size"] = d.count();

    try {
      const OddFormIdeal p = build_level(*fr, cfg);
      std::string why;
      const bool ok = is_odd_form_ideal(*fr, p, &why);
      r.tally.record("odd_form_ideal", ok, [&] { return json{{"why", why}}; });
      r.result["level"] = level_json(c, p);
    } catch (const Error& e) {
      if (e.code() == Errc::malformed_spec) throw;
      r.tally.add_finding(detail::error_finding("odd_form_ideal", e));
    }
  });
}

/// Relation, constructor, form identity and ESD suites.
inline RunReport cmd_relations(const ScenarioConfig& cfg) {
  return detail::timed("relations", cfg, [&](RunReport& r) {
    const FormRing fr = build_form_ring(cfg);
    const SuiteOptions opt{cfg.exhaustive, static_cast<std::size_t>(cfg.samples), cfg.seed};
    r.tally.merge(run_relation_suite(fr, opt));
    std::optional<FormRing> judge;
    if (cfg.membership_delta)
      judge.emplace(make_form_ring(fr.ctx, *cfg.membership_delta == "min" ? delta_min(fr.ctx) : delta_max(fr.ctx)));
    r.tally.merge(run_constructor_suite(fr, opt, judge ? &*judge : nullptr));
    r.tally.merge(run_form_identities(fr, static_cast<std::size_t>(cfg.samples), cfg.seed));
    const OddFormIdeal p = build_level(fr, cfg);
    std::vector<Mat> sigmas;
    for (std::size_t k = 0; k < 3; ++k) {
      auto rng = case_rng(cfg.seed, "relations.sigma", k);
      sigmas.push_back(random_elementary_product(fr, 6, rng));
    }
    r.tally.merge(run_esd_suite(fr, p, sigmas, opt));
    r.result["ring_size"] = fr.ctx.size();
    r.result["n"] = fr.ctx.n();
  });
}

inline const SubgroupSpec& need_subgroup(const ScenarioConfig& cfg) {
  if (!cfg.subgroup) throw Error(Errc::malformed_spec, "this suite needs a \"subgroup\" entry");
  return *cfg.subgroup;
}

inline RunReport cmd_closure(const ScenarioConfig& cfg) {
  return detail::timed("closure", cfg, [&](RunReport& r) {
    const FormRing fr = build_form_ring(cfg);
    const OddFormIdeal p = build_level(fr, cfg);
    const auto& sp = need_subgroup(cfg);
    with_algebra(fr.ctx, [&](auto alg) {
      try {
        const auto h = build_subgroup(alg, fr, p, sp, cfg.threads);
        r.result["order"] = h.size();
        r.tally.record("closure", true);
      } catch (const BudgetExceeded& e) {
        r.budget_hit = true;
        r.result["order"] = nullptr;
        r.tally.add_finding({"closure.budget_hit", json{{"budget", sp.budget}}, e.what()});
      }
      r.result["budget_hit"] = r.budget_hit;
    });
  });
}

namespace detail {

template <class Fn>
void with_subgroup(const ScenarioConfig& cfg, RunReport& r, Fn&& body) {
  const FormRing fr = build_form_ring(cfg);
  const OddFormIdeal p = build_level(fr, cfg);
  const auto& sp = need_subgroup(cfg);
  with_algebra(fr.ctx, [&](auto alg) {
    try {
      const auto h = build_subgroup(alg, fr, p, sp, cfg.threads);
      body(fr, p, h, build_ambient(fr, p, sp));
    } catch (const BudgetExceeded& e) {
      r.budget_hit = true;
      r.tally.add_finding({"closure.budget_hit", json{{"budget", sp.budget}}, e.what()});
    }
    r.result["budget_hit"] = r.budget_hit;
  });
}

}  // namespace detail

/// Lower and upper level of the configured subgroup.
inline RunReport cmd_levels(const ScenarioConfig& cfg) {
  return detail::timed("levels", cfg, [&](RunReport& r) {
    detail::with_subgroup(cfg, r, [&](const FormRing& fr, const OddFormIdeal&, const auto& h, const auto& ambient) {
      const auto& c = fr.ctx;
      const LevelReport rep = sandwich_check(fr, h, ambient, cfg.k);
      r.tally.record("levels.lower_valid", rep.lower_valid);
      r.tally.record("levels.upper_valid", rep.upper_valid);
      r.tally.record("levels.lower_in_upper", rep.lower_in_upper);
      r.tally.record("levels.H_in_CU", rep.H_in_CU);
      r.result["order"] = h.size();
      r.result["lower"] = level_json(c, rep.lower);
      r.result["upper"] = level_json(c, rep.upper);
      r.result["checks"] = {{"eu_in_H", rep.eu_in_H},
                            {"H_in_CU", rep.H_in_CU},
                            {"lower_in_upper", rep.lower_in_upper},
                            {"forms_agree", rep.forms_agree}};
      r.result["mode"] = "exact";
    });
  });
}

/// Both sandwich inclusions and the three level formulations.
inline RunReport cmd_sandwich(const ScenarioConfig& cfg) {
  return detail::timed("sandwich", cfg, [&](RunReport& r) {
    detail::with_subgroup(cfg, r, [&](const FormRing& fr, const OddFormIdeal&, const auto& h, const auto& ambient) {
      const auto& c = fr.ctx;
      const LevelReport rep = sandwich_check(fr, h, ambient, cfg.k);
      r.tally.record("sandwich.lower_valid", rep.lower_valid);
      r.tally.record("sandwich.upper_valid", rep.upper_valid);
      r.tally.record("sandwich.H_in_CU", rep.H_in_CU);
      r.tally.record("sandwich.lower_in_upper", rep.lower_in_upper);
      r.tally.record("sandwich.forms_agree", rep.forms_agree);
      if (rep.hypothesis)
        r.tally.record("sandwich.eu_in_H", rep.eu_in_H);
      else
        r.tally.skip("sandwich.eu_in_H");
      r.result = {{"order", h.size()},
                  {"k", rep.k},
                  {"lower", level_json(c, rep.lower)},
                  {"upper", level_json(c, rep.upper)},
                  {"generators_checked", rep.generators_checked},
                  {"checks",
                   {{"eu_in_H", rep.eu_in_H},
                    {"H_in_CU", rep.H_in_CU},
                    {"lower_in_upper", rep.lower_in_upper},
                    {"closure_in_H", rep.closure_in_H},
                    {"star_in_lower", rep.star_in_lower},
                    {"upper_in_colon", rep.upper_in_colon},
                    {"forms_agree", rep.forms_agree},
                    {"normalised_hypothesis", rep.hypothesis}}},
                  {"mode", "exact"}};
    });
  });
}

/// Instance checks of the proof identities; "lemma" selects a subset.
inline RunReport cmd_proofcheck(const ScenarioConfig& cfg) {
  return detail::timed("proofcheck", cfg, [&](RunReport& r) {
    const FormRing fr = build_form_ring(cfg);
    const OddFormIdeal p = build_level(fr, cfg);
    const std::string& l = cfg.lemma;
    if (l != "all" && l != "lemsub2" && l != "lemsub3" && l != "thm1-step1" && l != "spreading" && l != "levels")
      throw Error(Errc::malformed_spec, "unknown lemma '" + l + "'");
    ProofcheckOptions opt;
    opt.exhaustive = cfg.exhaustive;
    opt.samples = static_cast<std::size_t>(cfg.samples);
    opt.seed = cfg.seed;
    opt.arrows = l == "all" || l == "lemsub2";
    opt.lemsub3 = l == "all" || l == "lemsub3";
    opt.step1 = l == "all" || l == "thm1-step1";
    opt.levels = l == "all" || l == "levels";
    if (l != "spreading") {
      const ProofcheckReport rep = run_proofcheck_suite(fr, p, opt);
      r.tally.merge(rep.tally);
      if (opt.lemsub3) r.result["sign_probe"] = rep.probe.to_json();
      r.result["sigmas"] = rep.sigmas;
    }
    if ((l == "all" || l == "spreading") && cfg.subgroup) {
      with_algebra(fr.ctx, [&](auto alg) {
        try {
          const auto h = build_subgroup(alg, fr, p, *cfg.subgroup, cfg.threads);
          r.tally.merge(run_spreading_suite(fr, p, h));
        } catch (const BudgetExceeded& e) {
          r.budget_hit = true;
          r.tally.add_finding({"closure.budget_hit", json{{"budget", cfg.subgroup->budget}}, e.what()});
        }
      });
    } else if (l == "spreading") {
      throw Error(Errc::malformed_spec, "spreading needs a \"subgroup\" entry");
    }
  });
}

/// Dispatch by subcommand name; throws Error on invalid input.
inline RunReport run_command(const std::string& name, const ScenarioConfig& cfg) {
  if (name == "validate") return cmd_validate(cfg);
  if (name == "relations") return cmd_relations(cfg);
  if (name == "closure") return cmd_closure(cfg);
  if (name == "levels") return cmd_levels(cfg);
  if (name == "sandwich") return cmd_sandwich(cfg);
  if (name == "proofcheck") return cmd_proofcheck(cfg);
  throw Error(Errc::bad_arguments, "unknown command '" + name + "'");
}

}  // namespace oddform
