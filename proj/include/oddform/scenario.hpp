#pragma once

// Scenario configuration files: parsing, canonical serialisation and
// construction of the objects they describe.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oddform/formideal.hpp"
#include "oddform/report.hpp"
#include "oddform/subgroup.hpp"
#include "oddform/unitary.hpp"

namespace oddform {

/// One entry of a subgroup seed list.
struct SeedShort {
  int i, j;
  std::string x;
  friend bool operator==(const SeedShort&, const SeedShort&) = default;
};
struct SeedExtra {
  int i;
  std::string x, y;
  friend bool operator==(const SeedExtra&, const SeedExtra&) = default;
};
struct SeedMatrix {
  int n;
  std::vector<std::vector<std::string>> rows;
  friend bool operator==(const SeedMatrix&, const SeedMatrix&) = default;
};
using SeedEntry = std::variant<SeedShort, SeedExtra, SeedMatrix>;

struct SubgroupSpec {
  // "list" uses `seed`; "eu-full", "eu-level" and "trivial" ignore it
  std::string seed_kind = "list";
  std::vector<SeedEntry> seed;
  std::string ambient = "eu-full";  // or "eu-level"
  std::string mode = "closure";     // or "normal"
  std::uint64_t budget = 8'000'000;
  friend bool operator==(const SubgroupSpec&, const SubgroupSpec&) = default;
};

struct ScenarioConfig {
  RingSpec ring;
  std::string validation = "full";  // or "ring_only"
  std::string delta_kind = "max";   // "min" | "max" | "generated"
  std::vector<std::pair<std::string, std::string>> delta_gens;
  std::optional<std::vector<std::string>> ideal_gens;
  std::vector<std::pair<std::string, std::string>> omega_gens;
  std::optional<SubgroupSpec> subgroup;
  std::optional<std::string> membership_delta;  // "min" | "max": judge for constructor checks
  std::string lemma = "all";
  std::uint64_t seed = 0;
  std::uint64_t samples = 1000;
  bool exhaustive = false;
  long long k = 0;
  unsigned threads = 0;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

namespace detail {

inline const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::malformed_spec, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string elem_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw Error(Errc::malformed_spec, "ring elements are written as strings");
}

inline std::pair<std::string, std::string> pair_string(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(Errc::malformed_spec, "Heisenberg elements are [x, y] pairs");
  return {elem_string(j[0]), elem_string(j[1])};
}

inline SeedEntry seed_from_json(const json& j) {
  if (j.contains("short")) {
    const json& a = j.at("short");
    if (!a.is_array() || a.size() != 3) throw Error(Errc::malformed_spec, "short seed is [i, j, x]");
    return SeedShort{a[0].get<int>(), a[1].get<int>(), elem_string(a[2])};
  }
  if (j.contains("extra")) {
    const json& a = j.at("extra");
    if (!a.is_array() || a.size() != 2) throw Error(Errc::malformed_spec, "extra seed is [i, [x, y]]");
    auto [x, y] = pair_string(a[1]);
    return SeedExtra{a[0].get<int>(), x, y};
  }
  SeedMatrix m;
  m.n = need(j, "n").get<int>();
  for (const auto& r : need(j, "rows")) {
    std::vector<std::string> row;
    for (const auto& e : r) row.push_back(elem_string(e));
    m.rows.push_back(std::move(row));
  }
  return m;
}

inline json seed_to_json(const SeedEntry& e) {
  if (const auto* s = std::get_if<SeedShort>(&e)) return {{"short", {s->i, s->j, s->x}}};
  if (const auto* s = std::get_if<SeedExtra>(&e)) return {{"extra", {s->i, {s->x, s->y}}}};
  const auto& m = std::get<SeedMatrix>(e);
  return {{"n", m.n}, {"rows", m.rows}};
}

}  // namespace detail

inline ScenarioConfig config_from_json(const json& j) {
  using detail::need;
  ScenarioConfig cfg;
  try {
    const json& ring = need(j, "ring");
    const std::string kind = need(ring, "kind").get<std::string>();
    RingSpec& rs = cfg.ring;
    if (kind == "modular" || kind == "gaussian") {
      rs.kind = kind == "modular" ? RingKind::modular : RingKind::gaussian_modular;
      rs.m = need(ring, "m").get<int>();
    } else if (kind == "table") {
      rs.kind = RingKind::table;
      rs.add_table = need(ring, "add").get<std::vector<std::vector<int>>>();
      rs.mul_table = need(ring, "mul").get<std::vector<std::vector<int>>>();
      rs.one = ring.value("one", 1);
      rs.m = static_cast<int>(rs.add_table.size());
    } else {
      throw Error(Errc::malformed_spec, "unknown ring kind '" + kind + "'");
    }
    const json& inv = need(j, "involution");
    if (inv.is_string() && inv == "identity") {
      rs.involution = InvolutionKind::identity;
    } else if (inv.is_string() && inv == "conjugation") {
      rs.involution = InvolutionKind::gaussian_conjugation;
    } else if (inv.is_object() && inv.contains("table")) {
      rs.involution = InvolutionKind::table;
      rs.bar_table = inv.at("table").get<std::vector<int>>();
    } else {
      throw Error(Errc::malformed_spec, "involution is \"identity\", \"conjugation\" or {\"table\": [...]}");
    }
    rs.lambda = detail::elem_string(need(j, "lambda"));
    rs.mu = detail::elem_string(need(j, "mu"));
    rs.n = need(j, "n").get<int>();

    cfg.validation = j.value("validation", std::string("full"));
    if (cfg.validation != "full" && cfg.validation != "ring_only")
      throw Error(Errc::malformed_spec, "validation is \"full\" or \"ring_only\"");

    if (j.contains("delta")) {
      const json& d = j.at("delta");
      cfg.delta_kind = need(d, "kind").get<std::string>();
      if (cfg.delta_kind != "min" && cfg.delta_kind != "max" && cfg.delta_kind != "generated")
        throw Error(Errc::malformed_spec, "delta kind is min, max or generated");
      if (d.contains("gens"))
        for (const auto& g : d.at("gens")) cfg.delta_gens.push_back(detail::pair_string(g));
    }
    if (j.contains("ideal")) {
      std::vector<std::string> gens;
      for (const auto& g : need(j.at("ideal"), "gens")) gens.push_back(detail::elem_string(g));
      cfg.ideal_gens = std::move(gens);
    }
    if (j.contains("omega"))
      for (const auto& g : need(j.at("omega"), "gens")) cfg.omega_gens.push_back(detail::pair_string(g));
    if (j.contains("subgroup")) {
      const json& s = j.at("subgroup");
      SubgroupSpec sp;
      const json& seed = need(s, "seed");
      if (seed.is_string()) {
        sp.seed_kind = seed.get<std::string>();
        if (sp.seed_kind != "eu-full" && sp.seed_kind != "eu-level" && sp.seed_kind != "trivial")
          throw Error(Errc::malformed_spec, "seed is a list or one of eu-full, eu-level, trivial");
      } else {
        for (const auto& e : seed) sp.seed.push_back(detail::seed_from_json(e));
      }
      sp.ambient = s.value("ambient", std::string("eu-full"));
      sp.mode = s.value("mode", std::string("closure"));
      sp.budget = s.value("budget", std::uint64_t{8'000'000});
      if (sp.ambient != "eu-full" && sp.ambient != "eu-level")
        throw Error(Errc::malformed_spec, "ambient is eu-full or eu-level");
      if (sp.mode != "closure" && sp.mode != "normal") throw Error(Errc::malformed_spec, "mode is closure or normal");
      cfg.subgroup = std::move(sp);
    }
    if (j.contains("membership_delta")) {
      cfg.membership_delta = j.at("membership_delta").get<std::string>();
      if (*cfg.membership_delta != "min" && *cfg.membership_delta != "max")
        throw Error(Errc::malformed_spec, "membership_delta is min or max");
    }
    cfg.lemma = j.value("lemma", std::string("all"));
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.samples = j.value("samples", std::uint64_t{1000});
    cfg.exhaustive = j.value("exhaustive", false);
    cfg.k = j.value("k", 0LL);
    cfg.threads = j.value("threads", 0u);
  } catch (const json::exception& e) {
    throw Error(Errc::malformed_spec, e.what());
  }
  return cfg;
}

/// Canonical form; keys are sorted by the json object type.
inline json config_to_json(const ScenarioConfig& cfg) {
  json j;
  const RingSpec& rs = cfg.ring;
  switch (rs.kind) {
    case RingKind::modular: j["ring"] = {{"kind", "modular"}, {"m", rs.m}}; break;
    case RingKind::gaussian_modular: j["ring"] = {{"kind", "gaussian"}, {"m", rs.m}}; break;
    case RingKind::table:
      j["ring"] = {{"kind", "table"}, {"add", rs.add_table}, {"mul", rs.mul_table}, {"one", rs.one}};
      break;
  }
  switch (rs.involution) {
    case InvolutionKind::identity: j["involution"] = "identity"; break;
    case InvolutionKind::gaussian_conjugation: j["involution"] = "conjugation"; break;
    case InvolutionKind::table: j["involution"] = {{"table", rs.bar_table}}; break;
  }
  j["lambda"] = rs.lambda;
  j["mu"] = rs.mu;
  j["n"] = rs.n;
  j["validation"] = cfg.validation;
  json dg = json::array();
  for (const auto& [x, y] : cfg.delta_gens) dg.push_back({x, y});
  j["delta"] = {{"kind", cfg.delta_kind}, {"gens", dg}};
  if (cfg.ideal_gens) j["ideal"] = {{"gens", *cfg.ideal_gens}};
  if (!cfg.omega_gens.empty()) {
    json og = json::array();
    for (const auto& [x, y] : cfg.omega_gens) og.push_back({x, y});
    j["omega"] = {{"gens", og}};
  }
  if (cfg.subgroup) {
    const auto& s = *cfg.subgroup;
    json seed;
    if (s.seed_kind == "list") {
      seed = json::array();
      for (const auto& e : s.seed) seed.push_back(detail::seed_to_json(e));
    } else {
      seed = s.seed_kind;
    }
    j["subgroup"] = {{"seed", seed}, {"ambient", s.ambient}, {"mode", s.mode}, {"budget", s.budget}};
  }
  if (cfg.membership_delta) j["membership_delta"] = *cfg.membership_delta;
  j["lemma"] = cfg.lemma;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["exhaustive"] = cfg.exhaustive;
  j["k"] = cfg.k;
  j["threads"] = cfg.threads;
  return j;
}

inline ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::malformed_spec, e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// building objects

inline HermitianCtx build_ctx(const ScenarioConfig& cfg) {
  return make_ctx(cfg.ring, cfg.validation == "full" ? Validation::full : Validation::ring_only);
}

inline HeisElem parse_heis(const HermitianCtx& c, const std::pair<std::string, std::string>& p) {
  return {c.parse(p.first), c.parse(p.second)};
}

inline FormParam build_delta(const HermitianCtx& c, const std::string& kind,
                             const std::vector<std::pair<std::string, std::string>>& gens) {
  if (kind == "min") return delta_min(c);
  if (kind == "max") return delta_max(c);
  std::vector<HeisElem> g;
  for (const auto& p : gens) g.push_back(parse_heis(c, p));
  return param_closure(c, g);
}

inline FormRing build_form_ring(const ScenarioConfig& cfg) {
  HermitianCtx c = build_ctx(cfg);
  FormParam d = build_delta(c, cfg.delta_kind, cfg.delta_gens);
  return make_form_ring(std::move(c), std::move(d));
}

/// The configured odd form ideal; without an "ideal" entry this is (R, Delta).
inline OddFormIdeal build_level(const FormRing& fr, const ScenarioConfig& cfg) {
  const auto& c = fr.ctx;
  std::vector<HeisElem> og;
  for (const auto& p : cfg.omega_gens) og.push_back(parse_heis(c, p));
  if (!cfg.ideal_gens) {
    if (og.empty()) return {unit_ideal(c), fr.delta.elements};
    return make_off(fr, unit_ideal(c), og);
  }
  std::vector<Elem> ig;
  for (const auto& s : *cfg.ideal_gens) ig.push_back(c.parse(s));
  return make_off(fr, ideal_closure(c, ig), og);
}

inline Mat parse_matrix(const HermitianCtx& c, const SeedMatrix& m) {
  if (m.n != c.n() || m.rows.size() != static_cast<std::size_t>(2 * m.n + 1))
    throw Error(Errc::malformed_spec, "matrix size does not match n");
  Mat out = zero_mat(c, m.n);
  for (int p = 0; p < out.dim(); ++p) {
    if (m.rows[p].size() != static_cast<std::size_t>(out.dim())) throw Error(Errc::malformed_spec, "ragged matrix");
    for (int q = 0; q < out.dim(); ++q) out.raw(p, q) = c.parse(m.rows[p][q]);
  }
  return out;
}

inline Mat build_seed(const FormRing& fr, const SeedEntry& e) {
  const auto& c = fr.ctx;
  if (const auto* s = std::get_if<SeedShort>(&e)) return t_short(c, c.n(), s->i, s->j, c.parse(s->x));
  if (const auto* s = std::get_if<SeedExtra>(&e)) return t_extra(fr, s->i, {c.parse(s->x), c.parse(s->y)});
  return parse_matrix(c, std::get<SeedMatrix>(e));
}

/// Calls f with the fastest algebra for the context: packed words over F2
/// for n = 3, 4 and dense matrices otherwise.
template <class F>
decltype(auto) with_algebra(const HermitianCtx& c, F&& f) {
  if (c.size() == 2 && c.n() == 3) return f(PackedAlgebra<7>{&c});
  if (c.size() == 2 && c.n() == 4) return f(PackedAlgebra<9>{&c});
  return f(DenseAlgebra{&c});
}

inline std::vector<Mat> build_ambient(const FormRing& fr, const OddFormIdeal& level, const SubgroupSpec& s) {
  return eu_generators(fr, s.ambient == "eu-level" ? level : full_level(fr));
}

/// The subgroup described by `s`; BudgetExceeded propagates.
template <class A>
GroupSet<A> build_subgroup(const A& alg, const FormRing& fr, const OddFormIdeal& level, const SubgroupSpec& s,
                           unsigned threads = 0) {
  const ClosureOptions opt{static_cast<std::size_t>(s.budget), threads};
  std::vector<Mat> seed;
  if (s.seed_kind == "eu-full") {
    seed = eu_generators(fr, full_level(fr));
  } else if (s.seed_kind == "eu-level") {
    seed = eu_generators(fr, level);
  } else if (s.seed_kind == "list") {
    for (const auto& e : s.seed) seed.push_back(build_seed(fr, e));
  }
  if (s.mode == "normal") return normal_closure(alg, seed, build_ambient(fr, level, s), opt);
  return closure(alg, seed, opt);
}

}  // namespace oddform
