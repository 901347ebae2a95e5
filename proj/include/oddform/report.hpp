#pragma once

// Pass/fail tallies, findings and the seeded per-case RNG shared by the suites.

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "oddform/heisenberg.hpp"
#include "oddform/matrix.hpp"

namespace oddform {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Stateless key for (seed, suite, case); each case owns its generator.
inline std::uint64_t case_key(std::uint64_t seed, std::string_view suite, std::uint64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : suite) h = (h ^ ch) * 0x100000001b3ull;
  return splitmix64(splitmix64(seed) ^ splitmix64(h) ^ splitmix64(index + 0x632be59bd9b4e019ull));
}

inline std::mt19937_64 case_rng(std::uint64_t seed, std::string_view suite, std::uint64_t index) {
  return std::mt19937_64(case_key(seed, suite, index));
}

struct Finding {
  std::string check;
  json params;
  std::string detail;
};

inline json to_json(const Finding& f) {
  json j{{"check", f.check}, {"params", f.params}};
  if (!f.detail.empty()) j["detail"] = f.detail;
  return j;
}

struct Count {
  std::size_t pass = 0, fail = 0, skip = 0;
};

/// Per-check counters plus the first few counterexamples of each check.
class Tally {
 public:
  explicit Tally(std::size_t keep_per_check = 8) : keep_(keep_per_check) {}

  template <class ParamsFn>
  bool record(const std::string& check, bool ok, ParamsFn&& params) {
    auto& c = counts_[check];
    if (ok) {
      ++c.pass;
      return true;
    }
    if (c.fail++ < keep_) findings_.push_back({check, params(), {}});
    return false;
  }
  bool record(const std::string& check, bool ok) {
    return record(check, ok, [] { return json::object(); });
  }
  void skip(const std::string& check, std::size_t k = 1) { counts_[check].skip += k; }
  void add_finding(Finding f) {
    ++counts_[f.check].fail;
    findings_.push_back(std::move(f));
  }

  void merge(const Tally& o) {
    for (const auto& [k, v] : o.counts_) {
      auto& c = counts_[k];
      c.pass += v.pass;
      c.fail += v.fail;
      c.skip += v.skip;
    }
    findings_.insert(findings_.end(), o.findings_.begin(), o.findings_.end());
  }

  std::size_t failures() const {
    std::size_t f = 0;
    for (const auto& [k, v] : counts_) f += v.fail;
    return f;
  }
  std::size_t passes() const {
    std::size_t p = 0;
    for (const auto& [k, v] : counts_) p += v.pass;
    return p;
  }
  std::size_t skips() const {
    std::size_t s = 0;
    for (const auto& [k, v] : counts_) s += v.skip;
    return s;
  }
  const std::map<std::string, Count>& counts() const { return counts_; }
  const std::vector<Finding>& findings() const { return findings_; }

  json to_json() const {
    json cs = json::object();
    for (const auto& [k, v] : counts_) cs[k] = {{"pass", v.pass}, {"fail", v.fail}, {"skip", v.skip}};
    json fs = json::array();
    for (const auto& f : findings_) fs.push_back(oddform::to_json(f));
    return {{"counts", cs}, {"findings", fs}};
  }

 private:
  std::size_t keep_;
  std::map<std::string, Count> counts_;
  std::vector<Finding> findings_;
};

inline json mat_json(const HermitianCtx& c, const Mat& m) {
  json rows = json::array();
  for (int p = 0; p < m.dim(); ++p) {
    json r = json::array();
    for (int q = 0; q < m.dim(); ++q) r.push_back(c.format(m.raw(p, q)));
    rows.push_back(r);
  }
  return {{"n", m.n}, {"rows", rows}};
}

inline json heis_json(const HermitianCtx& c, HeisElem a) {
  return json::array({c.format(a.x), c.format(a.y)});
}

inline json vec_json(const HermitianCtx& c, const Vec& v) {
  json out = json::array();
  for (Elem x : v.e) out.push_back(c.format(x));
  return out;
}

}  // namespace oddform
