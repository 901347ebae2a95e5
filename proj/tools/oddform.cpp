#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "oddform/commands.hpp"

namespace {

struct Args {
  std::string config;
  bool exhaustive = false;
  std::optional<std::uint64_t> samples, seed, budget;
  std::optional<std::string> lemma;
  std::string out;
  bool timing = false;
};

void add_common(CLI::App* sub, Args& a) {
  sub->add_option("--config", a.config, "scenario config (JSON)")->required();
  auto* ex = sub->add_flag("--exhaustive", a.exhaustive, "enumerate every case");
  sub->add_option("--samples", a.samples, "seeded sample count")->excludes(ex);
  sub->add_option("--seed", a.seed, "64-bit seed");
  sub->add_option("--budget", a.budget, "closure element budget");
  sub->add_option("--out", a.out, "write the report here instead of stdout");
  sub->add_flag("--timing", a.timing, "include wall time in the report");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace oddform;
  CLI::App app{"Odd unitary groups over finite form rings: relation, closure, level and proof checks"};
  app.require_subcommand(1);
  Args args;
  for (const char* name : {"validate", "relations", "closure", "levels", "sandwich", "proofcheck"}) {
    auto* sub = app.add_subcommand(name);
    add_common(sub, args);
    if (std::string(name) == "proofcheck")
      sub->add_option("--lemma", args.lemma, "all | lemsub2 | lemsub3 | thm1-step1 | spreading | levels");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  RunReport report;
  try {
    std::ifstream in(args.config);
    if (!in) throw Error(Errc::malformed_spec, "cannot read " + args.config);
    std::stringstream buf;
    buf << in.rdbuf();
    ScenarioConfig cfg = parse_config(buf.str());
    if (args.exhaustive) cfg.exhaustive = true;
    if (args.samples) {
      cfg.exhaustive = false;
      cfg.samples = *args.samples;
    }
    if (args.seed) cfg.seed = *args.seed;
    if (args.lemma) cfg.lemma = *args.lemma;
    if (args.budget && cfg.subgroup) cfg.subgroup->budget = *args.budget;
    report = run_command(cmd, cfg);
  } catch (const Error& e) {
    std::cerr << "oddform: invalid input: " << e.what() << "\n";
    return kExitInvalid;
  }

  const std::string text = report.to_json(args.timing).dump(2) + "\n";
  if (args.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream o(args.out);
    o << text;
  }
  std::cerr << cmd << ": " << report.tally.passes() << " passed, " << report.tally.failures() << " failed, "
            << report.tally.skips() << " skipped" << (report.budget_hit ? ", budget hit" : "") << "\n";
  return report.exit_code();
}
