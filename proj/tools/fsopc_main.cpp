// fsopc: photon-counting FSO link simulator.
//
//   fsopc sweep       --config run.cfg [--out ber.csv] [--seed N] [--shards N] [--lm N]
//   fsopc genie-bound --config run.cfg [--out -]
//   fsopc fading-stats --config run.cfg [--out -]
//   fsopc validate    [--quick]
//
// Exit codes: 0 ok, 1 runtime error, 2 configuration error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fsopc/commands.hpp"
#include "fsopc/error.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> log;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shards;
  std::optional<std::size_t> lm;
  bool quick = false;
  bool inject_fault = false;
  int verbosity = 0;
};

void add_run_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Run configuration file (key = value lines)");
  cmd->add_option("--out", f.out, "Output CSV path ('-' for stdout where supported)");
  cmd->add_option("--log", f.log, "Run log path (default: <out>.log)");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--shards", f.shards, "Parallel shards")->check(CLI::Range(1, 1024));
  cmd->add_option("--lm", f.lm, "Default trellis memory length L_m")->check(CLI::PositiveNumber);
  cmd->add_flag("--quick", f.quick, "Reduced sample sizes");
  cmd->add_flag("-v,--verbose", f.verbosity, "Progress on stderr");
}

fsopc::RunConfig resolve(const Flags& f, fsopc::Command command) {
  fsopc::ConfigOverrides overrides;
  if (f.out) overrides.emplace_back("out", *f.out);
  if (f.log) overrides.emplace_back("log", *f.log);
  if (f.seed) overrides.emplace_back("seed", std::to_string(*f.seed));
  if (f.shards) overrides.emplace_back("shards", std::to_string(*f.shards));
  if (f.lm) overrides.emplace_back("lm", std::to_string(*f.lm));
  fsopc::RunConfig cfg =
      f.config.empty() ? fsopc::parse_config("", overrides) : fsopc::load_config(f.config, overrides);
  cfg.command = command;
  cfg.quick = f.quick;
  cfg.verbosity = f.verbosity;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-counting free-space optical OOK link simulator"};
  app.require_subcommand(1);
  Flags flags;

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo BER sweep to CSV");
  auto* genie = app.add_subcommand("genie-bound", "Semi-analytic Genie Bound over the grid");
  auto* fading = app.add_subcommand("fading-stats", "Sample moments of the fading model");
  auto* validate = app.add_subcommand("validate", "Run the embedded oracle and sampler checks");
  for (auto* cmd : {sweep, genie, fading}) add_run_flags(cmd, flags);
  validate->add_flag("--quick", flags.quick, "Reduced sample sizes");
  validate->add_option("--seed", flags.seed, "Seed for the randomized checks");
  validate->add_flag("--inject-fault", flags.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? fsopc::kExitOk : fsopc::kExitConfig;
  }

  try {
    if (*validate) {
      fsopc::ValidateOptions opt;
      opt.quick = flags.quick;
      opt.inject_fault = flags.inject_fault;
      if (flags.seed) opt.seed = *flags.seed;
      return fsopc::command_validate(opt, std::cout);
    }
    if (*sweep) {
      if (flags.out && *flags.out == "-") {
        std::cerr << "error: sweep requires a file path for --out\n";
        return fsopc::kExitConfig;
      }
      return fsopc::command_sweep(resolve(flags, fsopc::Command::Sweep), std::cerr);
    }
    if (*genie) {
      auto cfg = resolve(flags, fsopc::Command::GenieBound);
      if (!flags.out) cfg.out_path = "-";
      return fsopc::command_genie_bound(cfg, std::cout, std::cerr);
    }
    if (*fading) {
      auto cfg = resolve(flags, fsopc::Command::FadingStats);
      if (!flags.out) cfg.out_path = "-";
      return fsopc::command_fading_stats(cfg, std::cout, std::cerr);
    }
  } catch (const fsopc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return fsopc::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fsopc::kExitRuntime;
  }
  return fsopc::kExitRuntime;
}
