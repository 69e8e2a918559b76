#include <cstdio>
#include <optional>

#include "CLI11.hpp"
#include "config.hpp"
#include "runner.hpp"

using namespace hardylab::cli;

namespace {

struct Common {
  std::string config;
  std::string out;
  int workers = 1;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "Output directory (default: the config's output field)");
  cmd->add_option("--workers", c.workers, "Concurrent diagnostics and energy threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Seed for the random probe families (overrides the config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Hardy inequality experiments on grid domains"};
  app.set_version_flag("--version", std::string(hardylab::version()));
  app.require_subcommand(1);

  Common common;
  std::string diagnostic;
  CLI::App* domain = app.add_subcommand("domain", "Build each domain of the ladder and write domain files");
  CLI::App* whitney = app.add_subcommand("whitney", "Whitney decompositions with validation");
  CLI::App* energy = app.add_subcommand("energy", "Seminorms of the probe family");
  CLI::App* capacity = app.add_subcommand("capacity", "Capacities of the compact family with witnesses");
  CLI::App* report = app.add_subcommand("report", "Run a single diagnostic");
  CLI::App* study = app.add_subcommand("study", "Refinement study of capacities and seminorms");
  CLI::App* run = app.add_subcommand("run", "Run every diagnostic of the config");
  for (CLI::App* cmd : {domain, whitney, energy, capacity, report, study, run}) add_common(cmd, common);
  report->add_option("diagnostic", diagnostic, "mazya | quasi | zeroext | hardy | maximal | caplower")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    ExperimentConfig config = load_config(common.config);
    if (common.seed) config.seed = *common.seed;
    if (report->parsed()) {
      const Diagnostic d = diagnostic_from_string(diagnostic);
      config.diagnostics = {d};
      std::erase_if(config.trends, [&](const Trend& t) { return t.diagnostic != d; });
      validate(config);
    }
    const RunOptions opts{common.out, common.workers};
    if (domain->parsed()) return emit_domain(config, opts);
    if (whitney->parsed()) return emit_whitney(config, opts);
    if (energy->parsed()) return emit_energy(config, opts);
    if (capacity->parsed()) return emit_capacity(config, opts);
    if (study->parsed()) return hardylab::cli::study(config, opts);
    return hardylab::cli::run(config, opts);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInternalError;
  }
}
