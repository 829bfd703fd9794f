#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "ctm/errors.hpp"

#include "config.hpp"
#include "experiments.hpp"

#ifndef CTMLAB_DATA_DIR
#define CTMLAB_DATA_DIR "data"
#endif

namespace {

struct Cli {
  std::string config;
  std::string out = ".";
  std::string tier = "small";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
};

int run_kind(const Cli& cli, const std::string& kind) {
  auto cfg = lab::load_experiment(cli.config);
  if (cfg.kind != kind)
    throw ctm::ConfigError("cli: config is kind '" + cfg.kind + "', subcommand wants '" + kind +
                           "'");
  if (cli.seed_given) cfg.seed = cli.seed;
  return lab::run_experiment(cfg, cli.out) > 0 ? 1 : 0;
}

int run_verify(const Cli& cli) {
  lab::VerifyOptions opt;
  opt.data_dir = CTMLAB_DATA_DIR;
  std::string tier = cli.tier;
  if (!cli.config.empty()) {
    const auto sc = lab::load_suite_config(cli.config);
    if (sc.data_dir) opt.data_dir = *sc.data_dir;
    if (sc.seed) opt.seed = *sc.seed;
    if (sc.tier) tier = *sc.tier;
    if (sc.workers) opt.workers = *sc.workers;
  }
  if (cli.seed_given) opt.seed = cli.seed;
  if (cli.workers > 0) opt.workers = cli.workers;
  if (tier == "small")
    opt.tier = lab::Tier::small;
  else if (tier == "full")
    opt.tier = lab::Tier::full;
  else
    throw ctm::ConfigError("cli: unknown tier '" + tier + "' (small|full)");
  return lab::run_verify_all(opt, cli.out) > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transfer-matrix laboratory for scalar fields on metric lattices"};
  app.require_subcommand(1);
  Cli cli;

  const std::vector<std::string> kinds = {"green", "markov-check", "transfer", "spectrum",
                                          "decouple"};
  for (const auto& k : kinds) {
    auto* sub = app.add_subcommand(k, "run a configured " + k + " experiment");
    sub->add_option("--config", cli.config, "experiment config (JSON)")->required();
    sub->add_option("--out", cli.out, "output directory");
    sub->add_option("--seed", cli.seed, "override the config seed");
  }
  auto* verify = app.add_subcommand("verify-all", "run the whole verification catalog");
  verify->add_option("--config", cli.config, "suite options (JSON)");
  verify->add_option("--out", cli.out, "output directory");
  verify->add_option("--tier", cli.tier, "small|full");
  verify->add_option("--workers", cli.workers, "concurrent criteria");
  verify->add_option("--seed", cli.seed, "base probe seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (const auto& k : kinds)
    if (app.get_subcommand(k)->count_all() > 0)
      cli.seed_given = app.get_subcommand(k)->count("--seed") > 0;
  if (app.get_subcommand("verify-all")->count_all() > 0)
    cli.seed_given = app.get_subcommand("verify-all")->count("--seed") > 0;

  try {
    for (const auto& k : kinds)
      if (app.get_subcommand(k)->parsed()) return run_kind(cli, k);
    return run_verify(cli);
  } catch (const ctm::NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const ctm::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const ctm::InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const ctm::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const ctm::GeometryError& e) {
    std::fprintf(stderr, "geometry error: %s\n", e.what());
    return 2;
  } catch (const ctm::MetricError& e) {
    std::fprintf(stderr, "metric error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 3;
  }
}
