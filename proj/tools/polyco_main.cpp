#include <iostream>

#include <CLI11.hpp>

#include "polyco/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"polyco: k-polycosymplectic structures, reduction and field equations"};
  app.require_subcommand(1);
  polyco::RunConfig cfg;
  std::string mu, grid, gauge, out;
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;

  app.add_subcommand("list", "print the instance catalog");
  for (const char* name : {"verify", "solve", "reduce", "compare"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--instance", cfg.instance, "catalog instance name");
    sub->add_option("--config", cfg.config_path, "config file");
    sub->add_option("--mu", mu, "momentum value, comma list (membrane: lambda)");
    sub->add_option("--grid", grid, "grid size NxM");
    sub->add_option("--tol", tol, "tolerance");
    sub->add_option("--samples", samples, "sample count");
    sub->add_option("--seed", seed, "sample seed");
    sub->add_option("--gauge", gauge, "minimal or paper");
    sub->add_option("--out", out, "output directory");
    sub->add_flag("--svg", cfg.svg, "write an SVG plot");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : polyco::kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (!mu.empty()) cfg.mu = polyco::parse_mu(mu);
    if (!grid.empty()) cfg.grid = polyco::parse_grid(grid);
  } catch (const polyco::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return polyco::kExitUsage;
  }
  cfg.tol = tol;
  cfg.samples = samples;
  cfg.seed = seed;
  if (!gauge.empty()) cfg.gauge = gauge;
  if (!out.empty()) cfg.out = out;
  return polyco::run_command(cfg, std::cout, std::cerr);
}
