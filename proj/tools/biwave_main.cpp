// Scenario runner. `biwave run <file>` parses a scenario, dispatches to the
// requested task and writes the CSV / report artifacts.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "biwave/biwave.hpp"

int main(int argc, char** argv) {
  CLI::App app{"biwave: closed-form Cauchy solutions of the two-speed factorized wave equation"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario file");
  std::string scenario_path;
  biwave::RunOptions opt;
  std::optional<int> quad_order, sphere_level, threads;
  std::optional<double> h_rel, tolerance;
  std::optional<std::string> out_path;
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_path, "CSV output path (overrides the scenario)");
  run->add_option("--quad-order", quad_order, "Gauss-Legendre order override");
  run->add_option("--sphere-level", sphere_level, "sphere/ball rule level override");
  run->add_option("--h-rel", h_rel, "derivative stencil relative step override");
  run->add_option("--tolerance", tolerance, "declared tolerance override");
  run->add_option("--threads", threads, "worker count (default: BIWAVE_THREADS or all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    const biwave::Scenario sc = biwave::parse_scenario_file(scenario_path);
    if (out_path) opt.out_path = *out_path;
    if (quad_order) opt.quad_order = *quad_order;
    if (sphere_level) opt.sphere_level = *sphere_level;
    if (h_rel) opt.h_rel = *h_rel;
    if (tolerance) opt.tolerance = *tolerance;
    if (threads) opt.threads = *threads;
    const biwave::RunResult result = biwave::run_scenario(sc, opt);
    std::cout << result.report;
    const bool wrote_file = opt.out_path || sc.out_path;
    if (!result.csv.empty() && !wrote_file) std::cout << result.csv;
    return result.exit_code;
  } catch (const biwave::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
