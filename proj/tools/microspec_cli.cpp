#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "microspec/distribution.hpp"
#include "microspec/scenario.hpp"

int main(int argc, char** argv) {
  using namespace microspec;
  CLI::App app{"microspec: numerical wavefront and analytic-cone estimation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunOptions opt;
  std::string file;
  std::uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("file", file, "Scenario file")->required();
  run->add_option("--out", opt.out_dir, "Output directory (default out/<name>)");
  run->add_option("--threads", opt.threads, "Worker threads (default MICROSPEC_THREADS or 1)")->check(CLI::NonNegativeNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--override", opt.overrides, "key=value, repeatable");

  app.add_subcommand("list-catalog", "List catalog distributions");

  std::string st_out = "out/self-test";
  auto* st = app.add_subcommand("self-test", "Run the bundled scenarios and check their exit codes");
  st->add_option("--out", st_out, "Output root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (run->parsed()) {
    if (*seed_opt) opt.seed = seed;
    return run_scenario(file, opt, std::cout);
  }
  if (app.got_subcommand("list-catalog")) {
    for (const auto& e : list_catalog()) std::cout << e.key << "\t" << e.description << "\n";
    return 0;
  }
  return self_test(st_out, std::cout);
}
