// Command-line front end: coupled_fpi solve <spec.json> [options]

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cfp/cfp.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Coupled fixed points of mixed monotone maps on metric spaces with a graph"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Run preflight checks and the coupled solver on a problem file");
  std::string spec_path;
  std::string out_dir = ".";
  bool force = false;
  bool quiet = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iter;
  solve->add_option("spec-file", spec_path, "JSON problem specification")->required()->check(CLI::ExistingFile);
  solve->add_option("--out-dir", out_dir, "Directory for trace.csv and report.json");
  solve->add_flag("--force", force, "Solve even when preflight fails");
  solve->add_option("--seed", seed, "RNG seed override for hypothesis sampling");
  solve->add_option("--max-iter", max_iter, "Override solve.max_iter")->check(CLI::PositiveNumber);
  solve->add_flag("--quiet", quiet, "Do not print the convergence table");

  CLI11_PARSE(app, argc, argv);

  std::ifstream in(spec_path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();

  cfp::ProblemSpec spec;
  try {
    spec = cfp::parse_spec(buf.str());
  } catch (const cfp::Error& e) {
    std::cerr << spec_path << ": " << e.what() << '\n';
    return cfp::exit_usage;
  }

  cfp::RunOptions opts;
  opts.out_dir = out_dir;
  opts.force = force;
  opts.seed = seed;
  opts.max_iter = max_iter;
  opts.quiet = quiet;
  opts.out = &std::cout;
  try {
    const auto art = cfp::run(spec, opts);
    if (art.exit_code != cfp::exit_ok && !art.error.empty()) std::cerr << art.error << '\n';
    return art.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cfp::exit_solver_error;
  }
}
