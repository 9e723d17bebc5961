// Command-line benchmark driver.
//
//   hmat_bench bench --experiment mul --problem slp --variant both \
//       --levels 2,3,4 --tol 1e-4 --format csv --out results.csv
//
// Exit status: 0 on success, 2 on usage errors, 1 on numerical failure.

#include <iostream>

#include <CLI11.hpp>

#include "hmat/bench.hpp"
#include "hmat/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"H-matrix arithmetic benchmarks"};
  app.require_subcommand(1);

  hmat::BenchConfig cfg;
  std::string format = "csv";
  std::string out = "-";
  long long max_rank = 0;
  long long leaf_size = cfg.leaf_size;

  CLI::App* bench = app.add_subcommand("bench", "run one experiment over a list of refinement levels");
  bench->add_option("--experiment", cfg.experiment, "mul, inv, chol or lr")->capture_default_str();
  bench->add_option("--problem", cfg.problem, "slp, dlp or gaussian")->capture_default_str();
  bench->add_option("--variant", cfg.variant, "standard, accumulated or both")->capture_default_str();
  bench->add_option("--levels", cfg.levels, "comma separated refinement levels (n = 8 * 4^level)")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--tol", cfg.rel_tol, "relative truncation tolerance")->capture_default_str();
  bench->add_option("--max-rank", max_rank, "rank cap, 0 for none")->capture_default_str();
  bench->add_option("--eta", cfg.eta, "admissibility parameter")->capture_default_str();
  bench->add_option("--leaf-size", leaf_size, "maximal leaf cluster size")->capture_default_str();
  bench->add_option("--seed", cfg.seed, "seed for random point sets")->capture_default_str();
  bench->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  bench->add_option("--out", out, "output file, - for standard output")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.max_rank = max_rank;
  cfg.leaf_size = leaf_size;
  try {
    hmat::validate(cfg);
    const auto records = hmat::run_bench(cfg);
    hmat::emit(records, format == "json" ? hmat::Format::json : hmat::Format::csv, out);
  } catch (const hmat::DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const hmat::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
