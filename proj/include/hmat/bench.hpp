// Benchmark driver: assemble a model problem, compress it, run one
// arithmetic operation per variant and record time, error and counters.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hmat/counters.hpp"
#include "hmat/cluster_tree.hpp"

namespace hmat {

struct BenchConfig {
  std::string experiment = "mul"; // mul | inv | chol | lr
  std::string problem = "slp";    // slp | dlp | gaussian
  std::string variant = "both";   // standard | accumulated | both
  std::vector<int> levels{2, 3};
  double rel_tol = 1e-4;
  Index max_rank = 0; // 0: unbounded
  double eta = 2.0;
  Index leaf_size = 32;
  std::uint64_t seed = 1;
  int power_iterations = 20;
};

struct BenchRecord {
  std::string experiment;
  std::string problem;
  Index n = 0;
  double eta = 0.0;
  Index leaf_size = 0;
  double rel_tol = 0.0;
  Index max_rank = 0;
  std::string variant;
  double wall_s = 0.0;
  double s_per_dof = 0.0;
  double error_est = 0.0;
  CounterSnapshot counters;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> metadata;
};

/// Throws DomainError for unknown names or out-of-range parameters.
void validate(const BenchConfig& config);

/// Throws DomainError for an invalid config and NumericalError if an
/// operation breaks down.
std::vector<BenchRecord> run_bench(const BenchConfig& config);

/// Column names, in output order.
const std::vector<std::string>& bench_columns();

enum class Format { csv, json };

void emit(const std::vector<BenchRecord>& records, Format format, std::ostream& out);
/// Writes to `path`, or standard output for "-". Throws std::runtime_error if
/// the file cannot be written.
void emit(const std::vector<BenchRecord>& records, Format format, const std::string& path);

} // namespace hmat
