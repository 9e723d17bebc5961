#include "hmat/bench.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "hmat/block_tree.hpp"
#include "hmat/error.hpp"
#include "hmat/precond.hpp"
#include "hmat/problems.hpp"

namespace hmat {

void validate(const BenchConfig& c) {
  if (c.experiment != "mul" && c.experiment != "inv" && c.experiment != "chol" && c.experiment != "lr")
    throw DomainError("unknown experiment '" + c.experiment + "' (mul, inv, chol, lr)");
  if (c.problem != "slp" && c.problem != "dlp" && c.problem != "gaussian")
    throw DomainError("unknown problem '" + c.problem + "' (slp, dlp, gaussian)");
  if (c.variant != "standard" && c.variant != "accumulated" && c.variant != "both")
    throw DomainError("unknown variant '" + c.variant + "' (standard, accumulated, both)");
  if (c.experiment == "chol" && c.problem == "dlp")
    throw DomainError("chol needs a symmetric problem (slp or gaussian)");
  if (c.levels.empty()) throw DomainError("no levels given");
  for (int l : c.levels)
    if (l < 0 || l > 8) throw DomainError("levels must lie in [0, 8]");
  if (!(c.rel_tol >= 0.0 && c.rel_tol < 1.0)) throw DomainError("tol must lie in [0, 1)");
  if (c.max_rank < 0) throw DomainError("max-rank must be non-negative");
  if (!(c.eta > 0.0)) throw DomainError("eta must be positive");
  if (c.leaf_size < 1) throw DomainError("leaf-size must be positive");
  if (c.power_iterations < 1) throw DomainError("power iterations must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

double run_one(const BenchConfig& c, Variant v, const HMatrix& g, const DenseMatrix* product,
               const TruncationControl& ctl, OpCounters& counters, double& wall) {
  if (c.experiment == "mul") {
    HMatrix z = g;
    z.set_zero();
    const auto t0 = Clock::now();
    hmul(v, 1.0, g, g, z, ctl, &counters);
    wall = std::chrono::duration<double>(Clock::now() - t0).count();
    return relative_error(as_operator(z), as_operator(*product), c.power_iterations);
  }
  HMatrix work = g;
  if (c.experiment == "inv") {
    const auto t0 = Clock::now();
    hinvert(v, work, ctl, &counters);
    wall = std::chrono::duration<double>(Clock::now() - t0).count();
    return precond_error(as_operator(g), as_operator(work), c.power_iterations);
  }
  const auto t0 = Clock::now();
  FactorPair f = c.experiment == "lr" ? hlr_decomp(work, ctl, v, &counters)
                                      : hchol_decomp(work, ctl, v, &counters);
  wall = std::chrono::duration<double>(Clock::now() - t0).count();
  return precond_error(as_operator(g), inverse_operator(f), c.power_iterations);
}

} // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& c) {
  validate(c);
  std::vector<Variant> variants;
  if (c.variant != "accumulated") variants.push_back(Variant::standard);
  if (c.variant != "standard") variants.push_back(Variant::accumulated);
  const TruncationControl ctl =
      TruncationControl::relative(c.rel_tol, c.max_rank > 0 ? std::optional<Index>(c.max_rank)
                                                            : std::nullopt);

  std::vector<BenchRecord> out;
  for (int level : c.levels) {
    ModelProblem p = make_problem(c.problem, level, c.seed);
    ClusterTree tree = build_cluster_tree(p.points, c.leaf_size);
    BlockTree blocks = build_block_tree(tree.root(), tree.root(), c.eta);
    const HMatrix g = h_from_dense(blocks.root(), to_tree_order(p.matrix, tree, tree), ctl);
    DenseMatrix product;
    if (c.experiment == "mul") {
      const DenseMatrix gd = g.to_dense();
      product.noalias() = gd * gd;
    }
    for (Variant v : variants) {
      OpCounters counters;
      double wall = 0.0;
      BenchRecord r;
      r.error_est = run_one(c, v, g, &product, ctl, counters, wall);
      r.experiment = c.experiment;
      r.problem = c.problem;
      r.n = tree.size();
      r.eta = c.eta;
      r.leaf_size = c.leaf_size;
      r.rel_tol = c.rel_tol;
      r.max_rank = c.max_rank;
      r.variant = v == Variant::standard ? "standard" : "accumulated";
      r.wall_s = wall;
      r.s_per_dof = wall / static_cast<double>(r.n);
      r.counters = counters.snapshot();
      r.seed = c.seed;
      r.metadata = p.metadata;
      out.push_back(std::move(r));
    }
  }
  return out;
}

const std::vector<std::string>& bench_columns() {
  static const std::vector<std::string> cols{
      "experiment", "problem", "n",         "eta",   "leaf_size", "rel_tol", "max_rank",
      "variant",    "wall_s",  "s_per_dof", "error_est", "qr",     "svd",     "rkadd",
      "rkmerge",    "rkupdate_leaf", "addproduct", "flush", "seed"};
  return cols;
}

namespace {

nlohmann::ordered_json to_json(const BenchRecord& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["problem"] = r.problem;
  j["n"] = r.n;
  j["eta"] = r.eta;
  j["leaf_size"] = r.leaf_size;
  j["rel_tol"] = r.rel_tol;
  j["max_rank"] = r.max_rank;
  j["variant"] = r.variant;
  j["wall_s"] = r.wall_s;
  j["s_per_dof"] = r.s_per_dof;
  j["error_est"] = r.error_est;
  j["qr"] = r.counters.qr;
  j["svd"] = r.counters.svd;
  j["rkadd"] = r.counters.rkadd;
  j["rkmerge"] = r.counters.rkmerge;
  j["rkupdate_leaf"] = r.counters.rkupdate_leaf;
  j["addproduct"] = r.counters.addproduct;
  j["flush"] = r.counters.flush;
  j["seed"] = r.seed;
  return j;
}

std::string csv_field(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream s;
    s.precision(10);
    s << v.get<double>();
    return s.str();
  }
  return v.dump();
}

} // namespace

void emit(const std::vector<BenchRecord>& records, Format format, std::ostream& out) {
  if (format == Format::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const BenchRecord& r : records) arr.push_back(to_json(r));
    out << arr.dump(2) << '\n';
    return;
  }
  const auto& cols = bench_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const BenchRecord& r : records) {
    const nlohmann::ordered_json j = to_json(r);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(j[cols[i]]);
    out << '\n';
  }
}

void emit(const std::vector<BenchRecord>& records, Format format, const std::string& path) {
  if (path == "-") {
    emit(records, format, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit(records, format, f);
  f.flush();
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace hmat
