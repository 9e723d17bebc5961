#include <doctest.h>

#include <map>
#include <set>

#include "hmat/block_tree.hpp"
#include "hmat/error.hpp"
#include "support/oracles.hpp"

using namespace hmat;

namespace {

Eigen::MatrixXd line(int n) {
  Eigen::MatrixXd p(1, n);
  for (int i = 0; i < n; ++i) p(0, i) = i;
  return p;
}

void check_partition(const Cluster& c, Index leaf_size) {
  if (c.is_leaf()) {
    CHECK(c.size() <= leaf_size);
    return;
  }
  Index next = c.offset();
  for (const auto& s : c.sons) {
    CHECK(s->offset() == next);
    CHECK(s->size() >= 1);
    CHECK(s->level == c.level + 1);
    next += s->size();
    check_partition(*s, leaf_size);
  }
  CHECK(next == c.indices.end());
}

} // namespace

TEST_CASE("cluster tree: single point") {
  ClusterTree t = build_cluster_tree(Eigen::MatrixXd::Zero(2, 1), 1);
  CHECK(t.root().is_leaf());
  CHECK(t.depth() == 0);
  CHECK(t.size() == 1);
}

TEST_CASE("cluster tree: four collinear points, leaf size 1") {
  ClusterTree t = build_cluster_tree(line(4), 1);
  CHECK(t.depth() == 2);
  CHECK(t.leaf_count() == 4);
  CHECK(t.root().box.lo(0) == 0.0);
  CHECK(t.root().box.hi(0) == 3.0);
  // Median split: {0,1} | {2,3}, each split once more.
  const Cluster& left = t.root().son(0);
  CHECK(left.box.lo(0) == 0.0);
  CHECK(left.box.hi(0) == 1.0);
  CHECK(t.root().son(1).box.lo(0) == 2.0);
}

TEST_CASE("cluster tree: 2m points with leaf size m give one bisection") {
  for (int m : {1, 3, 8}) {
    ClusterTree t = build_cluster_tree(line(2 * m), m);
    CHECK(t.depth() == 1);
    REQUIRE(t.root().son_count() == 2);
    CHECK(t.root().son(0).size() == m);
    CHECK(t.root().son(1).size() == m);
  }
}

TEST_CASE("cluster tree: rejects empty input and leaf size 0") {
  CHECK_THROWS_AS(build_cluster_tree(Eigen::MatrixXd(3, 0), 4), DomainError);
  CHECK_THROWS_AS(build_cluster_tree(line(4), 0), DomainError);
}

TEST_CASE("cluster tree: duplicate points split at the index midpoint") {
  ClusterTree t = build_cluster_tree(Eigen::MatrixXd::Ones(2, 7), 2);
  check_partition(t.root(), 2);
  CHECK(t.root().son(0).size() == 3);
  CHECK(t.root().son(1).size() == 4);
}

TEST_CASE("cluster tree: longest axis, ties to the lowest axis") {
  // Extent 2 in y, 1 in x: split along y.
  Eigen::MatrixXd p(2, 4);
  p << 0, 1, 0, 1,
       0, 2, 1, 2;
  ClusterTree t = build_cluster_tree(p, 2);
  CHECK(t.root().box.longest_axis() == 1);
  CHECK(t.root().son(0).box.hi(1) <= t.root().son(1).box.lo(1));
  BoundingBox sq{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)};
  CHECK(sq.longest_axis() == 0);
}

TEST_CASE("cluster tree: permutation is a bijection and partition holds") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 1 + rng() % 80;
    const Index leaf = 1 + rng() % 9;
    Eigen::MatrixXd p = oracle::random_cloud(n, 1 + rng() % 3, rng);
    ClusterTree t = build_cluster_tree(p, leaf);
    check_partition(t.root(), leaf);
    std::set<Index> seen(t.tree_to_original().begin(), t.tree_to_original().end());
    CHECK(seen.size() == static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) CHECK(t.original_to_tree()[t.tree_to_original()[i]] == i);
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n, 0, n - 1);
    CHECK(t.to_original_order(t.to_tree_order(v)) == v);
    CHECK(t.max_sons() <= 2);
    CHECK(t.max_leaf_size() <= leaf);
  }
}

TEST_CASE("block tree: diagonal leaf is inadmissible") {
  ClusterTree t = build_cluster_tree(line(3), 4);
  BlockTree b = build_block_tree(t.root(), t.root(), 2.0);
  CHECK(b.root().kind == BlockKind::inadmissible_leaf);
}

TEST_CASE("block tree: well separated leaves are admissible") {
  Eigen::MatrixXd a(1, 2), c(1, 2);
  a << 0, 1;
  c << 10, 11;
  ClusterTree ta = build_cluster_tree(a, 2);
  ClusterTree tc = build_cluster_tree(c, 2);
  CHECK(build_block_tree(ta.root(), tc.root(), 1.0).root().kind == BlockKind::admissible_leaf);
  // Distance 9, diameter 1: not admissible for eta = 0.1.
  CHECK(build_block_tree(ta.root(), tc.root(), 0.1).root().kind ==
        BlockKind::inadmissible_leaf);
  CHECK_THROWS_AS(build_block_tree(ta.root(), tc.root(), 0.0), DomainError);
}

TEST_CASE("block tree: 8-point line matches exhaustive pair classification") {
  auto g = oracle::make_geometry(line(8), 2, 1.0);
  std::size_t checked = 0;
  for_each_block(g->root(), [&](const Block& b) {
    const bool adm = oracle::admissible_by_points(*g, *b.row, *b.col);
    BlockKind expected = adm ? BlockKind::admissible_leaf
                             : (b.row->is_leaf() || b.col->is_leaf() ? BlockKind::inadmissible_leaf
                                                                     : BlockKind::subdivided);
    CHECK(b.kind == expected);
    ++checked;
  });
  CHECK(checked > 1);
}

TEST_CASE("tree stats: single leaf") {
  ClusterTree t = build_cluster_tree(line(2), 2);
  BlockTree b = build_block_tree(t.root(), t.root(), 1.0);
  TreeStats s = tree_stats(b.root());
  CHECK(s.depth == 0);
  CHECK(s.sparsity_row == 1);
  CHECK(s.sparsity_col == 1);
  CHECK(s.blocks == 1);
  CHECK(s.inadmissible_leaves == 1);
}

TEST_CASE("tree stats: sparsity against a hash-map tally") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = oracle::random_geometry(rng, 20 + rng() % 100, 1 + rng() % 3, 1 + rng() % 6,
                                     0.5 + (rng() % 4));
    std::map<std::size_t, std::size_t> rows, cols;
    int depth = 0;
    std::size_t adm = 0, inadm = 0, blocks = 0;
    for_each_block(g->root(), [&](const Block& b) {
      ++rows[b.row->id];
      ++cols[b.col->id];
      depth = std::max(depth, b.level);
      ++blocks;
      adm += b.kind == BlockKind::admissible_leaf;
      inadm += b.kind == BlockKind::inadmissible_leaf;
    });
    std::size_t mr = 0, mc = 0;
    for (auto& [k, v] : rows) mr = std::max(mr, v);
    for (auto& [k, v] : cols) mc = std::max(mc, v);
    TreeStats s = tree_stats(g->root());
    CHECK(s.sparsity_row == mr);
    CHECK(s.sparsity_col == mc);
    CHECK(s.depth == depth);
    CHECK(s.blocks == blocks);
    CHECK(s.admissible_leaves == adm);
    CHECK(s.inadmissible_leaves == inadm);
    // row = col trees give a symmetric structure
    CHECK(s.sparsity_row == s.sparsity_col);
  }
}

namespace {

std::vector<std::tuple<Index, Index, Index, Index, int>> listing(const Block& root) {
  std::vector<std::tuple<Index, Index, Index, Index, int>> out;
  for_each_block(root, [&](const Block& x) {
    out.emplace_back(x.row->offset(), x.row->size(), x.col->offset(), x.col->size(),
                     static_cast<int>(x.kind));
  });
  return out;
}

} // namespace

TEST_CASE("block tree: leaves tile the product index set and construction is deterministic") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXd p = oracle::random_cloud(10 + rng() % 60, 2, rng);
    const Index leaf = 1 + rng() % 5;
    auto g = oracle::make_geometry(p, leaf, 1.5);
    const Index n = g->n();
    Eigen::MatrixXi cover = Eigen::MatrixXi::Zero(n, n);
    for_each_block(g->root(), [&](const Block& b) {
      if (b.is_leaf())
        cover.block(b.row->offset(), b.col->offset(), b.row->size(), b.col->size()).array() += 1;
      if (b.kind == BlockKind::inadmissible_leaf) CHECK((b.row->is_leaf() || b.col->is_leaf()));
      if (b.kind == BlockKind::subdivided)
        CHECK(b.sons.size() == b.row->son_count() * b.col->son_count());
    });
    CHECK((cover.array() == 1).all());
    auto again = oracle::make_geometry(p, leaf, 1.5);
    CHECK(listing(g->root()) == listing(again->root()));
  }
}
