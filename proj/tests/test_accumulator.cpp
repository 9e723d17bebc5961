#include <doctest.h>

#include <map>

#include "hmat/accumulator.hpp"
#include "hmat/arithmetic.hpp"
#include "hmat/error.hpp"
#include "support/oracles.hpp"

using namespace hmat;

namespace {

const auto exact = TruncationControl::exact();

// Two well separated groups of points on a line, so that the root's
// off-diagonal son blocks are admissible leaves and the diagonal ones are
// subdivided.
std::unique_ptr<oracle::Geometry> two_groups(std::mt19937_64& rng, Index per_group) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd p(1, 2 * per_group);
  for (Index i = 0; i < per_group; ++i) {
    p(0, i) = u(rng);
    p(0, per_group + i) = 10.0 + u(rng);
  }
  return oracle::make_geometry(p, 2, 1.0);
}

} // namespace

TEST_CASE("acc_new") {
  std::mt19937_64 rng(1);
  auto g = oracle::random_geometry(rng, 20, 2, 3, 1.0);
  const Cluster& t = g->tree.root().son(0);
  const Cluster& r = g->tree.root().son(1);
  Accumulator acc = acc_new(t, r);
  CHECK(acc.empty());
  CHECK(acc.pending().empty());
  CHECK(acc.rhat().rank() == 0);
  CHECK(acc.rhat().rows() == t.size());
  CHECK(acc.rhat().cols() == r.size());

  HMatrix z = oracle::random_hmatrix(g->root(), 2, rng);
  const DenseMatrix before = z.to_dense();
  Accumulator whole = acc_new(g->tree.root(), g->tree.root());
  acc_flush(whole, z, exact);
  CHECK(z.to_dense() == before);
}

TEST_CASE("addproduct: deferral, alpha = 0 and the leaf cases") {
  std::mt19937_64 rng(2);
  auto g = two_groups(rng, 12);
  const Block& root = g->root();
  REQUIRE(root.son(0, 1).kind == BlockKind::admissible_leaf);
  REQUIRE(root.son(0, 0).kind == BlockKind::subdivided);
  HMatrix h = oracle::random_hmatrix(root, 2, rng);
  const Cluster& t0 = g->tree.root().son(0);
  const Cluster& t1 = g->tree.root().son(1);

  SUBCASE("both subdivided: deferred") {
    Accumulator acc(t0, t0);
    addproduct(1.0, t0, h.son(0, 0), h.son(0, 0), acc, exact);
    CHECK(acc.pending().size() == 1);
    CHECK(acc.rhat().rank() == 0);
  }
  SUBCASE("alpha = 0 with (s, r) admissible") {
    Accumulator acc(t0, t1);
    addproduct(1.0, t0, h.son(0, 0), h.son(0, 1), acc, exact);
    const DenseMatrix before = acc.rhat().dense();
    addproduct(0.0, t0, h.son(0, 0), h.son(0, 1), acc, exact);
    CHECK(oracle::rel_fro(acc.rhat().dense(), before) < 1e-12);
  }
  SUBCASE("(t, s) admissible leaf") {
    Accumulator acc(t0, t1);
    addproduct(1.0, t0, h.son(0, 0), h.son(0, 1), acc, exact);
    const DenseMatrix before = acc.rhat().dense();
    addproduct(-0.7, t1, h.son(0, 1), h.son(1, 1), acc, exact);
    const DenseMatrix want =
        before - 0.7 * h.son(0, 1).to_dense() * h.son(1, 1).to_dense();
    CHECK(oracle::rel_fro(acc.rhat().dense(), want) < 1e-10);
    CHECK(acc.pending().empty());
  }
  SUBCASE("cluster mismatch") {
    Accumulator acc(t0, t1);
    CHECK_THROWS_AS(addproduct(1.0, t0, h.son(0, 0), h.son(0, 0), acc, exact), DomainError);
    CHECK_THROWS_AS(addproduct(1.0, t1, h.son(0, 0), h.son(0, 1), acc, exact), DomainError);
  }
}

TEST_CASE("leaf_product matches the dense product for every leaf kind") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    auto g = oracle::random_geometry(rng, 8 + rng() % 40, 1 + rng() % 3, 1 + rng() % 4, 1.0);
    HMatrix h = oracle::random_hmatrix(g->root(), 1 + rng() % 3, rng);
    // all (leaf, anything) and (anything, leaf) pairs sharing a middle cluster
    std::vector<const HMatrix*> nodes;
    std::function<void(const HMatrix&)> collect = [&](const HMatrix& m) {
      nodes.push_back(&m);
      for (std::size_t i = 0; i < m.son_rows(); ++i)
        for (std::size_t j = 0; j < m.son_cols(); ++j) collect(m.son(i, j));
    };
    collect(h);
    int checked = 0;
    for (const HMatrix* x : nodes)
      for (const HMatrix* y : nodes) {
        if (&x->col_cluster() != &y->row_cluster() || (!x->is_leaf() && !y->is_leaf())) continue;
        if (++checked > 40) break;
        CHECK(oracle::rel_fro(leaf_product(*x, *y).dense(), x->to_dense() * y->to_dense()) <
              1e-12);
      }
  }
  std::mt19937_64 r2(4);
  auto g = two_groups(r2, 6);
  HMatrix h = oracle::random_hmatrix(g->root(), 1, r2);
  CHECK_THROWS_AS(leaf_product(h, h), ContractError);
}

TEST_CASE("acc_split") {
  std::mt19937_64 rng(5);
  auto g = oracle::random_geometry(rng, 48, 2, 3, 0.5);
  HMatrix x = oracle::random_hmatrix(g->root(), 2, rng);
  HMatrix y = oracle::random_hmatrix(g->root(), 2, rng);
  const Cluster& root = g->tree.root();

  SUBCASE("pending empty: sons carry the restricted aggregate") {
    Accumulator acc(root, root);
    HMatrix leafx(root, root,
                  RkMatrix(oracle::random_matrix(48, 2, rng), oracle::random_matrix(48, 2, rng)));
    addproduct(1.0, root, leafx, y, acc, exact);
    REQUIRE(acc.pending().empty());
    const DenseMatrix whole = acc.rhat().dense();
    auto sons = acc_split(acc, exact);
    for (std::size_t i = 0; i < root.son_count(); ++i)
      for (std::size_t j = 0; j < root.son_count(); ++j) {
        const Accumulator& s = sons[i * root.son_count() + j];
        CHECK(s.pending().empty());
        CHECK(s.rhat().rank() <= 2);
        CHECK(oracle::rel_fro(s.rhat().dense(),
                              oracle::restrict(whole, root.son(i), root.son(j), root, root)) <
              1e-14);
      }
  }
  SUBCASE("content is conserved") {
    Accumulator acc(root, root);
    addproduct(0.5, root, x, y, acc, exact);
    REQUIRE(acc.pending().size() == 1);
    auto sons = acc_split(acc, exact);
    REQUIRE(sons.size() == root.son_count() * root.son_count());
    DenseMatrix total = DenseMatrix::Zero(root.size(), root.size());
    for (std::size_t i = 0; i < root.son_count(); ++i)
      for (std::size_t j = 0; j < root.son_count(); ++j) {
        const Accumulator& s = sons[i * root.son_count() + j];
        CHECK(&s.row_cluster() == &root.son(i));
        CHECK(&s.col_cluster() == &root.son(j));
        const Range ri = relative_range(root.son(i), root);
        const Range rj = relative_range(root.son(j), root);
        total.block(ri.offset, rj.offset, ri.size, rj.size) = oracle::content(s);
      }
    CHECK(oracle::rel_fro(total, oracle::content(acc)) < 1e-10);
    CHECK(oracle::rel_fro(total, 0.5 * x.to_dense() * y.to_dense()) < 1e-10);
  }
  SUBCASE("no sons") {
    ClusterTree one = build_cluster_tree(Eigen::MatrixXd::Zero(1, 2), 4);
    Accumulator acc(one.root(), one.root());
    CHECK_THROWS_AS(acc_split(acc, exact), ContractError);
  }
}

TEST_CASE("acc_split: son products that are admissible leaves land in rhat") {
  std::mt19937_64 rng(6);
  // The root's off-diagonal son blocks are admissible leaves.
  auto g = two_groups(rng, 8);
  HMatrix x = oracle::random_hmatrix(g->root(), 1, rng);
  HMatrix y = oracle::random_hmatrix(g->root(), 1, rng);
  const Cluster& root = g->tree.root();
  Accumulator acc(root, root);
  addproduct(1.0, root, x, y, acc, exact);
  auto sons = acc_split(acc, exact);
  // (t0, s1, r1): x.son(0,1) is an admissible leaf, so it is evaluated now
  const Accumulator& a01 = sons[1];
  const DenseMatrix want = x.son(0, 0).to_dense() * y.son(0, 1).to_dense() +
                           x.son(0, 1).to_dense() * y.son(1, 1).to_dense();
  CHECK(oracle::rel_fro(oracle::content(a01), want) < 1e-10);
  CHECK(a01.pending().empty());
}

TEST_CASE("acc_flush") {
  std::mt19937_64 rng(7);
  auto g = oracle::random_geometry(rng, 40, 2, 3, 0.5);
  const Cluster& root = g->tree.root();
  HMatrix x = oracle::random_hmatrix(g->root(), 2, rng);
  HMatrix y = oracle::random_hmatrix(g->root(), 2, rng);

  SUBCASE("pending empty is rkupdate of rhat") {
    Accumulator only(root, root);
    const RkMatrix r(oracle::random_matrix(40, 2, rng), oracle::random_matrix(40, 2, rng));
    HMatrix leafx(root, root, r);
    addproduct(1.0, root, leafx, y, only, exact);
    REQUIRE(only.pending().empty());
    const RkMatrix rhat = only.rhat();
    HMatrix z1 = oracle::random_hmatrix(g->root(), 2, rng);
    HMatrix z2 = z1;
    const auto ctl = TruncationControl::relative(1e-3, 3);
    acc_flush(only, z1, ctl);
    rkupdate(1.0, rhat, z2, ctl);
    CHECK(z1.to_dense() == z2.to_dense());
    CHECK(only.empty());
  }
  SUBCASE("flush into a subdivided target, then flush again") {
    HMatrix z = oracle::random_hmatrix(g->root(), 2, rng);
    const DenseMatrix before = z.to_dense();
    Accumulator acc(root, root);
    addproduct(1.5, root, x, y, acc, exact);
    acc_flush(acc, z, exact);
    CHECK(acc.empty());
    const DenseMatrix after = z.to_dense();
    CHECK(oracle::rel_fro(after, before + 1.5 * x.to_dense() * y.to_dense()) < 1e-10);
    acc_flush(acc, z, exact);
    CHECK(z.to_dense() == after);
  }
  SUBCASE("flush into an admissible leaf") {
    HMatrix z(root, root,
              RkMatrix(oracle::random_matrix(40, 2, rng), oracle::random_matrix(40, 2, rng)));
    const DenseMatrix before = z.to_dense();
    Accumulator acc(root, root);
    addproduct(-1.0, root, x, y, acc, exact);
    acc_flush(acc, z, exact);
    CHECK(z.kind() == HMatrix::Kind::lowrank);
    CHECK(oracle::rel_fro(z.to_dense(), before - x.to_dense() * y.to_dense()) < 1e-10);
  }
  SUBCASE("flush into a dense leaf") {
    HMatrix z(root, root, oracle::random_matrix(40, 40, rng));
    const DenseMatrix before = z.to_dense();
    Accumulator acc(root, root);
    addproduct(2.0, root, x, y, acc, exact);
    acc_flush(acc, z, exact);
    CHECK(z.kind() == HMatrix::Kind::dense);
    CHECK(oracle::rel_fro(z.to_dense(), before + 2.0 * x.to_dense() * y.to_dense()) < 1e-10);
  }
}

TEST_CASE("product_tree") {
  SUBCASE("single leaves") {
    ClusterTree one = build_cluster_tree(Eigen::MatrixXd::Zero(1, 3), 4);
    BlockTree b = build_block_tree(one.root(), one.root(), 1.0);
    ProductNode p = product_tree(b.root(), b.root());
    CHECK(p.node_count() == 1);
    CHECK(p.sons.empty());
  }
  SUBCASE("exhaustive membership on 8 points") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 25; ++rep) {
      auto gi = oracle::random_geometry(rng, 8, 1 + rng() % 3, 1 + rng() % 2, 0.5 + rng() % 3);
      const Eigen::MatrixXd pk = oracle::random_cloud(8, 2, rng);
      ClusterTree tk = build_cluster_tree(pk, 1 + rng() % 3);
      BlockTree bij = build_block_tree(gi->tree.root(), gi->tree.root(), gi->eta);
      BlockTree bjk = build_block_tree(gi->tree.root(), tk.root(), 1.0 + rng() % 2);
      const ProductNode p = product_tree(bij.root(), bjk.root());
      std::set<std::tuple<const Cluster*, const Cluster*, const Cluster*>> got;
      std::function<void(const ProductNode&)> walk = [&](const ProductNode& n) {
        CHECK(got.insert({n.t, n.s, n.r}).second);
        for (const auto& s : n.sons) walk(s);
      };
      walk(p);
      CHECK(got == oracle::product_triples(bij.root(), bjk.root()));
      CHECK(p.node_count() == got.size());
    }
  }
  SUBCASE("incompatible middle trees") {
    std::mt19937_64 rng(9);
    auto a = oracle::random_geometry(rng, 10, 2, 2, 1.0);
    auto b = oracle::random_geometry(rng, 10, 2, 2, 1.0);
    CHECK_THROWS_AS(product_tree(a->root(), b->root()), DomainError);
  }
}

TEST_CASE("accumulated multiplication visits every product-tree node once and flushes each block once") {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = oracle::random_geometry(rng, 16 + rng() % 80, 1 + rng() % 3, 1 + rng() % 6,
                                     0.5 + 0.5 * (rng() % 4));
    HMatrix x = oracle::random_hmatrix(g->root(), 2, rng);
    HMatrix y = oracle::random_hmatrix(g->root(), 2, rng);
    HMatrix z = oracle::random_hmatrix(g->root(), 2, rng);
    OpCounters c;
    std::map<std::pair<const Cluster*, const Cluster*>, int> flushed;
    c.on_flush_target = [&](const Cluster& t, const Cluster& r) { ++flushed[{&t, &r}]; };
    hmul_accumulated(1.0, x, y, z, TruncationControl::relative(1e-6), &c);
    CHECK(c.snapshot().addproduct == product_tree(g->root(), g->root()).node_count());
    for (const auto& [k, v] : flushed) CHECK(v == 1);
  }
}
