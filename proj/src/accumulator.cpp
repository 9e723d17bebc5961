#include "hmat/accumulator.hpp"

#include "hmat/error.hpp"

namespace hmat {

Accumulator::Accumulator(const Cluster& t, const Cluster& r)
    : t_(&t), r_(&r), rhat_(t.size(), r.size()) {}

void Accumulator::reset() {
  rhat_.set_zero();
  pending_.clear();
}

RkMatrix leaf_product(const HMatrix& x, const HMatrix& y) {
  const Index nt = x.rows();
  const Index ns = x.cols();
  const Index nr = y.cols();
  using Kind = HMatrix::Kind;

  if (x.kind() == Kind::dense) {
    const DenseMatrix& n = x.dense();
    if (nt <= ns) {
      DenseMatrix a = DenseMatrix::Identity(nt, nt);
      DenseMatrix b = DenseMatrix::Zero(nr, nt);
      addevaltrans(1.0, y, n.transpose(), b);
      return RkMatrix(std::move(a), std::move(b));
    }
    DenseMatrix b = DenseMatrix::Zero(nr, ns);
    addevaltrans(1.0, y, DenseMatrix::Identity(ns, ns), b);
    return RkMatrix(n, std::move(b));
  }
  if (y.kind() == Kind::dense) {
    const DenseMatrix& n = y.dense();
    if (nr <= ns) {
      DenseMatrix a = DenseMatrix::Zero(nt, nr);
      addeval(1.0, x, n, a);
      return RkMatrix(std::move(a), DenseMatrix::Identity(nr, nr));
    }
    DenseMatrix a = DenseMatrix::Zero(nt, ns);
    addeval(1.0, x, DenseMatrix::Identity(ns, ns), a);
    return RkMatrix(std::move(a), n.transpose());
  }
  if (x.kind() == Kind::lowrank) {
    const RkMatrix& rx = x.lowrank();
    DenseMatrix b = DenseMatrix::Zero(nr, rx.rank());
    addevaltrans(1.0, y, rx.b(), b);
    return RkMatrix(rx.a(), std::move(b));
  }
  if (y.kind() == Kind::lowrank) {
    const RkMatrix& ry = y.lowrank();
    DenseMatrix a = DenseMatrix::Zero(nt, ry.rank());
    addeval(1.0, x, ry.a(), a);
    return RkMatrix(std::move(a), ry.b());
  }
  throw ContractError("leaf_product: both factors are subdivided");
}

void addproduct(double alpha, const Cluster& s, const HMatrix& x, const HMatrix& y,
                Accumulator& acc, const TruncationControl& ctl, OpCounters* counters) {
  if (&x.row_cluster() != acc.t_ || &y.col_cluster() != acc.r_ || &x.col_cluster() != &s ||
      &y.row_cluster() != &s)
    throw DomainError("addproduct: factor clusters do not match (t, s) and (s, r)");
  tally(counters, &OpCounters::addproduct);

  if (x.is_leaf() || y.is_leaf()) {
    rkadd(alpha, leaf_product(x, y), acc.rhat_, ctl, counters);
    return;
  }
  acc.pending_.push_back({alpha, &s, &x, &y});
}

std::vector<Accumulator> acc_split(const Accumulator& acc, const TruncationControl& ctl,
                                   OpCounters* counters) {
  const Cluster& t = *acc.t_;
  const Cluster& r = *acc.r_;
  if (t.is_leaf() || r.is_leaf())
    throw ContractError("acc_split: target block has no sons");

  std::vector<Accumulator> out;
  out.reserve(t.son_count() * r.son_count());
  for (std::size_t i = 0; i < t.son_count(); ++i)
    for (std::size_t j = 0; j < r.son_count(); ++j) {
      const Cluster& ti = t.son(i);
      const Cluster& rj = r.son(j);
      Accumulator& son = out.emplace_back(ti, rj);
      if (acc.rhat_.rank() > 0)
        son.rhat_ = rk_restrict(acc.rhat_, relative_range(ti, t), relative_range(rj, r));
      for (const PendingProduct& p : acc.pending_) {
        if (p.mid->is_leaf() || p.x->is_leaf() || p.y->is_leaf())
          throw ContractError("acc_split: pending product without sons");
        for (std::size_t k = 0; k < p.mid->son_count(); ++k)
          addproduct(p.alpha, p.mid->son(k), p.x->son(i, k), p.y->son(k, j), son, ctl, counters);
      }
    }
  return out;
}

void acc_flush(Accumulator& acc, HMatrix& z, const TruncationControl& ctl, OpCounters* counters) {
  const Cluster& t = acc.row_cluster();
  const Cluster& r = acc.col_cluster();
  if (&z.row_cluster() != &t || &z.col_cluster() != &r)
    throw DomainError("acc_flush: target does not match the accumulator block");
  tally(counters, &OpCounters::flush);

  if (acc.pending().empty()) {
    if (counters != nullptr && counters->on_flush_target) counters->on_flush_target(t, r);
    rkupdate(1.0, acc.rhat(), z, ctl, counters);
  } else if (!z.is_leaf()) {
    std::vector<Accumulator> sons = acc_split(acc, ctl, counters);
    for (std::size_t i = 0; i < t.son_count(); ++i)
      for (std::size_t j = 0; j < r.son_count(); ++j)
        acc_flush(sons[i * r.son_count() + j], z.son(i, j), ctl, counters);
  } else {
    // z is a leaf but the products still need finer blocks: work on
    // temporary leaves over sons(t) x sons(r) and put the results back.
    std::vector<HMatrix> parts = split_leaf(z);
    {
      std::vector<Accumulator> sons = acc_split(acc, ctl, counters);
      for (std::size_t k = 0; k < sons.size(); ++k) acc_flush(sons[k], parts[k], ctl, counters);
    }
    merge_leaf(parts, z, ctl, counters);
  }
  acc.reset();
}

std::size_t ProductNode::node_count() const {
  std::size_t n = 1;
  for (const ProductNode& s : sons) n += s.node_count();
  return n;
}

namespace {

ProductNode product_node(const Block& ts, const Block& sr) {
  ProductNode node{ts.row, ts.col, sr.col, {}};
  if (ts.is_leaf() || sr.is_leaf()) return node;
  const Cluster& t = *ts.row;
  const Cluster& s = *ts.col;
  const Cluster& r = *sr.col;
  node.sons.reserve(t.son_count() * s.son_count() * r.son_count());
  for (std::size_t i = 0; i < t.son_count(); ++i)
    for (std::size_t k = 0; k < s.son_count(); ++k)
      for (std::size_t j = 0; j < r.son_count(); ++j)
        node.sons.push_back(product_node(ts.son(i, k), sr.son(k, j)));
  return node;
}

} // namespace

ProductNode product_tree(const Block& tij, const Block& tjk) {
  if (tij.col != tjk.row)
    throw DomainError("product_tree: block trees do not share the middle cluster tree");
  return product_node(tij, tjk);
}

} // namespace hmat
