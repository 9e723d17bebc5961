#include "hmat/hmatrix.hpp"

#include <string>

#include "hmat/error.hpp"

namespace hmat {

HMatrix::HMatrix(const Cluster& row, const Cluster& col, DenseMatrix nearfield)
    : row_(&row), col_(&col), payload_(std::move(nearfield)) {
  if (dense().rows() != row.size() || dense().cols() != col.size())
    throw DomainError("HMatrix: dense leaf does not match its block");
}

HMatrix::HMatrix(const Cluster& row, const Cluster& col, RkMatrix farfield)
    : row_(&row), col_(&col), payload_(std::move(farfield)) {
  if (lowrank().rows() != row.size() || lowrank().cols() != col.size())
    throw DomainError("HMatrix: low-rank leaf does not match its block");
}

HMatrix::HMatrix(const Cluster& row, const Cluster& col, std::vector<HMatrix> sons)
    : row_(&row), col_(&col), payload_(std::move(sons)) {
  if (this->sons().size() != row.son_count() * col.son_count() || this->sons().empty())
    throw DomainError("HMatrix: son count does not match sons(row) x sons(col)");
  for (std::size_t i = 0; i < row.son_count(); ++i)
    for (std::size_t j = 0; j < col.son_count(); ++j) {
      const HMatrix& s = son(i, j);
      if (s.row_ != &row.son(i) || s.col_ != &col.son(j))
        throw DomainError("HMatrix: son blocks are not ordered as sons(row) x sons(col)");
    }
}

HMatrix HMatrix::zero(const Block& block) {
  switch (block.kind) {
  case BlockKind::inadmissible_leaf:
    return HMatrix(*block.row, *block.col, DenseMatrix::Zero(block.row->size(), block.col->size()));
  case BlockKind::admissible_leaf:
    return HMatrix(*block.row, *block.col, RkMatrix(block.row->size(), block.col->size()));
  case BlockKind::subdivided:
    break;
  }
  std::vector<HMatrix> sons;
  sons.reserve(block.sons.size());
  for (const auto& s : block.sons) sons.push_back(zero(*s));
  return HMatrix(*block.row, *block.col, std::move(sons));
}

namespace {

HMatrix from_dense_rec(const Block& block, const DenseMatrix& m, Index row0, Index col0,
                       const TruncationControl& ctl) {
  const Cluster& t = *block.row;
  const Cluster& s = *block.col;
  auto sub = m.block(t.offset() - row0, s.offset() - col0, t.size(), s.size());
  switch (block.kind) {
  case BlockKind::inadmissible_leaf:
    return HMatrix(t, s, DenseMatrix(sub));
  case BlockKind::admissible_leaf:
    return HMatrix(t, s, truncate_dense(sub, ctl));
  case BlockKind::subdivided:
    break;
  }
  std::vector<HMatrix> sons;
  sons.reserve(block.sons.size());
  for (const auto& b : block.sons) sons.push_back(from_dense_rec(*b, m, row0, col0, ctl));
  return HMatrix(t, s, std::move(sons));
}

} // namespace

HMatrix HMatrix::from_dense(const Block& block, const DenseMatrix& m,
                            const TruncationControl& ctl) {
  if (m.rows() != block.row->size() || m.cols() != block.col->size())
    throw DomainError("h_from_dense: matrix shape does not match the root block");
  return from_dense_rec(block, m, block.row->offset(), block.col->offset(), ctl);
}

DenseMatrix HMatrix::to_dense() const {
  switch (kind()) {
  case Kind::dense:
    return dense();
  case Kind::lowrank:
    return lowrank().dense();
  case Kind::subdivided:
    break;
  }
  DenseMatrix out(rows(), cols());
  for (std::size_t i = 0; i < son_rows(); ++i)
    for (std::size_t j = 0; j < son_cols(); ++j) {
      const HMatrix& s = son(i, j);
      const Range r = relative_range(s.row_cluster(), *row_);
      const Range c = relative_range(s.col_cluster(), *col_);
      out.block(r.offset, c.offset, r.size, c.size) = s.to_dense();
    }
  return out;
}

void HMatrix::set_zero() {
  switch (kind()) {
  case Kind::dense:
    dense().setZero();
    break;
  case Kind::lowrank:
    lowrank().set_zero();
    break;
  case Kind::subdivided:
    for (HMatrix& s : sons()) s.set_zero();
    break;
  }
}

HMatrix HMatrix::transposed() const {
  switch (kind()) {
  case Kind::dense:
    return HMatrix(*col_, *row_, DenseMatrix(dense().transpose()));
  case Kind::lowrank:
    return HMatrix(*col_, *row_, lowrank().adjoint());
  case Kind::subdivided:
    break;
  }
  std::vector<HMatrix> t;
  t.reserve(sons().size());
  for (std::size_t j = 0; j < son_cols(); ++j)
    for (std::size_t i = 0; i < son_rows(); ++i) t.push_back(son(i, j).transposed());
  return HMatrix(*col_, *row_, std::move(t));
}

void addeval(double alpha, const HMatrix& g, ConstMultiVectorRef x, MultiVectorRef y,
             std::optional<Index> column_cap) {
  if (x.rows() != g.cols() || y.rows() != g.rows() || x.cols() != y.cols())
    throw DomainError("addeval: shape mismatch");
  if (column_cap && x.cols() > *column_cap)
    throw ContractError("addeval: " + std::to_string(x.cols()) +
                        " columns exceed the cap of " + std::to_string(*column_cap));
  if (alpha == 0.0 || x.cols() == 0) return;

  switch (g.kind()) {
  case HMatrix::Kind::dense:
    y.noalias() += alpha * g.dense() * x;
    return;
  case HMatrix::Kind::lowrank: {
    const RkMatrix& r = g.lowrank();
    if (r.rank() == 0) return;
    DenseMatrix z = alpha * (r.b().transpose() * x);
    y.noalias() += r.a() * z;
    return;
  }
  case HMatrix::Kind::subdivided:
    break;
  }
  for (std::size_t i = 0; i < g.son_rows(); ++i)
    for (std::size_t j = 0; j < g.son_cols(); ++j) {
      const HMatrix& s = g.son(i, j);
      const Range r = relative_range(s.row_cluster(), g.row_cluster());
      const Range c = relative_range(s.col_cluster(), g.col_cluster());
      addeval(alpha, s, x.middleRows(c.offset, c.size), y.middleRows(r.offset, r.size));
    }
}

void addevaltrans(double alpha, const HMatrix& g, ConstMultiVectorRef y, MultiVectorRef x,
                  std::optional<Index> column_cap) {
  if (y.rows() != g.rows() || x.rows() != g.cols() || x.cols() != y.cols())
    throw DomainError("addevaltrans: shape mismatch");
  if (column_cap && y.cols() > *column_cap)
    throw ContractError("addevaltrans: " + std::to_string(y.cols()) +
                        " columns exceed the cap of " + std::to_string(*column_cap));
  if (alpha == 0.0 || y.cols() == 0) return;

  switch (g.kind()) {
  case HMatrix::Kind::dense:
    x.noalias() += alpha * g.dense().transpose() * y;
    return;
  case HMatrix::Kind::lowrank: {
    const RkMatrix& r = g.lowrank();
    if (r.rank() == 0) return;
    DenseMatrix z = alpha * (r.a().transpose() * y);
    x.noalias() += r.b() * z;
    return;
  }
  case HMatrix::Kind::subdivided:
    break;
  }
  for (std::size_t i = 0; i < g.son_rows(); ++i)
    for (std::size_t j = 0; j < g.son_cols(); ++j) {
      const HMatrix& s = g.son(i, j);
      const Range r = relative_range(s.row_cluster(), g.row_cluster());
      const Range c = relative_range(s.col_cluster(), g.col_cluster());
      addevaltrans(alpha, s, y.middleRows(r.offset, r.size), x.middleRows(c.offset, c.size));
    }
}

void rkupdate(double alpha, const RkMatrix& r, HMatrix& g, const TruncationControl& ctl,
              OpCounters* counters) {
  if (r.rows() != g.rows() || r.cols() != g.cols()) throw DomainError("rkupdate: shape mismatch");
  if (r.rank() == 0 || alpha == 0.0) return;

  switch (g.kind()) {
  case HMatrix::Kind::dense:
    g.dense().noalias() += alpha * r.a() * r.b().transpose();
    return;
  case HMatrix::Kind::lowrank:
    tally(counters, &OpCounters::rkupdate_leaf);
    rkadd(alpha, r, g.lowrank(), ctl, counters);
    return;
  case HMatrix::Kind::subdivided:
    break;
  }
  for (std::size_t i = 0; i < g.son_rows(); ++i)
    for (std::size_t j = 0; j < g.son_cols(); ++j) {
      HMatrix& s = g.son(i, j);
      rkupdate(alpha,
               rk_restrict(r, relative_range(s.row_cluster(), g.row_cluster()),
                           relative_range(s.col_cluster(), g.col_cluster())),
               s, ctl, counters);
    }
}

std::vector<HMatrix> split_leaf(const HMatrix& g) {
  const Cluster& t = g.row_cluster();
  const Cluster& r = g.col_cluster();
  if (!g.is_leaf() || t.is_leaf() || r.is_leaf())
    throw ContractError("split_leaf: needs a leaf over clusters with sons");
  std::vector<HMatrix> parts;
  parts.reserve(t.son_count() * r.son_count());
  for (std::size_t i = 0; i < t.son_count(); ++i)
    for (std::size_t j = 0; j < r.son_count(); ++j) {
      const Range ri = relative_range(t.son(i), t);
      const Range cj = relative_range(r.son(j), r);
      if (g.kind() == HMatrix::Kind::dense)
        parts.emplace_back(t.son(i), r.son(j),
                           DenseMatrix(g.dense().block(ri.offset, cj.offset, ri.size, cj.size)));
      else
        parts.emplace_back(t.son(i), r.son(j), rk_restrict(g.lowrank(), ri, cj));
    }
  return parts;
}

void merge_leaf(std::vector<HMatrix>& parts, HMatrix& g, const TruncationControl& ctl,
                OpCounters* counters) {
  const Cluster& t = g.row_cluster();
  const Cluster& r = g.col_cluster();
  if (g.kind() == HMatrix::Kind::dense) {
    for (const HMatrix& p : parts) {
      const Range ri = relative_range(p.row_cluster(), t);
      const Range cj = relative_range(p.col_cluster(), r);
      g.dense().block(ri.offset, cj.offset, ri.size, cj.size) = p.dense();
    }
    return;
  }
  RkGrid grid{t.son_count(), r.son_count(), {}};
  grid.blocks.reserve(parts.size());
  for (HMatrix& p : parts) grid.blocks.push_back(std::move(p.lowrank()));
  g.lowrank() = rkmerge(grid, ctl, counters);
}

StorageStats storage_stats(const HMatrix& g) {
  StorageStats st;
  for_each_leaf(g, [&](const HMatrix& leaf, int level) {
    if (leaf.kind() == HMatrix::Kind::dense) {
      st.dense_reals += static_cast<std::size_t>(leaf.rows() * leaf.cols());
    } else {
      const Index k = leaf.lowrank().rank();
      st.lowrank_reals += static_cast<std::size_t>((leaf.rows() + leaf.cols()) * k);
      st.max_rank = std::max(st.max_rank, k);
      ++st.rank_histogram[level][k];
    }
  });
  st.total_reals = st.dense_reals + st.lowrank_reals;
  return st;
}

} // namespace hmat
