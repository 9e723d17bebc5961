#include "hmat/lowrank.hpp"

#include <string>

#include "hmat/dense.hpp"
#include "hmat/error.hpp"

namespace hmat {

Index TruncationControl::choose_rank(const Eigen::VectorXd& sigma) const {
  const Index l = sigma.size();
  Index k = l;
  if (l > 0) {
    const double threshold = rel_tol * sigma[0];
    k = 0;
    while (k < l && sigma[k] > threshold) ++k;
  }
  if (max_rank) k = std::min(k, std::max<Index>(*max_rank, 0));
  return k;
}

RkMatrix::RkMatrix(Index rows, Index cols) : a_(rows, 0), b_(cols, 0) {}

RkMatrix::RkMatrix(DenseMatrix a, DenseMatrix b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.cols() != b_.cols())
    throw DomainError("RkMatrix: factors have different column counts (" +
                      std::to_string(a_.cols()) + " vs " + std::to_string(b_.cols()) + ")");
}

DenseMatrix RkMatrix::dense() const {
  if (rank() == 0) return DenseMatrix::Zero(rows(), cols());
  return a_ * b_.transpose();
}

void RkMatrix::set_zero() {
  a_.resize(a_.rows(), 0);
  b_.resize(b_.rows(), 0);
}

namespace {

// Given R = A_hat * Q^T with orthonormal Q, returns the truncated factors
// U_k and Q * V_hat_k * Sigma_k.
RkMatrix truncate_projected(const DenseMatrix& a_hat, const DenseMatrix& q,
                            const TruncationControl& ctl, OpCounters* counters) {
  ThinSVD svd = thin_svd(a_hat, counters);
  const Index k = ctl.choose_rank(svd.sigma);
  DenseMatrix left = svd.u.leftCols(k);
  DenseMatrix right = q * (svd.v.leftCols(k) * svd.sigma.head(k).asDiagonal());
  return RkMatrix(std::move(left), std::move(right));
}

} // namespace

RkMatrix svd_trunc(const RkMatrix& r, const TruncationControl& ctl, OpCounters* counters) {
  if (r.rank() == 0) return RkMatrix(r.rows(), r.cols());
  ThinQR qr = thin_qr(r.b(), counters);
  DenseMatrix a_hat = r.a() * qr.r.transpose();
  return truncate_projected(a_hat, qr.q, ctl, counters);
}

void rkadd(double alpha, const RkMatrix& r1, RkMatrix& r2, const TruncationControl& ctl,
           OpCounters* counters) {
  if (r1.rows() != r2.rows() || r1.cols() != r2.cols())
    throw DomainError("rkadd: shape mismatch");
  tally(counters, &OpCounters::rkadd);
  const Index k1 = r1.rank();
  const Index k2 = r2.rank();
  if (k1 + k2 == 0) return;

  DenseMatrix bd(r1.cols(), k1 + k2);
  bd << r1.b(), r2.b();
  ThinQR qr = thin_qr(bd, counters);

  DenseMatrix ac(r1.rows(), k1 + k2);
  ac << alpha * r1.a(), r2.a();
  DenseMatrix a_hat = ac * qr.r.transpose();
  r2 = truncate_projected(a_hat, qr.q, ctl, counters);
}

RkMatrix rowmerge(std::span<const RkMatrix> parts, const TruncationControl& ctl,
                  OpCounters* counters) {
  if (parts.empty()) throw DomainError("rowmerge: empty sequence");
  const Index rows = parts.front().rows();
  Index cols = 0;
  Index projected = 0;
  std::vector<ThinQR> qrs;
  qrs.reserve(parts.size());
  for (const RkMatrix& p : parts) {
    if (p.rows() != rows) throw DomainError("rowmerge: parts do not share the row set");
    qrs.push_back(p.rank() > 0 ? thin_qr(p.b(), counters)
                               : ThinQR{DenseMatrix(p.cols(), 0), DenseMatrix(0, 0)});
    cols += p.cols();
    projected += qrs.back().q.cols();
  }
  if (projected == 0) return RkMatrix(rows, cols);

  DenseMatrix a_hat(rows, projected);
  DenseMatrix q = DenseMatrix::Zero(cols, projected);
  Index row_off = 0;
  Index col_off = 0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const Index w = qrs[j].q.cols();
    if (w > 0) {
      a_hat.middleCols(col_off, w) = parts[j].a() * qrs[j].r.transpose();
      q.block(row_off, col_off, parts[j].cols(), w) = qrs[j].q;
    }
    row_off += parts[j].cols();
    col_off += w;
  }
  return truncate_projected(a_hat, q, ctl, counters);
}

RkMatrix rkmerge(const RkGrid& grid, const TruncationControl& ctl, OpCounters* counters) {
  const std::size_t p = grid.block_rows;
  const std::size_t q = grid.block_cols;
  if (p == 0 || q == 0 || grid.blocks.size() != p * q)
    throw DomainError("rkmerge: grid is empty or has the wrong number of blocks");
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j)
      if (grid(i, j).rows() != grid(i, 0).rows() || grid(i, j).cols() != grid(0, j).cols())
        throw DomainError("rkmerge: ragged grid");
  tally(counters, &OpCounters::rkmerge);

  // Merge each block column through the adjoints, then the columns.
  std::vector<RkMatrix> columns;
  columns.reserve(q);
  std::vector<RkMatrix> adjoints(p);
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t i = 0; i < p; ++i) adjoints[i] = grid(i, j).adjoint();
    columns.push_back(rowmerge(adjoints, ctl, counters).adjoint());
  }
  return rowmerge(columns, ctl, counters);
}

RkMatrix rk_restrict(const RkMatrix& r, Range rows, Range cols) {
  if (rows.size <= 0 || cols.size <= 0 || rows.offset < 0 || cols.offset < 0 ||
      rows.offset + rows.size > r.rows() || cols.offset + cols.size > r.cols())
    throw DomainError("rk_restrict: subrange empty or out of bounds");
  return RkMatrix(r.a().middleRows(rows.offset, rows.size),
                  r.b().middleRows(cols.offset, cols.size));
}

RkMatrix truncate_dense(const DenseMatrix& m, const TruncationControl& ctl) {
  ThinSVD svd = thin_svd(m);
  const Index k = ctl.choose_rank(svd.sigma);
  return RkMatrix(svd.u.leftCols(k), svd.v.leftCols(k) * svd.sigma.head(k).asDiagonal());
}

} // namespace hmat
