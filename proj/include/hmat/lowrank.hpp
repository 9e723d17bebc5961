// Factorized low-rank matrices A*B^T and the truncation algebra built on them.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hmat/cluster_tree.hpp"
#include "hmat/counters.hpp"

namespace hmat {

/// Rank selection for every truncation: keep the smallest k with
/// sigma_{k+1} <= rel_tol * sigma_1, then cap at max_rank.
struct TruncationControl {
  std::optional<Index> max_rank;
  double rel_tol = 0.0;

  /// Lossless: drops only exactly vanishing singular values.
  static TruncationControl exact() { return {}; }
  static TruncationControl relative(double eps, std::optional<Index> rank = std::nullopt) {
    return {rank, eps};
  }

  Index choose_rank(const Eigen::VectorXd& sigma) const;
};

/// Relative subrange [offset, offset + size) of a matrix dimension.
struct Range {
  Index offset = 0;
  Index size = 0;
};

/// Position of a son cluster's index set inside its parent's.
inline Range relative_range(const Cluster& son, const Cluster& parent) {
  return {son.offset() - parent.offset(), son.size()};
}

class RkMatrix {
public:
  RkMatrix() = default;
  /// Rank-0 representation of the rows x cols zero matrix.
  RkMatrix(Index rows, Index cols);
  /// Throws DomainError unless a.cols() == b.cols().
  RkMatrix(DenseMatrix a, DenseMatrix b);

  Index rows() const { return a_.rows(); }
  Index cols() const { return b_.rows(); }
  Index rank() const { return a_.cols(); }

  const DenseMatrix& a() const { return a_; }
  const DenseMatrix& b() const { return b_; }
  DenseMatrix& a() { return a_; }
  DenseMatrix& b() { return b_; }

  DenseMatrix dense() const;
  RkMatrix adjoint() const { return RkMatrix(b_, a_); }
  void set_zero();

private:
  DenseMatrix a_;
  DenseMatrix b_;
};

/// Best approximation of r under ctl: thin QR of B, SVD of A*R_B^T.
/// The left factor of the result has orthonormal columns and the singular
/// values are stored in the right factor.
RkMatrix svd_trunc(const RkMatrix& r, const TruncationControl& ctl,
                   OpCounters* counters = nullptr);

/// r2 <- trunc(r2 + alpha * r1). Throws DomainError on shape mismatch.
void rkadd(double alpha, const RkMatrix& r1, RkMatrix& r2, const TruncationControl& ctl,
           OpCounters* counters = nullptr);

/// Truncated horizontal concatenation [R_1 ... R_p] of parts sharing rows.
/// Throws DomainError for an empty sequence or mismatched row counts.
RkMatrix rowmerge(std::span<const RkMatrix> parts, const TruncationControl& ctl,
                  OpCounters* counters = nullptr);

/// p x q block matrix of low-rank blocks, stored row-major.
struct RkGrid {
  std::size_t block_rows = 0;
  std::size_t block_cols = 0;
  std::vector<RkMatrix> blocks;

  const RkMatrix& operator()(std::size_t i, std::size_t j) const {
    return blocks[i * block_cols + j];
  }
};

/// Truncated merge of a block grid: columns first, then across columns.
/// Throws DomainError for ragged grids.
RkMatrix rkmerge(const RkGrid& grid, const TruncationControl& ctl,
                 OpCounters* counters = nullptr);

/// Submatrix of r, no arithmetic. Throws DomainError for empty or
/// out-of-range subranges.
RkMatrix rk_restrict(const RkMatrix& r, Range rows, Range cols);

/// Compresses a dense block under ctl via its SVD.
RkMatrix truncate_dense(const DenseMatrix& m, const TruncationControl& ctl);

} // namespace hmat
