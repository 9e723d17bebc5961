// Hierarchical matrices over a block tree: dense leaves, low-rank leaves and
// subdivided blocks, plus the exact matrix/multi-vector products and the
// truncated low-rank update.
#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hmat/block_tree.hpp"
#include "hmat/lowrank.hpp"

namespace hmat {

/// Rows indexed by a cluster's index set, columns by an auxiliary set K.
using MultiVector = Eigen::MatrixXd;
using ConstMultiVectorRef = Eigen::Ref<const Eigen::MatrixXd>;
using MultiVectorRef = Eigen::Ref<Eigen::MatrixXd>;

class HMatrix {
public:
  enum class Kind { dense, lowrank, subdivided };

  HMatrix(const Cluster& row, const Cluster& col, DenseMatrix nearfield);
  HMatrix(const Cluster& row, const Cluster& col, RkMatrix farfield);
  /// Sons are row-major over sons(row) x sons(col).
  HMatrix(const Cluster& row, const Cluster& col, std::vector<HMatrix> sons);

  /// All dense leaves zero, all low-rank leaves rank 0.
  static HMatrix zero(const Block& block);
  /// Copies inadmissible leaves, compresses admissible ones with ctl.
  /// `m` is the root block in tree ordering. Throws DomainError on shape mismatch.
  static HMatrix from_dense(const Block& block, const DenseMatrix& m,
                            const TruncationControl& ctl);

  const Cluster& row_cluster() const { return *row_; }
  const Cluster& col_cluster() const { return *col_; }
  Index rows() const { return row_->size(); }
  Index cols() const { return col_->size(); }

  Kind kind() const { return static_cast<Kind>(payload_.index()); }
  bool is_leaf() const { return kind() != Kind::subdivided; }

  DenseMatrix& dense() { return std::get<DenseMatrix>(payload_); }
  const DenseMatrix& dense() const { return std::get<DenseMatrix>(payload_); }
  RkMatrix& lowrank() { return std::get<RkMatrix>(payload_); }
  const RkMatrix& lowrank() const { return std::get<RkMatrix>(payload_); }

  std::size_t son_rows() const { return is_leaf() ? 0 : row_->son_count(); }
  std::size_t son_cols() const { return is_leaf() ? 0 : col_->son_count(); }
  HMatrix& son(std::size_t i, std::size_t j) { return sons()[i * col_->son_count() + j]; }
  const HMatrix& son(std::size_t i, std::size_t j) const {
    return sons()[i * col_->son_count() + j];
  }

  /// Exact assembly of all leaves.
  DenseMatrix to_dense() const;
  /// Keeps the structure, clears the payloads.
  void set_zero();
  /// Structure and payloads of the adjoint, over (col, row).
  HMatrix transposed() const;

private:
  std::vector<HMatrix>& sons() { return std::get<std::vector<HMatrix>>(payload_); }
  const std::vector<HMatrix>& sons() const { return std::get<std::vector<HMatrix>>(payload_); }

  const Cluster* row_;
  const Cluster* col_;
  std::variant<DenseMatrix, RkMatrix, std::vector<HMatrix>> payload_;
};

inline HMatrix h_zero(const Block& block) { return HMatrix::zero(block); }
inline HMatrix h_from_dense(const Block& block, const DenseMatrix& m,
                            const TruncationControl& ctl) {
  return HMatrix::from_dense(block, m, ctl);
}
inline DenseMatrix h_to_dense(const HMatrix& g) { return g.to_dense(); }

/// y += alpha * G * x, exact. Throws DomainError on shape mismatch and
/// ContractError if x has more than `column_cap` columns.
void addeval(double alpha, const HMatrix& g, ConstMultiVectorRef x, MultiVectorRef y,
             std::optional<Index> column_cap = std::nullopt);

/// x += alpha * G^T * y, exact.
void addevaltrans(double alpha, const HMatrix& g, ConstMultiVectorRef y, MultiVectorRef x,
                  std::optional<Index> column_cap = std::nullopt);

/// G <- blocktrunc(G + alpha * r): exact in dense leaves, rkadd in low-rank
/// leaves, restriction of r into subdivided blocks.
void rkupdate(double alpha, const RkMatrix& r, HMatrix& g, const TruncationControl& ctl,
              OpCounters* counters = nullptr);

/// Temporary leaves over sons(row) x sons(col), row-major, copied (dense)
/// or restricted (low-rank) from the leaf g. Throws ContractError if g is
/// subdivided or one of its clusters has no sons.
std::vector<HMatrix> split_leaf(const HMatrix& g);

/// Inverse of split_leaf: copies dense parts back, merges low-rank parts
/// with rkmerge.
void merge_leaf(std::vector<HMatrix>& parts, HMatrix& g, const TruncationControl& ctl,
                OpCounters* counters = nullptr);

struct StorageStats {
  std::size_t total_reals = 0;
  std::size_t dense_reals = 0;
  std::size_t lowrank_reals = 0;
  Index max_rank = 0;
  /// level -> (rank -> number of low-rank leaves)
  std::map<int, std::map<Index, std::size_t>> rank_histogram;
};

StorageStats storage_stats(const HMatrix& g);

/// Visits every leaf with its nesting level.
template <class F>
void for_each_leaf(const HMatrix& g, F&& f, int level = 0) {
  if (g.is_leaf()) {
    f(g, level);
    return;
  }
  for (std::size_t i = 0; i < g.son_rows(); ++i)
    for (std::size_t j = 0; j < g.son_cols(); ++j) for_each_leaf(g.son(i, j), f, level + 1);
}

} // namespace hmat
