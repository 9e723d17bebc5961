// Accumulated updates: a low-rank aggregate plus a list of pending products
// for one target block (t, r). Products are evaluated into the aggregate as
// soon as one factor is a leaf; otherwise they are deferred and pushed down
// the block tree by split and flush.
#pragma once

#include <vector>

#include "hmat/hmatrix.hpp"

namespace hmat {

/// alpha * X * Y with X over (t, mid) and Y over (mid, r), both subdivided.
/// X and Y are referenced, not copied: they must stay alive and unmodified
/// while any accumulator holding the product exists.
struct PendingProduct {
  double alpha = 1.0;
  const Cluster* mid = nullptr;
  const HMatrix* x = nullptr;
  const HMatrix* y = nullptr;
};

class Accumulator {
public:
  /// Empty accumulator for the block (t, r).
  Accumulator(const Cluster& t, const Cluster& r);

  const Cluster& row_cluster() const { return *t_; }
  const Cluster& col_cluster() const { return *r_; }
  const RkMatrix& rhat() const { return rhat_; }
  const std::vector<PendingProduct>& pending() const { return pending_; }
  bool empty() const { return rhat_.rank() == 0 && pending_.empty(); }

  /// Drops all content.
  void reset();

private:
  friend void addproduct(double, const Cluster&, const HMatrix&, const HMatrix&, Accumulator&,
                         const TruncationControl&, OpCounters*);
  friend std::vector<Accumulator> acc_split(const Accumulator&, const TruncationControl&,
                                            OpCounters*);

  const Cluster* t_;
  const Cluster* r_;
  RkMatrix rhat_;
  std::vector<PendingProduct> pending_;
};

inline Accumulator acc_new(const Cluster& t, const Cluster& r) { return Accumulator(t, r); }

/// Low-rank factorization of x * y when x or y is a leaf, built from
/// addeval/addevaltrans exactly as the accumulator evaluates products.
/// Throws ContractError if both are subdivided.
RkMatrix leaf_product(const HMatrix& x, const HMatrix& y);

/// Adds alpha * x * y (x over (t, s), y over (s, r)) to acc. Evaluated and
/// merged into rhat by rkadd if either factor is a leaf, deferred otherwise.
/// Throws DomainError if the clusters do not match.
void addproduct(double alpha, const Cluster& s, const HMatrix& x, const HMatrix& y,
                Accumulator& acc, const TruncationControl& ctl, OpCounters* counters = nullptr);

/// Accumulators for sons(t) x sons(r), row-major, carrying the restricted
/// aggregate and the son products of every pending product. Throws
/// ContractError if t or r has no sons.
std::vector<Accumulator> acc_split(const Accumulator& acc, const TruncationControl& ctl,
                                   OpCounters* counters = nullptr);

/// Adds the whole content of acc to z (an H-matrix over (t, r)) and resets acc.
void acc_flush(Accumulator& acc, HMatrix& z, const TruncationControl& ctl,
               OpCounters* counters = nullptr);

/// Node (t, s, r) of the product tree of two block trees.
struct ProductNode {
  const Cluster* t = nullptr;
  const Cluster* s = nullptr;
  const Cluster* r = nullptr;
  std::vector<ProductNode> sons;

  std::size_t node_count() const;
};

/// Throws DomainError if the column clusters of tij and the row clusters of
/// tjk are not the same tree.
ProductNode product_tree(const Block& tij, const Block& tjk);

} // namespace hmat
