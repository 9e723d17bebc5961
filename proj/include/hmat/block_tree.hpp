// Block trees over pairs of clusters with the min-diameter admissibility rule.
#pragma once

#include <memory>
#include <vector>

#include "hmat/cluster_tree.hpp"

namespace hmat {

enum class BlockKind { admissible_leaf, inadmissible_leaf, subdivided };

struct Block {
  const Cluster* row = nullptr;
  const Cluster* col = nullptr;
  BlockKind kind = BlockKind::inadmissible_leaf;
  /// Row-major over sons(row) x sons(col); empty unless subdivided.
  std::vector<std::unique_ptr<Block>> sons;
  int level = 0;

  bool is_leaf() const { return kind != BlockKind::subdivided; }
  const Block& son(std::size_t i, std::size_t j) const {
    return *sons[i * col->son_count() + j];
  }
};

/// min(diam(t), diam(s)) <= eta * dist(t, s), with dist > 0 required.
struct Admissibility {
  double eta = 2.0;
  bool operator()(const Cluster& t, const Cluster& s) const;
};

class BlockTree {
public:
  explicit BlockTree(std::unique_ptr<Block> root) : root_(std::move(root)) {}
  const Block& root() const { return *root_; }

private:
  std::unique_ptr<Block> root_;
};

/// Throws DomainError if eta <= 0.
BlockTree build_block_tree(const Cluster& row, const Cluster& col, double eta);

struct TreeStats {
  int depth = 0;
  /// Largest number of blocks sharing one row cluster.
  std::size_t sparsity_row = 0;
  /// Largest number of blocks sharing one column cluster.
  std::size_t sparsity_col = 0;
  std::size_t admissible_leaves = 0;
  std::size_t inadmissible_leaves = 0;
  std::size_t blocks = 0;
};

TreeStats tree_stats(const Block& root);

template <class F>
void for_each_block(const Block& b, F&& f) {
  f(b);
  for (const auto& s : b.sons) for_each_block(*s, f);
}

} // namespace hmat
