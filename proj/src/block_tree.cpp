#include "hmat/block_tree.hpp"

#include <algorithm>

#include "hmat/error.hpp"

namespace hmat {

bool Admissibility::operator()(const Cluster& t, const Cluster& s) const {
  const double dist = t.box.distance(s.box);
  if (dist <= 0.0) return false;
  return std::min(t.box.diameter(), s.box.diameter()) <= eta * dist;
}

namespace {

std::unique_ptr<Block> build(const Cluster& t, const Cluster& s, const Admissibility& adm,
                             int level) {
  auto b = std::make_unique<Block>();
  b->row = &t;
  b->col = &s;
  b->level = level;
  if (adm(t, s)) {
    b->kind = BlockKind::admissible_leaf;
  } else if (t.is_leaf() || s.is_leaf()) {
    b->kind = BlockKind::inadmissible_leaf;
  } else {
    b->kind = BlockKind::subdivided;
    for (const auto& ts : t.sons)
      for (const auto& ss : s.sons) b->sons.push_back(build(*ts, *ss, adm, level + 1));
  }
  return b;
}

// Length of the longest run of equal entries after sorting.
std::size_t longest_run(std::vector<const Cluster*>& v) {
  std::sort(v.begin(), v.end());
  std::size_t best = 0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    best = std::max(best, j - i);
    i = j;
  }
  return best;
}

} // namespace

BlockTree build_block_tree(const Cluster& row, const Cluster& col, double eta) {
  if (!(eta > 0.0)) throw DomainError("build_block_tree: eta must be positive");
  return BlockTree(build(row, col, Admissibility{eta}, 0));
}

TreeStats tree_stats(const Block& root) {
  TreeStats st;
  std::vector<const Cluster*> rows;
  std::vector<const Cluster*> cols;
  for_each_block(root, [&](const Block& b) {
    ++st.blocks;
    st.depth = std::max(st.depth, b.level);
    rows.push_back(b.row);
    cols.push_back(b.col);
    if (b.kind == BlockKind::admissible_leaf) ++st.admissible_leaves;
    if (b.kind == BlockKind::inadmissible_leaf) ++st.inadmissible_leaves;
  });
  st.sparsity_row = longest_run(rows);
  st.sparsity_col = longest_run(cols);
  return st;
}

} // namespace hmat
