// Cluster trees: hierarchical partitions of an index set built by geometric
// bisection. After construction every cluster owns a contiguous index range
// in tree ordering.
#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace hmat {

using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXd;

/// Contiguous range [offset, offset + size) of global indices (tree ordering).
struct IndexSet {
  Index offset = 0;
  Index size = 0;

  Index end() const { return offset + size; }
  bool contains(const IndexSet& other) const {
    return other.offset >= offset && other.end() <= end();
  }
  bool operator==(const IndexSet&) const = default;
};

/// Axis-aligned bounding box.
struct BoundingBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Index dim() const { return lo.size(); }
  double diameter() const { return (hi - lo).norm(); }
  /// Euclidean distance between the boxes; zero if they touch or overlap.
  double distance(const BoundingBox& other) const;
  /// Longest axis; ties go to the lowest axis index.
  Index longest_axis() const;
};

struct Cluster {
  IndexSet indices;
  BoundingBox box;
  std::vector<std::unique_ptr<Cluster>> sons;
  int level = 0;
  /// Preorder number, unique within one tree.
  std::size_t id = 0;

  bool is_leaf() const { return sons.empty(); }
  Index size() const { return indices.size; }
  Index offset() const { return indices.offset; }
  const Cluster& son(std::size_t i) const { return *sons[i]; }
  std::size_t son_count() const { return sons.size(); }
};

/// Owns the root cluster and the permutation between the caller's point order
/// and tree order. Cluster addresses are stable for the lifetime of the tree.
class ClusterTree {
public:
  ClusterTree(std::unique_ptr<Cluster> root, std::vector<Index> tree_to_original);

  const Cluster& root() const { return *root_; }
  Index size() const { return root_->size(); }

  /// tree_to_original()[i] is the original index of the point at tree position i.
  const std::vector<Index>& tree_to_original() const { return tree_to_original_; }
  const std::vector<Index>& original_to_tree() const { return original_to_tree_; }

  int depth() const;
  std::size_t cluster_count() const;
  std::size_t leaf_count() const;
  /// Largest number of sons of any cluster.
  std::size_t max_sons() const;
  /// Largest leaf cluster.
  Index max_leaf_size() const;

  /// Reorders a vector given in original order into tree order.
  Eigen::VectorXd to_tree_order(const Eigen::VectorXd& v) const;
  Eigen::VectorXd to_original_order(const Eigen::VectorXd& v) const;

private:
  std::unique_ptr<Cluster> root_;
  std::vector<Index> tree_to_original_;
  std::vector<Index> original_to_tree_;
};

/// Builds a cluster tree over the columns of `points` (one d-dimensional point
/// per column). Clusters with more than `leaf_size` indices are split at the
/// coordinate median along the longest box axis; boxes of zero extent are split
/// at the index midpoint. Throws DomainError on empty input or leaf_size < 1.
ClusterTree build_cluster_tree(const Eigen::MatrixXd& points, Index leaf_size);

/// Permutes `m` (original ordering) into tree ordering of the given trees.
DenseMatrix to_tree_order(const DenseMatrix& m, const ClusterTree& rows, const ClusterTree& cols);

/// Visits every cluster in preorder.
template <class F>
void for_each_cluster(const Cluster& c, F&& f) {
  f(c);
  for (const auto& s : c.sons) for_each_cluster(*s, f);
}

} // namespace hmat
