#include "hmat/cluster_tree.hpp"

#include <algorithm>
#include <numeric>

#include "hmat/error.hpp"

namespace hmat {

double BoundingBox::distance(const BoundingBox& other) const {
  double d2 = 0.0;
  for (Index i = 0; i < dim(); ++i) {
    const double gap = std::max({0.0, other.lo[i] - hi[i], lo[i] - other.hi[i]});
    d2 += gap * gap;
  }
  return std::sqrt(d2);
}

Index BoundingBox::longest_axis() const {
  Index best = 0;
  for (Index i = 1; i < dim(); ++i)
    if (hi[i] - lo[i] > hi[best] - lo[best]) best = i;
  return best;
}

namespace {

BoundingBox box_of(const Eigen::MatrixXd& points, const std::vector<Index>& order, Index offset,
                   Index size) {
  BoundingBox box;
  box.lo = points.col(order[offset]);
  box.hi = box.lo;
  for (Index i = offset + 1; i < offset + size; ++i) {
    box.lo = box.lo.cwiseMin(points.col(order[i]));
    box.hi = box.hi.cwiseMax(points.col(order[i]));
  }
  return box;
}

struct Builder {
  const Eigen::MatrixXd& points;
  Index leaf_size;
  std::vector<Index>& order;
  std::size_t next_id = 0;

  std::unique_ptr<Cluster> build(Index offset, Index size, int level) {
    auto c = std::make_unique<Cluster>();
    c->indices = {offset, size};
    c->box = box_of(points, order, offset, size);
    c->level = level;
    c->id = next_id++;
    if (size <= leaf_size) return c;

    const Index axis = c->box.longest_axis();
    const auto first = order.begin() + offset;
    const auto last = first + size;
    // Zero extent: keep the current order and cut at the index midpoint.
    if (c->box.hi[axis] > c->box.lo[axis]) {
      std::stable_sort(first, last, [&](Index a, Index b) {
        return points(axis, a) < points(axis, b);
      });
    }
    const Index left = size / 2;
    c->sons.push_back(build(offset, left, level + 1));
    c->sons.push_back(build(offset + left, size - left, level + 1));
    return c;
  }
};

} // namespace

ClusterTree::ClusterTree(std::unique_ptr<Cluster> root, std::vector<Index> tree_to_original)
    : root_(std::move(root)), tree_to_original_(std::move(tree_to_original)),
      original_to_tree_(tree_to_original_.size()) {
  for (std::size_t i = 0; i < tree_to_original_.size(); ++i)
    original_to_tree_[tree_to_original_[i]] = static_cast<Index>(i);
}

int ClusterTree::depth() const {
  int d = 0;
  for_each_cluster(*root_, [&](const Cluster& c) { d = std::max(d, c.level); });
  return d;
}

std::size_t ClusterTree::cluster_count() const {
  std::size_t n = 0;
  for_each_cluster(*root_, [&](const Cluster&) { ++n; });
  return n;
}

std::size_t ClusterTree::leaf_count() const {
  std::size_t n = 0;
  for_each_cluster(*root_, [&](const Cluster& c) { n += c.is_leaf() ? 1 : 0; });
  return n;
}

std::size_t ClusterTree::max_sons() const {
  std::size_t m = 0;
  for_each_cluster(*root_, [&](const Cluster& c) { m = std::max(m, c.son_count()); });
  return m;
}

Index ClusterTree::max_leaf_size() const {
  Index m = 0;
  for_each_cluster(*root_, [&](const Cluster& c) {
    if (c.is_leaf()) m = std::max(m, c.size());
  });
  return m;
}

Eigen::VectorXd ClusterTree::to_tree_order(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = v[tree_to_original_[i]];
  return out;
}

Eigen::VectorXd ClusterTree::to_original_order(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[tree_to_original_[i]] = v[i];
  return out;
}

ClusterTree build_cluster_tree(const Eigen::MatrixXd& points, Index leaf_size) {
  if (points.cols() == 0 || points.rows() == 0)
    throw DomainError("build_cluster_tree: empty point set");
  if (leaf_size < 1) throw DomainError("build_cluster_tree: leaf_size must be >= 1");

  std::vector<Index> order(points.cols());
  std::iota(order.begin(), order.end(), Index{0});
  Builder b{points, leaf_size, order};
  auto root = b.build(0, points.cols(), 0);
  return ClusterTree(std::move(root), std::move(order));
}

DenseMatrix to_tree_order(const DenseMatrix& m, const ClusterTree& rows, const ClusterTree& cols) {
  if (m.rows() != rows.size() || m.cols() != cols.size())
    throw DomainError("to_tree_order: matrix shape does not match the cluster trees");
  DenseMatrix out(m.rows(), m.cols());
  const auto& rp = rows.tree_to_original();
  const auto& cp = cols.tree_to_original();
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out(i, j) = m(rp[i], cp[j]);
  return out;
}

} // namespace hmat
