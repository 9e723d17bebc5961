#include "hmat/problems.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Cholesky>

#include "hmat/error.hpp"

namespace hmat {

using Eigen::Vector3d;

namespace {

using Triangle = std::array<Vector3d, 3>;

double spherical_area(const Triangle& t) {
  const Vector3d& a = t[0];
  const Vector3d& b = t[1];
  const Vector3d& c = t[2];
  const double num = std::abs(a.dot(b.cross(c)));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

} // namespace

SurfacePointCloud sphere_cloud(int level) {
  if (level < 0) throw DomainError("sphere_cloud: level must be non-negative");
  const Vector3d e[6] = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<Triangle> tris;
  for (int k = 0; k < 4; ++k) {
    tris.push_back({e[k], e[(k + 1) % 4], e[4]});
    tris.push_back({e[(k + 1) % 4], e[k], e[5]});
  }
  for (int l = 0; l < level; ++l) {
    std::vector<Triangle> fine;
    fine.reserve(4 * tris.size());
    for (const Triangle& t : tris) {
      const Vector3d m01 = (t[0] + t[1]).normalized();
      const Vector3d m12 = (t[1] + t[2]).normalized();
      const Vector3d m20 = (t[2] + t[0]).normalized();
      fine.push_back({t[0], m01, m20});
      fine.push_back({m01, t[1], m12});
      fine.push_back({m20, m12, t[2]});
      fine.push_back({m01, m12, m20});
    }
    tris = std::move(fine);
  }

  SurfacePointCloud c;
  const Index n = static_cast<Index>(tris.size());
  c.points.resize(3, n);
  c.weights.resize(n);
  for (Index i = 0; i < n; ++i) {
    const Triangle& t = tris[i];
    c.points.col(i) = (t[0] + t[1] + t[2]).normalized();
    c.weights(i) = spherical_area(t);
  }
  c.normals = c.points;
  return c;
}

DenseMatrix slp_matrix(const SurfacePointCloud& cloud, double diagonal_scale) {
  const Index n = cloud.size();
  if (n == 0) throw DomainError("slp_matrix: empty point cloud");
  const double c = 1.0 / (4.0 * std::numbers::pi);
  DenseMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double w = cloud.weights(j);
      if (i == j)
        g(i, i) = diagonal_scale * c * w / std::sqrt(w / std::numbers::pi);
      else
        g(i, j) = c * w / (cloud.points.col(i) - cloud.points.col(j)).norm();
    }
  return 0.5 * (g + g.transpose());
}

double slp_diagonal_scale(const SurfacePointCloud& cloud) {
  for (double s = 1.0; s <= 1048576.0; s *= 2.0) {
    Eigen::LLT<DenseMatrix> llt(slp_matrix(cloud, s));
    if (llt.info() == Eigen::Success) return s;
  }
  throw NumericalError("slp_diagonal_scale: no admissible diagonal scaling", 0, cloud.size());
}

DenseMatrix dlp_matrix(const SurfacePointCloud& cloud) {
  const Index n = cloud.size();
  if (n == 0) throw DomainError("dlp_matrix: empty point cloud");
  const double c = 1.0 / (4.0 * std::numbers::pi);
  DenseMatrix k(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      if (i == j) {
        k(i, i) = 0.5;
        continue;
      }
      const Vector3d d = cloud.points.col(i) - cloud.points.col(j);
      const double r = d.norm();
      k(i, j) = c * cloud.weights(j) * d.dot(cloud.normals.col(j)) / (r * r * r);
    }
  return k;
}

DenseMatrix gaussian_matrix(const Eigen::MatrixXd& points, double length_scale, double jitter) {
  if (!(length_scale > 0.0)) throw DomainError("gaussian_matrix: length scale must be positive");
  if (!(jitter >= 0.0)) throw DomainError("gaussian_matrix: jitter must be non-negative");
  const Index n = points.cols();
  const double f = -1.0 / (2.0 * length_scale * length_scale);
  DenseMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      g(i, j) = std::exp(f * (points.col(i) - points.col(j)).squaredNorm());
  g.diagonal().array() += jitter;
  return g;
}

Eigen::MatrixXd random_points(Index n, Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd p(dim, n);
  for (Index j = 0; j < n; ++j)
    for (Index d = 0; d < dim; ++d) p(d, j) = u(rng);
  return p;
}

ModelProblem make_problem(const std::string& name, int level, std::uint64_t seed) {
  ModelProblem p;
  if (name == "slp" || name == "dlp") {
    SurfacePointCloud cloud = sphere_cloud(level);
    p.points = cloud.points;
    if (name == "slp") {
      const double s = slp_diagonal_scale(cloud);
      p.metadata["slp_diagonal_scale"] = std::to_string(s);
      p.matrix = slp_matrix(cloud, s);
    } else {
      p.matrix = dlp_matrix(cloud);
    }
    return p;
  }
  if (name == "gaussian") {
    if (level < 0) throw DomainError("make_problem: level must be non-negative");
    const Index n = Index{8} << (2 * level);
    p.points = random_points(n, 3, seed);
    p.matrix = gaussian_matrix(p.points, gaussian_length_scale, gaussian_jitter);
    p.metadata["length_scale"] = std::to_string(gaussian_length_scale);
    p.metadata["jitter"] = std::to_string(gaussian_jitter);
    return p;
  }
  throw DomainError("make_problem: unknown problem '" + name + "'");
}

} // namespace hmat
