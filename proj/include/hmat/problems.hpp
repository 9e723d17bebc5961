// Model problems: collocation matrices for single and double layer
// potentials on a triangulated unit sphere, and a jittered Gaussian kernel.
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "hmat/cluster_tree.hpp"

namespace hmat {

struct SurfacePointCloud {
  Eigen::Matrix3Xd points;
  Eigen::VectorXd weights;
  Eigen::Matrix3Xd normals;

  Index size() const { return points.cols(); }
};

/// Octahedron refined `level` times by 4-way subdivision, vertices projected
/// to the unit sphere. One point per triangle (projected barycenter) with the
/// spherical triangle's area as weight; 8 * 4^level points.
SurfacePointCloud sphere_cloud(int level);

/// g_ij = w_j / (4 pi |x_i - x_j|), g_ii = diagonal_scale * w_i / (4 pi sqrt(w_i / pi)),
/// then symmetrized.
DenseMatrix slp_matrix(const SurfacePointCloud& cloud, double diagonal_scale = 1.0);

/// Smallest power of two (starting at 1) for which slp_matrix is positive
/// definite; gives up after 2^20 and throws NumericalError.
double slp_diagonal_scale(const SurfacePointCloud& cloud);

/// k_ij = w_j <x_i - x_j, n_j> / (4 pi |x_i - x_j|^3), k_ii = 1/2.
DenseMatrix dlp_matrix(const SurfacePointCloud& cloud);

/// g_ij = exp(-|x_i - x_j|^2 / (2 l^2)) + jitter [i = j]; points are columns.
DenseMatrix gaussian_matrix(const Eigen::MatrixXd& points, double length_scale, double jitter);

/// n points uniformly distributed in [0, 1]^dim.
Eigen::MatrixXd random_points(Index n, Index dim, std::uint64_t seed);

/// Parameters of the Gaussian model problem used by the benchmark.
inline constexpr double gaussian_length_scale = 0.1;
inline constexpr double gaussian_jitter = 1e-2;

struct ModelProblem {
  Eigen::MatrixXd points;
  DenseMatrix matrix; // original ordering
  std::map<std::string, std::string> metadata;
};

/// "slp", "dlp" (sphere at `level`) or "gaussian" (8 * 4^level random points
/// in the unit cube). Throws DomainError for unknown names.
ModelProblem make_problem(const std::string& name, int level, std::uint64_t seed);

} // namespace hmat
