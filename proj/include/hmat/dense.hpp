// Dense kernels used by the truncation routines: thin Householder QR and thin
// SVD with descending singular values. Both are deterministic for fixed input.
#pragma once

#include <Eigen/Dense>

#include "hmat/counters.hpp"

namespace hmat {

struct ThinQR {
  Eigen::MatrixXd q; // m x min(m, n), orthonormal columns
  Eigen::MatrixXd r; // min(m, n) x n, upper triangular
};

struct ThinSVD {
  Eigen::MatrixXd u;     // m x min(m, n)
  Eigen::VectorXd sigma; // descending
  Eigen::MatrixXd v;     // n x min(m, n)
};

ThinQR thin_qr(const Eigen::MatrixXd& m, OpCounters* counters = nullptr);
ThinSVD thin_svd(const Eigen::MatrixXd& m, OpCounters* counters = nullptr);

} // namespace hmat
