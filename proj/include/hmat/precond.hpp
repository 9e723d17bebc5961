// Spectral norm estimates by power iteration, used to measure the quality
// of approximate inverses and factorizations.
#pragma once

#include <functional>

#include "hmat/factorization.hpp"

namespace hmat {

/// Square operator given by its action and the action of its adjoint.
struct LinearOperator {
  Index size = 0;
  std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)> apply;
  std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)> apply_adjoint;
};

LinearOperator as_operator(const HMatrix& g);
LinearOperator as_operator(const DenseMatrix& m);
/// x -> (L R)^-1 x or (L L^T)^-1 x.
LinearOperator inverse_operator(const FactorPair& f);

/// Estimate of ||M||_2 from power iteration with M M^T, started from the
/// normalized alternating vector (1, -1, 1, ...). Returns ||M^T v|| for
/// the last iterate v.
double spectral_norm_estimate(const LinearOperator& m, int iterations = 20);

/// Estimate of ||I - P G||_2. Throws DomainError on size mismatch or
/// iterations < 1.
double precond_error(const LinearOperator& g, const LinearOperator& p, int iterations = 20);

/// Estimate of ||A - B||_2 / ||B||_2.
double relative_error(const LinearOperator& a, const LinearOperator& b, int iterations = 20);

} // namespace hmat
