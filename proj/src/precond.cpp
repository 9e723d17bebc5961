#include "hmat/precond.hpp"

#include "hmat/error.hpp"

namespace hmat {

using Eigen::VectorXd;

LinearOperator as_operator(const HMatrix& g) {
  if (g.rows() != g.cols()) throw DomainError("as_operator: matrix is not square");
  const HMatrix* p = &g;
  return {g.rows(),
          [p](const VectorXd& x, VectorXd& y) {
            y = VectorXd::Zero(p->rows());
            addeval(1.0, *p, x, y);
          },
          [p](const VectorXd& x, VectorXd& y) {
            y = VectorXd::Zero(p->cols());
            addevaltrans(1.0, *p, x, y);
          }};
}

LinearOperator as_operator(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("as_operator: matrix is not square");
  const DenseMatrix* p = &m;
  return {m.rows(), [p](const VectorXd& x, VectorXd& y) { y.noalias() = *p * x; },
          [p](const VectorXd& x, VectorXd& y) { y.noalias() = p->transpose() * x; }};
}

LinearOperator inverse_operator(const FactorPair& f) {
  const FactorPair* p = &f;
  return {f.l.rows(),
          [p](const VectorXd& x, VectorXd& y) {
            y = x;
            p->solve(y);
          },
          [p](const VectorXd& x, VectorXd& y) {
            y = x;
            p->solve_adjoint(y);
          }};
}

double spectral_norm_estimate(const LinearOperator& m, int iterations) {
  if (iterations < 1) throw DomainError("spectral_norm_estimate: needs at least one iteration");
  const Index n = m.size;
  if (n == 0) return 0.0;
  VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = (i % 2 == 0) ? 1.0 : -1.0;
  v.normalize();
  VectorXd w;
  VectorXd u;
  double sigma = 0.0;
  for (int it = 0; it < iterations; ++it) {
    m.apply_adjoint(v, w);
    sigma = w.norm();
    m.apply(w, u);
    const double nu = u.norm();
    if (nu == 0.0) break;
    v = u / nu;
  }
  return sigma;
}

double precond_error(const LinearOperator& g, const LinearOperator& p, int iterations) {
  if (g.size != p.size) throw DomainError("precond_error: operator sizes differ");
  LinearOperator m;
  m.size = g.size;
  m.apply = [&](const VectorXd& x, VectorXd& y) {
    VectorXd gx;
    g.apply(x, gx);
    p.apply(gx, y);
    y = x - y;
  };
  m.apply_adjoint = [&](const VectorXd& x, VectorXd& y) {
    VectorXd px;
    p.apply_adjoint(x, px);
    g.apply_adjoint(px, y);
    y = x - y;
  };
  return spectral_norm_estimate(m, iterations);
}

double relative_error(const LinearOperator& a, const LinearOperator& b, int iterations) {
  if (a.size != b.size) throw DomainError("relative_error: operator sizes differ");
  LinearOperator d;
  d.size = a.size;
  d.apply = [&](const VectorXd& x, VectorXd& y) {
    VectorXd bx;
    a.apply(x, y);
    b.apply(x, bx);
    y -= bx;
  };
  d.apply_adjoint = [&](const VectorXd& x, VectorXd& y) {
    VectorXd bx;
    a.apply_adjoint(x, y);
    b.apply_adjoint(x, bx);
    y -= bx;
  };
  const double nb = spectral_norm_estimate(b, iterations);
  if (nb == 0.0) return spectral_norm_estimate(d, iterations);
  return spectral_norm_estimate(d, iterations) / nb;
}

} // namespace hmat
