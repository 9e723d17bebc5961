#include "hmat/dense.hpp"

#include <algorithm>

namespace hmat {

namespace {

ThinQR householder_qr(const Eigen::MatrixXd& m) {
  const Eigen::Index p = std::min(m.rows(), m.cols());
  ThinQR out;
  if (p == 0) {
    out.q = Eigen::MatrixXd(m.rows(), 0);
    out.r = Eigen::MatrixXd(0, m.cols());
    return out;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  out.q = Eigen::MatrixXd::Identity(m.rows(), p);
  out.q.applyOnTheLeft(qr.householderQ());
  out.r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  return out;
}

ThinSVD bidiagonal_svd(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

} // namespace

ThinQR thin_qr(const Eigen::MatrixXd& m, OpCounters* counters) {
  tally(counters, &OpCounters::qr);
  return householder_qr(m);
}

ThinSVD thin_svd(const Eigen::MatrixXd& m, OpCounters* counters) {
  tally(counters, &OpCounters::svd);
  const Eigen::Index p = std::min(m.rows(), m.cols());
  if (p == 0) {
    return {Eigen::MatrixXd(m.rows(), 0), Eigen::VectorXd(0), Eigen::MatrixXd(m.cols(), 0)};
  }
  // Tall and skinny: reduce to the square triangular factor first.
  if (m.rows() > 2 * m.cols()) {
    ThinQR qr = householder_qr(m);
    ThinSVD small = bidiagonal_svd(qr.r);
    return {qr.q * small.u, std::move(small.sigma), std::move(small.v)};
  }
  return bidiagonal_svd(m);
}

} // namespace hmat
