#include <Eigen/LU>

#include "hmat/arithmetic.hpp"
#include "hmat/error.hpp"

namespace hmat {

namespace {

void check_square(const HMatrix& g, const HMatrix& h) {
  const Cluster& t = g.row_cluster();
  if (&g.col_cluster() != &t || &h.row_cluster() != &t || &h.col_cluster() != &t)
    throw DomainError("hinvert: g and h must both be over the block (t, t)");
  if (!t.is_leaf() && (t.son_count() != 2 || g.is_leaf() || h.is_leaf()))
    throw ContractError("hinvert: needs a binary cluster tree and subdivided diagonal blocks");
}

void invert_leaf(HMatrix& g) {
  const Cluster& t = g.row_cluster();
  if (g.kind() != HMatrix::Kind::dense)
    throw ContractError("hinvert: diagonal leaf is not stored densely");
  Eigen::FullPivLU<DenseMatrix> lu(g.dense());
  if (!lu.isInvertible()) throw NumericalError("hinvert: singular diagonal block", t.offset(), t.size());
  g.dense() = lu.inverse();
}

} // namespace

void hinvert(Accumulator& acc, HMatrix& g, HMatrix& h, const TruncationControl& ctl,
             OpCounters* counters) {
  check_square(g, h);
  const Cluster& t = g.row_cluster();
  if (&acc.row_cluster() != &t || &acc.col_cluster() != &t)
    throw DomainError("hinvert: accumulator is not over (t, t)");

  if (t.is_leaf()) {
    acc_flush(acc, g, ctl, counters);
    invert_leaf(g);
    return;
  }

  const Cluster& t1 = t.son(0);
  const Cluster& t2 = t.son(1);
  HMatrix& g11 = g.son(0, 0);
  HMatrix& g12 = g.son(0, 1);
  HMatrix& g21 = g.son(1, 0);
  HMatrix& g22 = g.son(1, 1);
  HMatrix& h12 = h.son(0, 1);
  HMatrix& h21 = h.son(1, 0);

  std::vector<Accumulator> a = acc_split(acc, ctl, counters);
  acc.reset();
  Accumulator& a11 = a[0];
  Accumulator& a12 = a[1];
  Accumulator& a21 = a[2];
  Accumulator& a22 = a[3];

  hinvert(a11, g11, h.son(0, 0), ctl, counters);
  acc_flush(a12, g12, ctl, counters);
  acc_flush(a21, g21, ctl, counters);

  h12.set_zero();
  h21.set_zero();
  addproduct(1.0, t1, g11, g12, a12, ctl, counters);
  acc_flush(a12, h12, ctl, counters);
  addproduct(1.0, t1, g21, g11, a21, ctl, counters);
  acc_flush(a21, h21, ctl, counters);

  // Schur complement: left in a22, consumed by the recursive call.
  addproduct(-1.0, t1, h21, g12, a22, ctl, counters);
  hinvert(a22, g22, h.son(1, 1), ctl, counters);

  g12.set_zero();
  g21.set_zero();
  addproduct(-1.0, t2, h12, g22, a12, ctl, counters);
  acc_flush(a12, g12, ctl, counters);
  addproduct(-1.0, t2, g22, h21, a21, ctl, counters);
  acc_flush(a21, g21, ctl, counters);

  addproduct(-1.0, t2, h12, g21, a11, ctl, counters);
  acc_flush(a11, g11, ctl, counters);
}

void hinvert_standard(HMatrix& g, HMatrix& h, const TruncationControl& ctl,
                      OpCounters* counters) {
  check_square(g, h);
  if (g.row_cluster().is_leaf()) {
    invert_leaf(g);
    return;
  }
  HMatrix& g11 = g.son(0, 0);
  HMatrix& g12 = g.son(0, 1);
  HMatrix& g21 = g.son(1, 0);
  HMatrix& g22 = g.son(1, 1);
  HMatrix& h12 = h.son(0, 1);
  HMatrix& h21 = h.son(1, 0);

  hinvert_standard(g11, h.son(0, 0), ctl, counters);
  h12.set_zero();
  h21.set_zero();
  hmul_standard(1.0, g11, g12, h12, ctl, counters);
  hmul_standard(1.0, g21, g11, h21, ctl, counters);
  hmul_standard(-1.0, h21, g12, g22, ctl, counters);
  hinvert_standard(g22, h.son(1, 1), ctl, counters);
  g12.set_zero();
  g21.set_zero();
  hmul_standard(-1.0, h12, g22, g12, ctl, counters);
  hmul_standard(-1.0, g22, h21, g21, ctl, counters);
  hmul_standard(-1.0, h12, g21, g11, ctl, counters);
}

void hinvert(Variant v, HMatrix& g, const TruncationControl& ctl, OpCounters* counters) {
  HMatrix h = g;
  h.set_zero();
  if (v == Variant::standard) {
    hinvert_standard(g, h, ctl, counters);
    return;
  }
  Accumulator acc(g.row_cluster(), g.col_cluster());
  hinvert(acc, g, h, ctl, counters);
}

} // namespace hmat
