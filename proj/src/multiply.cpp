#include "hmat/arithmetic.hpp"

#include "hmat/error.hpp"

namespace hmat {

namespace {

void check_shapes(const HMatrix& x, const HMatrix& y, const HMatrix& z) {
  if (&x.col_cluster() != &y.row_cluster() || &x.row_cluster() != &z.row_cluster() ||
      &y.col_cluster() != &z.col_cluster())
    throw DomainError("hmul: block trees of x, y and z are not compatible");
}

void mul_rec(double alpha, const HMatrix& x, const HMatrix& y, HMatrix& z,
             const TruncationControl& ctl, OpCounters* counters) {
  if (x.is_leaf() || y.is_leaf()) {
    rkupdate(alpha, leaf_product(x, y), z, ctl, counters);
    return;
  }
  const std::size_t nt = x.son_rows();
  const std::size_t ns = x.son_cols();
  const std::size_t nr = y.son_cols();
  if (!z.is_leaf()) {
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < nr; ++j)
        for (std::size_t k = 0; k < ns; ++k)
          mul_rec(alpha, x.son(i, k), y.son(k, j), z.son(i, j), ctl, counters);
    return;
  }
  // (t, r) is a leaf of the target: descend through temporary blocks.
  std::vector<HMatrix> parts = split_leaf(z);
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < nr; ++j)
      for (std::size_t k = 0; k < ns; ++k)
        mul_rec(alpha, x.son(i, k), y.son(k, j), parts[i * nr + j], ctl, counters);
  merge_leaf(parts, z, ctl, counters);
}

} // namespace

void hmul_standard(double alpha, const HMatrix& x, const HMatrix& y, HMatrix& z,
                   const TruncationControl& ctl, OpCounters* counters) {
  check_shapes(x, y, z);
  if (alpha == 0.0) return;
  mul_rec(alpha, x, y, z, ctl, counters);
}

void hmul_accumulated(double alpha, const HMatrix& x, const HMatrix& y, HMatrix& z,
                      const TruncationControl& ctl, OpCounters* counters) {
  check_shapes(x, y, z);
  if (alpha == 0.0) return;
  Accumulator acc(z.row_cluster(), z.col_cluster());
  addproduct(alpha, x.col_cluster(), x, y, acc, ctl, counters);
  acc_flush(acc, z, ctl, counters);
}

void hmul(Variant v, double alpha, const HMatrix& x, const HMatrix& y, HMatrix& z,
          const TruncationControl& ctl, OpCounters* counters) {
  if (v == Variant::standard)
    hmul_standard(alpha, x, y, z, ctl, counters);
  else
    hmul_accumulated(alpha, x, y, z, ctl, counters);
}

} // namespace hmat
