#include <cmath>

#include <Eigen/Cholesky>

#include "hmat/error.hpp"
#include "hmat/factorization.hpp"

namespace hmat {

namespace {

const DenseMatrix& diagonal_leaf(const HMatrix& g, Diagonal d) {
  if (g.kind() != HMatrix::Kind::dense)
    throw ContractError("triangular solve: diagonal leaf is not stored densely");
  const DenseMatrix& m = g.dense();
  if (d == Diagonal::non_unit)
    for (Index k = 0; k < m.rows(); ++k)
      if (m(k, k) == 0.0)
        throw NumericalError("triangular solve: zero diagonal entry", g.row_cluster().offset() + k, 1);
  return m;
}

void check_square(const HMatrix& g) {
  if (&g.row_cluster() != &g.col_cluster())
    throw DomainError("triangular factor must be over a diagonal block (t, t)");
}

MultiVectorRef rows_of(MultiVectorRef b, const HMatrix& g, std::size_t i) {
  const Range r = relative_range(g.row_cluster().son(i), g.row_cluster());
  return b.middleRows(r.offset, r.size);
}

} // namespace

void lower_solve(const HMatrix& l, MultiVectorRef b, Diagonal d) {
  check_square(l);
  if (b.rows() != l.rows()) throw DomainError("lower_solve: right-hand side has wrong row count");
  if (l.is_leaf()) {
    const DenseMatrix& m = diagonal_leaf(l, d);
    if (d == Diagonal::unit)
      m.triangularView<Eigen::UnitLower>().solveInPlace(b);
    else
      m.triangularView<Eigen::Lower>().solveInPlace(b);
    return;
  }
  const std::size_t n = l.son_rows();
  for (std::size_t i = 0; i < n; ++i) {
    lower_solve(l.son(i, i), rows_of(b, l, i), d);
    for (std::size_t k = i + 1; k < n; ++k)
      addeval(-1.0, l.son(k, i), rows_of(b, l, i), rows_of(b, l, k));
  }
}

void upper_solve(const HMatrix& r, MultiVectorRef b, Diagonal d) {
  check_square(r);
  if (b.rows() != r.rows()) throw DomainError("upper_solve: right-hand side has wrong row count");
  if (r.is_leaf()) {
    const DenseMatrix& m = diagonal_leaf(r, d);
    if (d == Diagonal::unit)
      m.triangularView<Eigen::UnitUpper>().solveInPlace(b);
    else
      m.triangularView<Eigen::Upper>().solveInPlace(b);
    return;
  }
  const std::size_t n = r.son_rows();
  for (std::size_t i = n; i-- > 0;) {
    upper_solve(r.son(i, i), rows_of(b, r, i), d);
    for (std::size_t k = 0; k < i; ++k)
      addeval(-1.0, r.son(k, i), rows_of(b, r, i), rows_of(b, r, k));
  }
}

void lower_solve_adjoint(const HMatrix& l, MultiVectorRef b, Diagonal d) {
  check_square(l);
  if (b.rows() != l.rows()) throw DomainError("lower_solve_adjoint: right-hand side has wrong row count");
  if (l.is_leaf()) {
    const DenseMatrix& m = diagonal_leaf(l, d);
    if (d == Diagonal::unit)
      m.triangularView<Eigen::UnitLower>().transpose().solveInPlace(b);
    else
      m.triangularView<Eigen::Lower>().transpose().solveInPlace(b);
    return;
  }
  const std::size_t n = l.son_rows();
  for (std::size_t i = n; i-- > 0;) {
    lower_solve_adjoint(l.son(i, i), rows_of(b, l, i), d);
    for (std::size_t k = 0; k < i; ++k)
      addevaltrans(-1.0, l.son(i, k), rows_of(b, l, i), rows_of(b, l, k));
  }
}

void upper_solve_adjoint(const HMatrix& r, MultiVectorRef b, Diagonal d) {
  check_square(r);
  if (b.rows() != r.rows()) throw DomainError("upper_solve_adjoint: right-hand side has wrong row count");
  if (r.is_leaf()) {
    const DenseMatrix& m = diagonal_leaf(r, d);
    if (d == Diagonal::unit)
      m.triangularView<Eigen::UnitUpper>().transpose().solveInPlace(b);
    else
      m.triangularView<Eigen::Upper>().transpose().solveInPlace(b);
    return;
  }
  const std::size_t n = r.son_rows();
  for (std::size_t i = 0; i < n; ++i) {
    upper_solve_adjoint(r.son(i, i), rows_of(b, r, i), d);
    for (std::size_t k = i + 1; k < n; ++k)
      addevaltrans(-1.0, r.son(i, k), rows_of(b, r, i), rows_of(b, r, k));
  }
}

namespace {

void solve_leaf_left(const HMatrix& l, Diagonal d, HMatrix& b) {
  if (b.kind() == HMatrix::Kind::dense)
    lower_solve(l, b.dense(), d);
  else if (b.kind() == HMatrix::Kind::lowrank)
    lower_solve(l, b.lowrank().a(), d);
  else
    throw ContractError("lower_solve_left: leaf factor with subdivided right-hand side");
}

void solve_leaf_right(const HMatrix& r, Diagonal d, HMatrix& b) {
  if (b.kind() == HMatrix::Kind::dense) {
    DenseMatrix bt = b.dense().transpose();
    upper_solve_adjoint(r, bt, d);
    b.dense() = bt.transpose();
  } else if (b.kind() == HMatrix::Kind::lowrank) {
    upper_solve_adjoint(r, b.lowrank().b(), d);
  } else {
    throw ContractError("upper_solve_right: leaf factor with subdivided right-hand side");
  }
}

void check_left(const HMatrix& l, const HMatrix& b) {
  check_square(l);
  if (&b.row_cluster() != &l.col_cluster())
    throw DomainError("lower_solve_left: right-hand side rows do not match the factor");
}

void check_right(const HMatrix& r, const HMatrix& b) {
  check_square(r);
  if (&b.col_cluster() != &r.row_cluster())
    throw DomainError("upper_solve_right: right-hand side columns do not match the factor");
}

} // namespace

void lower_solve_left(const HMatrix& l, Diagonal d, Accumulator& acc, HMatrix& b,
                      const TruncationControl& ctl, OpCounters* counters) {
  check_left(l, b);
  if (l.is_leaf() || b.is_leaf()) {
    acc_flush(acc, b, ctl, counters);
    solve_leaf_left(l, d, b);
    return;
  }
  std::vector<Accumulator> a = acc_split(acc, ctl, counters);
  acc.reset();
  const Cluster& t = l.row_cluster();
  const std::size_t nt = l.son_rows();
  const std::size_t nr = b.son_cols();
  for (std::size_t j = 0; j < nr; ++j)
    for (std::size_t i = 0; i < nt; ++i) {
      lower_solve_left(l.son(i, i), d, a[i * nr + j], b.son(i, j), ctl, counters);
      for (std::size_t k = i + 1; k < nt; ++k)
        addproduct(-1.0, t.son(i), l.son(k, i), b.son(i, j), a[k * nr + j], ctl, counters);
    }
}

void upper_solve_right(const HMatrix& r, Diagonal d, Accumulator& acc, HMatrix& b,
                       const TruncationControl& ctl, OpCounters* counters) {
  check_right(r, b);
  if (r.is_leaf() || b.is_leaf()) {
    acc_flush(acc, b, ctl, counters);
    solve_leaf_right(r, d, b);
    return;
  }
  std::vector<Accumulator> a = acc_split(acc, ctl, counters);
  acc.reset();
  const Cluster& t = r.row_cluster();
  const std::size_t ns = b.son_rows();
  const std::size_t nt = r.son_rows();
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      upper_solve_right(r.son(j, j), d, a[i * nt + j], b.son(i, j), ctl, counters);
      for (std::size_t k = j + 1; k < nt; ++k)
        addproduct(-1.0, t.son(j), b.son(i, j), r.son(j, k), a[i * nt + k], ctl, counters);
    }
}

namespace {

void lower_left_std(const HMatrix& l, Diagonal d, HMatrix& b, const TruncationControl& ctl,
                    OpCounters* counters) {
  check_left(l, b);
  if (l.is_leaf() || b.is_leaf()) {
    solve_leaf_left(l, d, b);
    return;
  }
  const std::size_t nt = l.son_rows();
  const std::size_t nr = b.son_cols();
  for (std::size_t j = 0; j < nr; ++j)
    for (std::size_t i = 0; i < nt; ++i) {
      lower_left_std(l.son(i, i), d, b.son(i, j), ctl, counters);
      for (std::size_t k = i + 1; k < nt; ++k)
        hmul_standard(-1.0, l.son(k, i), b.son(i, j), b.son(k, j), ctl, counters);
    }
}

void upper_right_std(const HMatrix& r, Diagonal d, HMatrix& b, const TruncationControl& ctl,
                     OpCounters* counters) {
  check_right(r, b);
  if (r.is_leaf() || b.is_leaf()) {
    solve_leaf_right(r, d, b);
    return;
  }
  const std::size_t ns = b.son_rows();
  const std::size_t nt = r.son_rows();
  for (std::size_t i = 0; i < ns; ++i)
    for (std::size_t j = 0; j < nt; ++j) {
      upper_right_std(r.son(j, j), d, b.son(i, j), ctl, counters);
      for (std::size_t k = j + 1; k < nt; ++k)
        hmul_standard(-1.0, b.son(i, j), r.son(j, k), b.son(i, k), ctl, counters);
    }
}

} // namespace

void lower_solve_left(Variant v, const HMatrix& l, Diagonal d, HMatrix& b,
                      const TruncationControl& ctl, OpCounters* counters) {
  if (v == Variant::standard) {
    lower_left_std(l, d, b, ctl, counters);
    return;
  }
  Accumulator acc(b.row_cluster(), b.col_cluster());
  lower_solve_left(l, d, acc, b, ctl, counters);
}

void upper_solve_right(Variant v, const HMatrix& r, Diagonal d, HMatrix& b,
                       const TruncationControl& ctl, OpCounters* counters) {
  if (v == Variant::standard) {
    upper_right_std(r, d, b, ctl, counters);
    return;
  }
  Accumulator acc(b.row_cluster(), b.col_cluster());
  upper_solve_right(r, d, acc, b, ctl, counters);
}

namespace {

void check_factor_input(const HMatrix& g) {
  check_square(g);
  const Cluster& t = g.row_cluster();
  if (t.is_leaf()) {
    if (g.kind() != HMatrix::Kind::dense)
      throw ContractError("factorization: diagonal leaf is not stored densely");
  } else if (t.son_count() != 2 || g.is_leaf()) {
    throw ContractError("factorization: needs a binary cluster tree and subdivided diagonal blocks");
  }
}

// Unpivoted in-place LU of a dense diagonal leaf.
void lu_leaf(HMatrix& g) {
  DenseMatrix& m = g.dense();
  const Index n = m.rows();
  for (Index k = 0; k < n; ++k) {
    const double p = m(k, k);
    if (p == 0.0 || !std::isfinite(p))
      throw NumericalError("hlr_decomp: vanishing pivot", g.row_cluster().offset() + k, 1);
    const Index rest = n - k - 1;
    m.col(k).tail(rest) /= p;
    m.bottomRightCorner(rest, rest).noalias() -= m.col(k).tail(rest) * m.row(k).tail(rest);
  }
}

void chol_leaf(HMatrix& g) {
  DenseMatrix& m = g.dense();
  Eigen::LLT<DenseMatrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericalError("hchol_decomp: matrix is not positive definite", g.row_cluster().offset(),
                         g.row_cluster().size());
  m = llt.matrixL();
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
}

} // namespace

void hlr_packed(Accumulator& acc, HMatrix& g, const TruncationControl& ctl, OpCounters* counters) {
  check_factor_input(g);
  if (g.is_leaf()) {
    acc_flush(acc, g, ctl, counters);
    lu_leaf(g);
    return;
  }
  std::vector<Accumulator> a = acc_split(acc, ctl, counters);
  acc.reset();
  HMatrix& g11 = g.son(0, 0);
  hlr_packed(a[0], g11, ctl, counters);
  lower_solve_left(g11, Diagonal::unit, a[1], g.son(0, 1), ctl, counters);
  upper_solve_right(g11, Diagonal::non_unit, a[2], g.son(1, 0), ctl, counters);
  addproduct(-1.0, g.row_cluster().son(0), g.son(1, 0), g.son(0, 1), a[3], ctl, counters);
  hlr_packed(a[3], g.son(1, 1), ctl, counters);
}

void hchol_packed(Accumulator& acc, HMatrix& g, const TruncationControl& ctl,
                  OpCounters* counters) {
  check_factor_input(g);
  if (g.is_leaf()) {
    acc_flush(acc, g, ctl, counters);
    chol_leaf(g);
    return;
  }
  std::vector<Accumulator> a = acc_split(acc, ctl, counters);
  acc.reset();
  HMatrix& g11 = g.son(0, 0);
  hchol_packed(a[0], g11, ctl, counters);
  // The upper half of the packed diagonal block is L11^T.
  upper_solve_right(g11, Diagonal::non_unit, a[2], g.son(1, 0), ctl, counters);
  g.son(0, 1) = g.son(1, 0).transposed();
  addproduct(-1.0, g.row_cluster().son(0), g.son(1, 0), g.son(0, 1), a[3], ctl, counters);
  hchol_packed(a[3], g.son(1, 1), ctl, counters);
}

void hlr_packed_standard(HMatrix& g, const TruncationControl& ctl, OpCounters* counters) {
  check_factor_input(g);
  if (g.is_leaf()) {
    lu_leaf(g);
    return;
  }
  HMatrix& g11 = g.son(0, 0);
  hlr_packed_standard(g11, ctl, counters);
  lower_left_std(g11, Diagonal::unit, g.son(0, 1), ctl, counters);
  upper_right_std(g11, Diagonal::non_unit, g.son(1, 0), ctl, counters);
  hmul_standard(-1.0, g.son(1, 0), g.son(0, 1), g.son(1, 1), ctl, counters);
  hlr_packed_standard(g.son(1, 1), ctl, counters);
}

void hchol_packed_standard(HMatrix& g, const TruncationControl& ctl, OpCounters* counters) {
  check_factor_input(g);
  if (g.is_leaf()) {
    chol_leaf(g);
    return;
  }
  HMatrix& g11 = g.son(0, 0);
  hchol_packed_standard(g11, ctl, counters);
  upper_right_std(g11, Diagonal::non_unit, g.son(1, 0), ctl, counters);
  g.son(0, 1) = g.son(1, 0).transposed();
  hmul_standard(-1.0, g.son(1, 0), g.son(0, 1), g.son(1, 1), ctl, counters);
  hchol_packed_standard(g.son(1, 1), ctl, counters);
}

namespace {

// Clears everything strictly above (lower = true) or below the diagonal.
void keep_triangle(HMatrix& g, bool lower, bool unit_diagonal) {
  if (g.is_leaf()) {
    DenseMatrix& m = g.dense();
    if (lower)
      m.triangularView<Eigen::StrictlyUpper>().setZero();
    else
      m.triangularView<Eigen::StrictlyLower>().setZero();
    if (unit_diagonal) m.diagonal().setOnes();
    return;
  }
  for (std::size_t i = 0; i < g.son_rows(); ++i)
    for (std::size_t j = 0; j < g.son_cols(); ++j) {
      if (i == j)
        keep_triangle(g.son(i, j), lower, unit_diagonal);
      else if ((j > i) == lower)
        g.son(i, j).set_zero();
    }
}

} // namespace

void FactorPair::solve(MultiVectorRef b) const {
  if (r) {
    lower_solve(l, b, Diagonal::unit);
    upper_solve(*r, b);
  } else {
    lower_solve(l, b, Diagonal::non_unit);
    lower_solve_adjoint(l, b, Diagonal::non_unit);
  }
}

void FactorPair::solve_adjoint(MultiVectorRef b) const {
  if (r) {
    upper_solve_adjoint(*r, b);
    lower_solve_adjoint(l, b, Diagonal::unit);
  } else {
    solve(b);
  }
}

FactorPair hlr_decomp(HMatrix& g, const TruncationControl& ctl, Variant v, OpCounters* counters) {
  if (v == Variant::standard) {
    hlr_packed_standard(g, ctl, counters);
  } else {
    Accumulator acc(g.row_cluster(), g.col_cluster());
    hlr_packed(acc, g, ctl, counters);
  }
  FactorPair f{g, g};
  keep_triangle(f.l, true, true);
  keep_triangle(*f.r, false, false);
  return f;
}

FactorPair hchol_decomp(HMatrix& g, const TruncationControl& ctl, Variant v,
                        OpCounters* counters) {
  if (v == Variant::standard) {
    hchol_packed_standard(g, ctl, counters);
  } else {
    Accumulator acc(g.row_cluster(), g.col_cluster());
    hchol_packed(acc, g, ctl, counters);
  }
  FactorPair f{g, std::nullopt};
  keep_triangle(f.l, true, false);
  return f;
}

} // namespace hmat
