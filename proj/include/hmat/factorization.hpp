// Triangular solves and the H-LR / H-Cholesky factorizations.
//
// Factorizations work in packed form on the input matrix: for LR the
// strictly lower part holds the unit lower factor and the rest the upper
// factor; for Cholesky the lower part holds L and the upper part L^T.
// Both require binary cluster trees and dense diagonal leaves.
#pragma once

#include <optional>

#include "hmat/arithmetic.hpp"

namespace hmat {

enum class Diagonal { unit, non_unit };

// Multi-vector solves, exact. l/r are square over (t, t) and only their
// lower (resp. upper) part is read. NumericalError on a zero diagonal entry.

/// b <- L^-1 b
void lower_solve(const HMatrix& l, MultiVectorRef b, Diagonal d);
/// b <- R^-1 b
void upper_solve(const HMatrix& r, MultiVectorRef b, Diagonal d = Diagonal::non_unit);
/// b <- L^-T b
void lower_solve_adjoint(const HMatrix& l, MultiVectorRef b, Diagonal d);
/// b <- R^-T b
void upper_solve_adjoint(const HMatrix& r, MultiVectorRef b, Diagonal d = Diagonal::non_unit);

// H-matrix right-hand sides with truncated updates. The accumulator versions
// solve against b + content(acc) and consume acc.

/// L X = B, b over (t, r) overwritten by X.
void lower_solve_left(const HMatrix& l, Diagonal d, Accumulator& acc, HMatrix& b,
                      const TruncationControl& ctl, OpCounters* counters = nullptr);
/// X R = B, b over (s, t) overwritten by X.
void upper_solve_right(const HMatrix& r, Diagonal d, Accumulator& acc, HMatrix& b,
                       const TruncationControl& ctl, OpCounters* counters = nullptr);

void lower_solve_left(Variant v, const HMatrix& l, Diagonal d, HMatrix& b,
                      const TruncationControl& ctl, OpCounters* counters = nullptr);
void upper_solve_right(Variant v, const HMatrix& r, Diagonal d, HMatrix& b,
                       const TruncationControl& ctl, OpCounters* counters = nullptr);

/// Packed factorizations of g + content(acc); acc is consumed.
/// NumericalError names the cluster of a vanishing (LR) or non-positive
/// (Cholesky) pivot.
void hlr_packed(Accumulator& acc, HMatrix& g, const TruncationControl& ctl,
                OpCounters* counters = nullptr);
void hchol_packed(Accumulator& acc, HMatrix& g, const TruncationControl& ctl,
                  OpCounters* counters = nullptr);
void hlr_packed_standard(HMatrix& g, const TruncationControl& ctl,
                         OpCounters* counters = nullptr);
void hchol_packed_standard(HMatrix& g, const TruncationControl& ctl,
                           OpCounters* counters = nullptr);

/// l unit lower triangular and r upper triangular (LR), or l lower
/// triangular with r empty (Cholesky, g = L L^T).
struct FactorPair {
  HMatrix l;
  std::optional<HMatrix> r;

  /// b <- (L R)^-1 b, or (L L^T)^-1 b.
  void solve(MultiVectorRef b) const;
  /// b <- (L R)^-T b, or (L L^T)^-1 b.
  void solve_adjoint(MultiVectorRef b) const;
};

/// Factorizes g in place (packed) and returns the separated factors.
FactorPair hlr_decomp(HMatrix& g, const TruncationControl& ctl,
                      Variant v = Variant::accumulated, OpCounters* counters = nullptr);
FactorPair hchol_decomp(HMatrix& g, const TruncationControl& ctl,
                        Variant v = Variant::accumulated, OpCounters* counters = nullptr);

} // namespace hmat
