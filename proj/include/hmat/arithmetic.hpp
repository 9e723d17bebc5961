// H-matrix multiplication and inversion, each in two variants: the standard
// one adds every elementary product to the target immediately, the
// accumulated one collects them in accumulators and flushes once per block.
#pragma once

#include "hmat/accumulator.hpp"

namespace hmat {

enum class Variant { standard, accumulated };

/// z <- blocktrunc(z + alpha * x * y), rkupdate after every elementary product.
/// x over (t, s), y over (s, r), z over (t, r); throws DomainError otherwise.
void hmul_standard(double alpha, const HMatrix& x, const HMatrix& y, HMatrix& z,
                   const TruncationControl& ctl, OpCounters* counters = nullptr);

/// Same update through one accumulator for (t, r): addproduct, then flush.
void hmul_accumulated(double alpha, const HMatrix& x, const HMatrix& y, HMatrix& z,
                      const TruncationControl& ctl, OpCounters* counters = nullptr);

void hmul(Variant v, double alpha, const HMatrix& x, const HMatrix& y, HMatrix& z,
          const TruncationControl& ctl, OpCounters* counters = nullptr);

/// Overwrites g (over (t, t)) with an approximation of (g + content(acc))^-1.
/// h is scratch storage with the structure of g. acc is consumed.
/// Requires binary cluster trees (ContractError) and dense diagonal leaves;
/// throws NumericalError for a singular diagonal leaf.
void hinvert(Accumulator& acc, HMatrix& g, HMatrix& h, const TruncationControl& ctl,
             OpCounters* counters = nullptr);

/// The same block recursion with hmul_standard for every product.
void hinvert_standard(HMatrix& g, HMatrix& h, const TruncationControl& ctl,
                      OpCounters* counters = nullptr);

/// Inverts g in place, allocating the scratch matrix.
void hinvert(Variant v, HMatrix& g, const TruncationControl& ctl, OpCounters* counters = nullptr);

} // namespace hmat
