// Operation counters passed explicitly through the arithmetic routines.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>

namespace hmat {

struct Cluster;

/// Plain copy of the counter values at one point in time.
struct CounterSnapshot {
  std::uint64_t qr = 0;
  std::uint64_t svd = 0;
  std::uint64_t rkadd = 0;
  std::uint64_t rkmerge = 0;
  std::uint64_t rkupdate_leaf = 0;
  std::uint64_t addproduct = 0;
  std::uint64_t flush = 0;

  /// Number of QR+SVD recompressions. Every truncating leaf update inside
  /// rkupdate is itself an rkadd, so rkupdate_leaf is already part of rkadd.
  std::uint64_t truncations() const { return rkadd + rkmerge; }

  CounterSnapshot& operator+=(const CounterSnapshot& o) {
    qr += o.qr;
    svd += o.svd;
    rkadd += o.rkadd;
    rkmerge += o.rkmerge;
    rkupdate_leaf += o.rkupdate_leaf;
    addproduct += o.addproduct;
    flush += o.flush;
    return *this;
  }

  bool operator==(const CounterSnapshot&) const = default;
};

/// Thread-safe tallies. Increments are relaxed atomics so sibling blocks may be
/// processed concurrently against one context.
class OpCounters {
public:
  std::atomic<std::uint64_t> qr{0};
  std::atomic<std::uint64_t> svd{0};
  std::atomic<std::uint64_t> rkadd{0};
  std::atomic<std::uint64_t> rkmerge{0};
  std::atomic<std::uint64_t> rkupdate_leaf{0};
  std::atomic<std::uint64_t> addproduct{0};
  std::atomic<std::uint64_t> flush{0};

  /// Called once for every block an accumulator is finally written into
  /// (the rkupdate branch of flush). Optional.
  std::function<void(const Cluster& row, const Cluster& col)> on_flush_target;

  OpCounters() = default;
  OpCounters(const OpCounters&) = delete;
  OpCounters& operator=(const OpCounters&) = delete;

  CounterSnapshot snapshot() const;
  void reset();
  /// Adds the counts of a child context.
  void merge(const CounterSnapshot& child);
};

inline void tally(OpCounters* c, std::atomic<std::uint64_t> OpCounters::*field) {
  if (c != nullptr) (c->*field).fetch_add(1, std::memory_order_relaxed);
}

inline CounterSnapshot OpCounters::snapshot() const {
  CounterSnapshot s;
  s.qr = qr.load();
  s.svd = svd.load();
  s.rkadd = rkadd.load();
  s.rkmerge = rkmerge.load();
  s.rkupdate_leaf = rkupdate_leaf.load();
  s.addproduct = addproduct.load();
  s.flush = flush.load();
  return s;
}

inline void OpCounters::reset() {
  qr = 0;
  svd = 0;
  rkadd = 0;
  rkmerge = 0;
  rkupdate_leaf = 0;
  addproduct = 0;
  flush = 0;
}

inline void OpCounters::merge(const CounterSnapshot& child) {
  qr += child.qr;
  svd += child.svd;
  rkadd += child.rkadd;
  rkmerge += child.rkmerge;
  rkupdate_leaf += child.rkupdate_leaf;
  addproduct += child.addproduct;
  flush += child.flush;
}

} // namespace hmat
