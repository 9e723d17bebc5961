// Exception types shared by all hmat modules.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmat {

/// Invalid argument: empty input, shape mismatch, out-of-range subrange.
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an algorithm does not hold
/// (non-binary cluster tree, pending product without sons, column cap exceeded).
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Numerical breakdown at a specific cluster, e.g. a singular diagonal leaf
/// or a non-positive Cholesky pivot.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, std::ptrdiff_t offset, std::ptrdiff_t size)
      : std::runtime_error(what + " (cluster [" + std::to_string(offset) + ", " +
                           std::to_string(offset + size) + "))"),
        offset_(offset), size_(size) {}

  std::ptrdiff_t cluster_offset() const noexcept { return offset_; }
  std::ptrdiff_t cluster_size() const noexcept { return size_; }

private:
  std::ptrdiff_t offset_;
  std::ptrdiff_t size_;
};

} // namespace hmat
