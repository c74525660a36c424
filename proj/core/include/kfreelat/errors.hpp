#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kfreelat {

// Thrown when a computation would exceed an explicit budget (bit size of a
// prime-product modulus, number of inclusion-exclusion terms, sieve size).
// Carries the amount that would have been needed so callers can report it.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& message, std::uint64_t required,
                std::uint64_t budget)
      : std::runtime_error(message + " (required " + std::to_string(required) +
                           ", budget " + std::to_string(budget) + ")"),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

}  // namespace kfreelat
