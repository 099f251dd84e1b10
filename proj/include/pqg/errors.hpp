#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pqg {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedOrder : public Error {
 public:
  explicit UnsupportedOrder(std::uint64_t q)
      : Error("unsupported field order " + std::to_string(q) +
              " (expected a prime or 2^k with k <= 16)"),
        order_(q) {}
  std::uint64_t order() const noexcept { return order_; }

 private:
  std::uint64_t order_;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("inverse of zero field element") {}
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A clique family that does not partition the edges of its union, or that
// contains a triangle of cliques. The witness lists the offending ids.
class CoverViolation : public Error {
 public:
  CoverViolation(std::string what, std::vector<std::uint32_t> witness)
      : Error(std::move(what)), witness_(std::move(witness)) {}
  const std::vector<std::uint32_t>& witness() const noexcept { return witness_; }

 private:
  std::vector<std::uint32_t> witness_;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

// Raised when a deterministic inequality that must hold (expander mixing)
// fails. Always an implementation bug, never a statistical event.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

// Raised when one of the exact integer identities of subset statistics fails.
class IdentityViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace pqg
