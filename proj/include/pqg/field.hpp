#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>

#include "pqg/errors.hpp"

namespace pqg {

// Canonical representative of a field element: a residue in [0, q) for prime
// fields, a bit-packed GF(2) polynomial reduced modulo the field modulus for
// q = 2^k.
struct Element {
  std::uint32_t value = 0;

  constexpr Element() = default;
  constexpr explicit Element(std::uint32_t v) : value(v) {}

  constexpr bool is_zero() const noexcept { return value == 0; }
  friend constexpr auto operator<=>(Element, Element) = default;
};

namespace gf2 {

// Carry-less product of two GF(2) polynomials of degree < 32.
constexpr std::uint64_t clmul(std::uint32_t a, std::uint32_t b) noexcept {
  std::uint64_t acc = 0;
  std::uint64_t aa = a;
  while (b != 0) {
    if (b & 1U) acc ^= aa;
    aa <<= 1;
    b >>= 1;
  }
  return acc;
}

constexpr int degree(std::uint64_t p) noexcept {
  return p == 0 ? -1 : 63 - std::countl_zero(p);
}

constexpr std::uint64_t mod(std::uint64_t a, std::uint64_t m) noexcept {
  const int dm = degree(m);
  for (int da = degree(a); da >= dm; da = degree(a)) a ^= m << (da - dm);
  return a;
}

// Trial division by every polynomial of degree 1..deg/2.
constexpr bool is_irreducible(std::uint64_t p) noexcept {
  const int d = degree(p);
  if (d < 1) return false;
  for (std::uint64_t f = 2; degree(f) <= d / 2; ++f) {
    if (mod(p, f) == 0) return false;
  }
  return true;
}

// Lexicographically smallest irreducible polynomial of degree k.
constexpr std::uint64_t smallest_irreducible(int k) noexcept {
  for (std::uint64_t p = std::uint64_t{1} << k;; ++p) {
    if (is_irreducible(p)) return p;
  }
}

}  // namespace gf2

namespace detail {

constexpr bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace detail

// GF(q) for q prime or q = 2^k (1 <= k <= 16). Immutable value type; every
// operation is pure.
class Field {
 public:
  static constexpr int kMaxBinaryDegree = 16;
  static constexpr std::uint32_t kMaxPrime = (1U << 31) - 1;

  // Throws UnsupportedOrder unless q is prime or a supported power of two.
  static Field make(std::uint64_t q) {
    if (q >= 2 && detail::is_prime(q) && q <= kMaxPrime) {
      return Field(static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(q), 1, 0);
    }
    if (q >= 4 && std::has_single_bit(q)) {
      const int k = std::countr_zero(q);
      if (k <= kMaxBinaryDegree) {
        return Field(static_cast<std::uint32_t>(q), 2, k, gf2::smallest_irreducible(k));
      }
    }
    throw UnsupportedOrder(q);
  }

  std::uint32_t order() const noexcept { return q_; }
  std::uint32_t characteristic() const noexcept { return p_; }
  int degree() const noexcept { return k_; }
  // Bit-encoded modulus; present iff characteristic 2 and degree > 1.
  std::optional<std::uint64_t> modulus() const noexcept {
    if (modulus_ == 0) return std::nullopt;
    return modulus_;
  }
  bool is_binary() const noexcept { return p_ == 2; }

  Element zero() const noexcept { return Element{0}; }
  Element one() const noexcept { return Element{1}; }
  // Element with canonical representative v; v must lie in [0, q).
  Element element(std::uint32_t v) const noexcept { return Element{v}; }
  bool contains(Element a) const noexcept { return a.value < q_; }

  Element add(Element a, Element b) const noexcept {
    if (is_binary()) return Element{a.value ^ b.value};
    const std::uint64_t s = std::uint64_t{a.value} + b.value;
    return Element{static_cast<std::uint32_t>(s >= p_ ? s - p_ : s)};
  }

  Element neg(Element a) const noexcept {
    if (is_binary() || a.value == 0) return a;
    return Element{p_ - a.value};
  }

  Element sub(Element a, Element b) const noexcept { return add(a, neg(b)); }

  Element mul(Element a, Element b) const noexcept {
    if (modulus_ != 0) {
      return Element{static_cast<std::uint32_t>(gf2::mod(gf2::clmul(a.value, b.value), modulus_))};
    }
    if (p_ == 2) return Element{a.value & b.value};
    return Element{static_cast<std::uint32_t>((std::uint64_t{a.value} * b.value) % p_)};
  }

  Element pow(Element a, std::uint64_t e) const noexcept {
    Element result = one();
    while (e != 0) {
      if (e & 1U) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  // Extended Euclid for prime fields, a^(q-2) for binary fields.
  Element inv(Element a) const {
    if (a.is_zero()) throw DivisionByZero();
    if (is_binary()) return pow(a, q_ - 2);
    std::int64_t r0 = p_, r1 = a.value, s0 = 0, s1 = 1;
    while (r1 != 0) {
      const std::int64_t quot = r0 / r1;
      std::int64_t tmp = r0 - quot * r1;
      r0 = r1;
      r1 = tmp;
      tmp = s0 - quot * s1;
      s0 = s1;
      s1 = tmp;
    }
    if (s0 < 0) s0 += p_;
    return Element{static_cast<std::uint32_t>(s0)};
  }

  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  Field(std::uint32_t q, std::uint32_t p, int k, std::uint64_t modulus)
      : q_(q), p_(p), k_(k), modulus_(modulus) {}

  std::uint32_t q_;
  std::uint32_t p_;
  int k_;
  std::uint64_t modulus_;
};

}  // namespace pqg
