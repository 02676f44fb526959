#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace cachedof {

/// An element of GF(p^s), stored as the integer sum_i c_i p^i of its
/// polynomial coefficients c_0..c_{s-1} (low degree first).
struct FieldElem {
  std::uint32_t value = 0;

  friend auto operator<=>(const FieldElem&, const FieldElem&) = default;
};

enum class FieldOp { kAdd, kSub, kMul, kInv };

/// GF(q) for a prime power q = p^s. The modulus is the lexicographically
/// smallest monic irreducible of degree s, comparing coefficients from the
/// constant term upwards, so construction is a pure function of q.
///
/// Field is a cheap handle; copies share the same immutable tables.
class Field {
 public:
  /// Throws InvalidArgs for q < 2 or q > 2^16 and NotPrimePower otherwise.
  static Field make(std::uint32_t q);

  std::uint32_t characteristic() const noexcept;
  std::uint32_t degree() const noexcept;
  std::uint32_t order() const noexcept;
  /// Monic modulus, degree + 1 coefficients, constant term first.
  const std::vector<std::uint32_t>& modulus() const noexcept;

  FieldElem zero() const noexcept { return {}; }
  FieldElem one() const noexcept { return {1}; }
  /// Throws InvalidArgs if encoding >= q.
  FieldElem element(std::uint32_t encoding) const;

  FieldElem add(FieldElem a, FieldElem b) const;
  FieldElem sub(FieldElem a, FieldElem b) const;
  FieldElem neg(FieldElem a) const;
  FieldElem mul(FieldElem a, FieldElem b) const;
  /// Throws DivisionByZero for a == 0.
  FieldElem inv(FieldElem a) const;
  FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

  std::vector<std::uint32_t> coefficients(FieldElem a) const;
  FieldElem from_coefficients(std::span<const std::uint32_t> coeffs) const;

  friend bool operator==(const Field& lhs, const Field& rhs);

 private:
  struct Impl;
  explicit Field(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

/// Single entry point mirroring the four basic operations; `b` is ignored for
/// kInv and required otherwise.
FieldElem ff_arith(const Field& field, FieldOp op, FieldElem a, std::optional<FieldElem> b = std::nullopt);

}  // namespace cachedof
