#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "cachedof/combinatorics.hpp"
#include "cachedof/gf.hpp"

namespace cachedof {

using Vector = std::vector<FieldElem>;

/// A subspace of GF(q)^k held by its reduced row-echelon basis, which makes
/// equality a plain comparison of bases.
class Subspace {
 public:
  /// The trivial space {0} of GF(q)^k.
  Subspace(Field field, std::uint32_t ambient_dim);

  const Field& field() const noexcept { return field_; }
  std::uint32_t ambient_dim() const noexcept { return ambient_dim_; }
  std::uint32_t dim() const noexcept { return static_cast<std::uint32_t>(basis_.size()); }
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  std::vector<std::uint32_t> pivots() const;

  bool contains_vector(std::span<const FieldElem> v) const;

  friend bool operator==(const Subspace& lhs, const Subspace& rhs);
  /// Total order: field order, ambient dimension, dimension, then the
  /// flattened basis compared entry by entry on integer encodings.
  friend std::strong_ordering operator<=>(const Subspace& lhs, const Subspace& rhs);

 private:
  friend Subspace canonicalize(const Field& field, std::uint32_t ambient_dim, std::span<const Vector> vectors);

  Field field_;
  std::uint32_t ambient_dim_;
  std::vector<Vector> basis_;
};

/// Row-reduces `rows` in place to reduced row-echelon form, dropping zero
/// rows. Returns the rank.
std::uint32_t row_reduce(const Field& field, std::vector<Vector>& rows);

Subspace canonicalize(const Field& field, std::uint32_t ambient_dim, std::span<const Vector> vectors);
Subspace subspace_sum(const Subspace& a, const Subspace& b);
/// True iff b is a subspace of a.
bool contains(const Subspace& a, const Subspace& b);

/// Span of the first `count` standard basis vectors of GF(q)^k.
Subspace standard_subspace(const Field& field, std::uint32_t ambient_dim, std::uint32_t count);

/// All d-dimensional subspaces of GF(q)^k, sorted.
std::vector<Subspace> enumerate_subspaces(const Field& field, std::uint32_t ambient_dim, std::uint32_t d);

enum class FamilyRole { kTransmitters, kReceivers, kTxCacheSets, kRxCacheSets, kZeroForceSums, kZeroForceSets, kRoundSums, kRoundSets };

struct SubspaceFamily {
  FamilyRole role = FamilyRole::kTransmitters;
  std::vector<Subspace> members;  // sorted, duplicate-free

  std::size_t size() const noexcept { return members.size(); }
  /// Index of `s` among the members; throws InvalidArgs if absent.
  std::uint32_t index_of(const Subspace& s) const;
};

/// Every d-dimensional subspace containing `fixed`, enumerated through the
/// quotient by `fixed` rather than by filtering all d-dimensional subspaces.
SubspaceFamily enumerate_superspaces(const Subspace& fixed, std::uint32_t d, FamilyRole role = FamilyRole::kTransmitters);

/// Number of b-dimensional subspaces of GF(q)^a.
BigInt gaussian_binomial(std::uint64_t a, std::uint64_t b, std::uint64_t q);
/// Number of points of GF(q)^a: (q^a - 1)/(q - 1).
BigInt theta(std::uint64_t a, std::uint64_t q);
/// Unordered b-sets of points {C_i} with A + C_1 + ... + C_b direct, for a
/// fixed a-dimensional A inside GF(q)^k.
BigInt count_li_point_sets(std::uint64_t k, std::uint64_t a, std::uint64_t b, std::uint64_t q);
/// Points C with A' + C = A for a fixed hyperplane A' of an a-dimensional A.
BigInt count_complements(std::uint64_t a, std::uint64_t q);

/// Base-q integer with the first coordinate most significant.
std::uint64_t encode_vector(const Field& field, std::span<const FieldElem> v);
Vector decode_vector(const Field& field, std::uint32_t ambient_dim, std::uint64_t code);

/// Echelon basis grown one vector at a time; used for independence tests.
class EchelonBasis {
 public:
  EchelonBasis(Field field, std::uint32_t ambient_dim) : field_(std::move(field)), ambient_dim_(ambient_dim) {}

  /// Adds v if it is independent of the current rows; returns whether it was.
  bool insert(std::span<const FieldElem> v);
  bool in_span(std::span<const FieldElem> v) const;
  std::uint32_t rank() const noexcept { return static_cast<std::uint32_t>(rows_.size()); }

 private:
  Vector reduce(std::span<const FieldElem> v) const;

  Field field_;
  std::uint32_t ambient_dim_;
  std::vector<Vector> rows_;  // leading 1 at pivots_[i], sorted by pivot
  std::vector<std::uint32_t> pivots_;
};

}  // namespace cachedof
