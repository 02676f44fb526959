#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cachedof {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Cyclic shift on the 1-based index set [m]: 1 + ((i + j - 1) mod m).
int boxplus(int i, int j, int m);

/// C(n, k) in 64 bits. Throws InvalidArgs on overflow; returns 0 when k > n.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);
BigInt binomial_big(std::uint64_t n, std::uint64_t k);
BigInt factorial_big(std::uint64_t n);
BigInt pow_big(std::uint64_t base, std::uint64_t exponent);

/// Narrowing with a range check; throws InvalidArgs when `value` does not fit.
std::uint64_t to_u64(const BigInt& value);

/// Advances a sorted k-subset of {0..n-1} to its lexicographic successor.
/// Returns false (leaving `combo` unspecified) when `combo` was the last one.
bool next_combination(std::vector<std::uint32_t>& combo, std::uint32_t n);

/// First k-subset in lexicographic order: {0, 1, ..., k-1}.
std::vector<std::uint32_t> first_combination(std::uint32_t k);

/// Position of a sorted k-subset of {0..n-1} in lexicographic order.
std::uint64_t combination_rank(std::span<const std::uint32_t> combo, std::uint32_t n);
std::vector<std::uint32_t> combination_unrank(std::uint64_t rank, std::uint32_t n, std::uint32_t k);

/// Calls fn(const std::vector<uint32_t>&) for every k-subset of {0..n-1} in
/// lexicographic order.
template <typename Fn>
void for_each_combination(std::uint32_t n, std::uint32_t k, Fn&& fn) {
  if (k > n) return;
  auto combo = first_combination(k);
  do {
    fn(static_cast<const std::vector<std::uint32_t>&>(combo));
  } while (next_combination(combo, n));
}

}  // namespace cachedof
