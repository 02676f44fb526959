#include "cachedof/combinatorics.hpp"

#include <limits>
#include <numeric>
#include <string>

#include "cachedof/error.hpp"

namespace cachedof {

int boxplus(int i, int j, int m) {
  if (m <= 0) throw Error(ErrorCode::kInvalidArgs, "boxplus modulus must be positive");
  if (i < 1 || i > m || j < 0) throw Error(ErrorCode::kInvalidArgs, "boxplus needs i in [m] and j >= 0");
  return 1 + (i + j - 1) % m;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i stays integral at every step.
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(ErrorCode::kInvalidArgs,
                  "C(" + std::to_string(n) + "," + std::to_string(k) + ") overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(acc);
}

BigInt binomial_big(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
  return acc;
}

BigInt factorial_big(std::uint64_t n) {
  BigInt acc = 1;
  for (std::uint64_t i = 2; i <= n; ++i) acc *= i;
  return acc;
}

BigInt pow_big(std::uint64_t base, std::uint64_t exponent) {
  BigInt result = 1;
  BigInt b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

std::uint64_t to_u64(const BigInt& value) {
  if (value < 0 || value > std::numeric_limits<std::uint64_t>::max()) {
    throw Error(ErrorCode::kInvalidArgs, "count " + value.str() + " does not fit in 64 bits");
  }
  return value.convert_to<std::uint64_t>();
}

std::vector<std::uint32_t> first_combination(std::uint32_t k) {
  std::vector<std::uint32_t> combo(k);
  std::iota(combo.begin(), combo.end(), 0U);
  return combo;
}

bool next_combination(std::vector<std::uint32_t>& combo, std::uint32_t n) {
  const auto k = static_cast<std::uint32_t>(combo.size());
  for (std::uint32_t pos = k; pos-- > 0;) {
    if (combo[pos] < n - k + pos) {
      ++combo[pos];
      for (std::uint32_t j = pos + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::uint64_t combination_rank(std::span<const std::uint32_t> combo, std::uint32_t n) {
  const auto k = static_cast<std::uint32_t>(combo.size());
  // Lexicographic rank = C(n,k) - 1 - sum_i C(n-1-c_i, k-i).
  std::uint64_t tail = 0;
  for (std::uint32_t i = 0; i < k; ++i) tail += binomial(n - 1 - combo[i], k - i);
  return binomial(n, k) - 1 - tail;
}

std::vector<std::uint32_t> combination_unrank(std::uint64_t rank, std::uint32_t n, std::uint32_t k) {
  if (rank >= binomial(n, k)) throw Error(ErrorCode::kInvalidArgs, "combination rank out of range");
  std::vector<std::uint32_t> combo;
  combo.reserve(k);
  std::uint32_t next = 0;
  for (std::uint32_t i = 0; i < k; ++i) {
    for (;; ++next) {
      const std::uint64_t block = binomial(n - 1 - next, k - 1 - i);
      if (rank < block) break;
      rank -= block;
    }
    combo.push_back(next++);
  }
  return combo;
}

}  // namespace cachedof
