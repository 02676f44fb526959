// Brute-force reference for subspace counts over a prime field GF(p).
// Vectors are integers in base p, first coordinate most significant, and a
// subspace is the sorted list of every vector it contains. Nothing here uses
// row reduction; spans are grown by closing under addition and scaling.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

using Set = std::vector<std::uint32_t>;

struct Space {
  std::uint32_t p;
  std::uint32_t k;

  std::uint32_t size() const {
    std::uint32_t n = 1;
    for (std::uint32_t i = 0; i < k; ++i) n *= p;
    return n;
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t out = 0, place = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      out += ((a % p + b % p) % p) * place;
      a /= p;
      b /= p;
      place *= p;
    }
    return out;
  }

  std::uint32_t scale(std::uint32_t c, std::uint32_t a) const {
    std::uint32_t out = 0, place = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      out += ((c * (a % p)) % p) * place;
      a /= p;
      place *= p;
    }
    return out;
  }

  /// e_i with coordinate 0 most significant.
  std::uint32_t unit(std::uint32_t i) const {
    std::uint32_t v = 1;
    for (std::uint32_t j = i + 1; j < k; ++j) v *= p;
    return v;
  }

  /// span(S, v) for a subspace S given as its element list.
  Set extend(const Set& s, std::uint32_t v) const {
    std::set<std::uint32_t> out;
    for (auto x : s) {
      for (std::uint32_t c = 0; c < p; ++c) out.insert(add(x, scale(c, v)));
    }
    return {out.begin(), out.end()};
  }

  Set span(const std::vector<std::uint32_t>& gens) const {
    Set s{0};
    for (auto g : gens) s = extend(s, g);
    return s;
  }

  bool member(const Set& s, std::uint32_t v) const { return std::binary_search(s.begin(), s.end(), v); }

  std::uint32_t dim(const Set& s) const {
    std::uint32_t d = 0;
    for (std::size_t n = s.size(); n > 1; n /= p) ++d;
    return d;
  }

  /// Every d-dimensional subspace, each as its element list.
  std::set<Set> subspaces(std::uint32_t d) const {
    std::set<Set> level{{0}};
    for (std::uint32_t i = 0; i < d; ++i) {
      std::set<Set> next;
      for (const auto& s : level) {
        for (std::uint32_t v = 1; v < size(); ++v) {
          if (!member(s, v)) next.insert(extend(s, v));
        }
      }
      level = std::move(next);
    }
    return level;
  }

  /// Every subspace of dimension d containing `fixed`.
  std::vector<Set> superspaces(const Set& fixed, std::uint32_t d) const {
    std::vector<Set> out;
    for (const auto& s : subspaces(d)) {
      if (std::includes(s.begin(), s.end(), fixed.begin(), fixed.end())) out.push_back(s);
    }
    return out;
  }

  /// One nonzero representative per point.
  std::vector<std::uint32_t> points() const {
    std::vector<std::uint32_t> out;
    for (const auto& s : subspaces(1)) out.push_back(s[1]);
    return out;
  }
};

/// Sum of two subspaces by closure.
inline Set sum(const Space& sp, const Set& a, const Set& b) {
  Set out = a;
  for (auto v : b) {
    if (!sp.member(out, v)) out = sp.extend(out, v);
  }
  return out;
}

/// Counts unordered `size`-sets of `members` whose sum with `base` grows by
/// one dimension per member. Every member must contain `base` with one extra
/// dimension, or be a point when `base` is {0}. `visit` sees each accepted set.
inline std::uint64_t count_direct_sets(const Space& sp, const Set& base, const std::vector<Set>& members,
                                       std::uint32_t size,
                                       const std::function<void(const std::vector<std::uint32_t>&)>& visit = {}) {
  std::uint64_t count = 0;
  std::vector<std::uint32_t> chosen;
  std::function<void(std::uint32_t, const Set&)> rec = [&](std::uint32_t from, const Set& acc) {
    if (chosen.size() == size) {
      ++count;
      if (visit) visit(chosen);
      return;
    }
    for (std::uint32_t i = from; i < members.size(); ++i) {
      Set next = sum(sp, acc, members[i]);
      if (next.size() != acc.size() * sp.p) continue;
      chosen.push_back(i);
      rec(i + 1, next);
      chosen.pop_back();
    }
  };
  rec(0, base);
  return count;
}

}  // namespace oracle
