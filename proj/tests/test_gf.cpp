#include <doctest.h>

#include <vector>

#include "cachedof/error.hpp"
#include "cachedof/gf.hpp"

using namespace cachedof;

namespace {

// Schoolbook product of coefficient lists reduced by a monic modulus.
std::vector<std::uint32_t> poly_mulmod(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                       const std::vector<std::uint32_t>& mod, std::uint32_t p) {
  const std::size_t s = mod.size() - 1;
  std::vector<std::uint32_t> prod(2 * s, 0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  for (std::size_t d = prod.size(); d-- > s;) {
    const auto c = prod[d];
    if (c == 0) continue;
    for (std::size_t i = 0; i <= s; ++i) prod[d - s + i] = (prod[d - s + i] + (p - c) * mod[i] % p) % p;
  }
  prod.resize(s);
  return prod;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kFormat;
}

}  // namespace

TEST_CASE("smallest irreducible moduli") {
  CHECK(Field::make(4).modulus() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(Field::make(8).modulus() == std::vector<std::uint32_t>{1, 0, 1, 1});
  CHECK(Field::make(9).modulus() == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(Field::make(5).degree() == 1);
  CHECK(Field::make(27).characteristic() == 3);
}

TEST_CASE("GF(4) tables") {
  const auto f = Field::make(4);
  // x * x = x + 1, x * (x + 1) = 1
  CHECK(f.mul({2}, {2}) == FieldElem{3});
  CHECK(f.mul({2}, {3}) == FieldElem{1});
  CHECK(f.add({2}, {3}) == FieldElem{1});
  CHECK(f.inv({2}) == FieldElem{3});
}

TEST_CASE("multiplication agrees with polynomial arithmetic") {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 25u, 27u, 32u, 49u, 81u, 121u, 125u, 243u, 256u}) {
    const auto f = Field::make(q);
    const auto p = f.characteristic();
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        const auto expect = f.from_coefficients(poly_mulmod(f.coefficients({a}), f.coefficients({b}), f.modulus(), p));
        REQUIRE(f.mul({a}, {b}) == expect);
      }
    }
  }
}

TEST_CASE("field axioms hold exhaustively") {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u}) {
    const auto f = Field::make(q);
    for (std::uint32_t a = 0; a < q; ++a) {
      const FieldElem x{a};
      CHECK(f.add(x, f.neg(x)) == f.zero());
      CHECK(f.mul(x, f.one()) == x);
      if (a != 0) CHECK(f.mul(x, f.inv(x)) == f.one());
      for (std::uint32_t b = 0; b < q; ++b) {
        const FieldElem y{b};
        CHECK(f.add(x, y) == f.add(y, x));
        CHECK(f.mul(x, y) == f.mul(y, x));
        CHECK(f.sub(f.add(x, y), y) == x);
        for (std::uint32_t c = 0; c < q; ++c) {
          const FieldElem z{c};
          REQUIRE(f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z)));
          REQUIRE(f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z)));
        }
      }
    }
  }
}

TEST_CASE("large fields compute without tables") {
  for (std::uint32_t q : {257u * 1u, 1024u, 65536u, 3u * 3u * 3u * 3u * 3u * 3u}) {
    const auto f = Field::make(q);
    for (std::uint32_t a = 1; a < q; a += q / 97 + 1) {
      CHECK(f.mul({a}, f.inv({a})) == f.one());
      CHECK(f.div({a}, {a}) == f.one());
    }
  }
}

TEST_CASE("multiplicative group is cyclic of order q - 1") {
  for (std::uint32_t q : {4u, 8u, 9u, 16u, 27u}) {
    const auto f = Field::make(q);
    bool found = false;
    for (std::uint32_t g = 2; g < q && !found; ++g) {
      FieldElem x = f.one();
      std::uint32_t order = 0;
      do {
        x = f.mul(x, {g});
        ++order;
      } while (x != f.one());
      found = order == q - 1;
    }
    CHECK(found);
  }
}

TEST_CASE("ff_arith dispatch") {
  const auto f = Field::make(7);
  CHECK(ff_arith(f, FieldOp::kAdd, {5}, FieldElem{4}) == FieldElem{2});
  CHECK(ff_arith(f, FieldOp::kSub, {2}, FieldElem{5}) == FieldElem{4});
  CHECK(ff_arith(f, FieldOp::kMul, {3}, FieldElem{5}) == FieldElem{1});
  CHECK(ff_arith(f, FieldOp::kInv, {3}) == FieldElem{5});
}

TEST_CASE("errors") {
  CHECK(code_of([] { Field::make(6); }) == ErrorCode::kNotPrimePower);
  CHECK(code_of([] { Field::make(12); }) == ErrorCode::kNotPrimePower);
  CHECK(code_of([] { Field::make(1); }) == ErrorCode::kInvalidArgs);
  CHECK(code_of([] { Field::make(4).inv({0}); }) == ErrorCode::kDivisionByZero);
  CHECK(code_of([] { Field::make(4).element(4); }) == ErrorCode::kInvalidArgs);
  CHECK(code_of([] { ff_arith(Field::make(5), FieldOp::kAdd, {1}); }) == ErrorCode::kInvalidArgs);
  CHECK(Field::make(9) == Field::make(9));
  CHECK_FALSE(Field::make(9) == Field::make(3));
}
