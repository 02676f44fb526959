#include "cachedof/gf.hpp"

#include <string>

#include "cachedof/error.hpp"

namespace cachedof {
namespace {

constexpr std::uint32_t kMaxOrder = 1U << 16U;
constexpr std::uint32_t kTabulatedOrder = 256;

using Poly = std::vector<std::uint32_t>;

// Strips trailing zero coefficients; the zero polynomial becomes empty.
void trim(Poly& poly) {
  while (!poly.empty() && poly.back() == 0) poly.pop_back();
}

std::uint32_t inverse_mod_prime(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1;
  std::uint64_t base = a % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1U) {
    if (e & 1U) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of `num` modulo `den` over GF(p); den must be nonzero after trim.
Poly poly_mod(Poly num, Poly den, std::uint32_t p) {
  trim(num);
  trim(den);
  const std::uint32_t lead_inv = inverse_mod_prime(den.back(), p);
  while (num.size() >= den.size()) {
    const std::uint64_t factor = static_cast<std::uint64_t>(num.back()) * lead_inv % p;
    const std::size_t shift = num.size() - den.size();
    for (std::size_t i = 0; i < den.size(); ++i) {
      const std::uint64_t sub = factor * den[i] % p;
      num[shift + i] = static_cast<std::uint32_t>((num[shift + i] + p - sub) % p);
    }
    trim(num);
  }
  return num;
}

Poly decode(std::uint32_t value, std::uint32_t p, std::uint32_t s) {
  Poly coeffs(s);
  for (std::uint32_t i = 0; i < s; ++i) {
    coeffs[i] = value % p;
    value /= p;
  }
  return coeffs;
}

std::uint32_t encode(std::span<const std::uint32_t> coeffs, std::uint32_t p) {
  std::uint32_t value = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) value = value * p + coeffs[i];
  return value;
}

// Monic irreducibility by trial division with every monic polynomial of degree
// 1..s/2.
bool is_irreducible(const Poly& candidate, std::uint32_t p) {
  const std::uint32_t s = static_cast<std::uint32_t>(candidate.size()) - 1;
  for (std::uint32_t d = 1; 2 * d <= s; ++d) {
    std::uint32_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint32_t low = 0; low < count; ++low) {
      Poly divisor = decode(low, p, d);
      divisor.push_back(1);
      if (poly_mod(candidate, divisor, p).empty()) return false;
    }
  }
  return true;
}

Poly smallest_irreducible(std::uint32_t p, std::uint32_t s) {
  if (s == 1) return {0, 1};
  std::uint32_t count = 1;
  for (std::uint32_t i = 0; i < s; ++i) count *= p;
  // Lexicographic order with the constant term most significant: walk the
  // encoding with c_0 as the leading digit.
  for (std::uint32_t index = 0; index < count; ++index) {
    Poly candidate(s + 1);
    std::uint32_t rest = index;
    for (std::uint32_t i = s; i-- > 0;) {
      candidate[i] = rest % p;
      rest /= p;
    }
    candidate[s] = 1;
    if (is_irreducible(candidate, p)) return candidate;
  }
  throw Error(ErrorCode::kInvalidArgs, "no irreducible polynomial found");
}

}  // namespace

struct Field::Impl {
  std::uint32_t p = 0;
  std::uint32_t s = 0;
  std::uint32_t q = 0;
  Poly modulus;
  std::vector<std::uint32_t> add_table;  // q*q entries, only when q <= kTabulatedOrder
  std::vector<std::uint32_t> mul_table;
  std::vector<std::uint32_t> neg_table;
  std::vector<std::uint32_t> inv_table;

  std::uint32_t add_raw(std::uint32_t a, std::uint32_t b) const {
    if (s == 1) return (a + b) % p;
    std::uint32_t out = 0;
    std::uint32_t place = 1;
    for (std::uint32_t i = 0; i < s; ++i) {
      out += ((a % p + b % p) % p) * place;
      a /= p;
      b /= p;
      place *= p;
    }
    return out;
  }

  std::uint32_t mul_raw(std::uint32_t a, std::uint32_t b) const {
    if (s == 1) return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
    const Poly pa = decode(a, p, s);
    const Poly pb = decode(b, p, s);
    Poly product(2 * s - 1, 0);
    for (std::uint32_t i = 0; i < s; ++i) {
      for (std::uint32_t j = 0; j < s; ++j) {
        product[i + j] = static_cast<std::uint32_t>((product[i + j] + static_cast<std::uint64_t>(pa[i]) * pb[j]) % p);
      }
    }
    Poly rem = poly_mod(std::move(product), modulus, p);
    rem.resize(s, 0);
    return encode(rem, p);
  }
};

Field Field::make(std::uint32_t q) {
  if (q < 2 || q > kMaxOrder) {
    throw Error(ErrorCode::kInvalidArgs, "field order must lie in [2, 65536], got " + std::to_string(q));
  }
  std::uint32_t p = 0;
  for (std::uint32_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = q;
  std::uint32_t s = 0;
  std::uint32_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++s;
  }
  if (rest != 1) throw Error(ErrorCode::kNotPrimePower, std::to_string(q) + " has two distinct prime factors");

  auto impl = std::make_shared<Impl>();
  impl->p = p;
  impl->s = s;
  impl->q = q;
  impl->modulus = smallest_irreducible(p, s);

  impl->neg_table.resize(q);
  for (std::uint32_t a = 0; a < q; ++a) {
    Poly c = decode(a, p, s);
    for (auto& x : c) x = (p - x) % p;
    impl->neg_table[a] = encode(c, p);
  }
  if (q <= kTabulatedOrder) {
    impl->add_table.resize(static_cast<std::size_t>(q) * q);
    impl->mul_table.resize(static_cast<std::size_t>(q) * q);
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        impl->add_table[a * q + b] = impl->add_raw(a, b);
        impl->mul_table[a * q + b] = impl->mul_raw(a, b);
      }
    }
  }
  // a^(q-2) is the inverse of every nonzero a.
  impl->inv_table.assign(q, 0);
  for (std::uint32_t a = 1; a < q; ++a) {
    std::uint32_t result = 1;
    std::uint32_t base = a;
    for (std::uint32_t e = q - 2; e > 0; e >>= 1U) {
      if (e & 1U) result = impl->mul_raw(result, base);
      base = impl->mul_raw(base, base);
    }
    impl->inv_table[a] = result;
  }
  return Field(std::move(impl));
}

std::uint32_t Field::characteristic() const noexcept { return impl_->p; }
std::uint32_t Field::degree() const noexcept { return impl_->s; }
std::uint32_t Field::order() const noexcept { return impl_->q; }
const std::vector<std::uint32_t>& Field::modulus() const noexcept { return impl_->modulus; }

FieldElem Field::element(std::uint32_t encoding) const {
  if (encoding >= impl_->q) {
    throw Error(ErrorCode::kInvalidArgs, "element " + std::to_string(encoding) + " outside GF(" + std::to_string(impl_->q) + ")");
  }
  return {encoding};
}

FieldElem Field::add(FieldElem a, FieldElem b) const {
  const Impl& f = *impl_;
  if (!f.add_table.empty()) return {f.add_table[a.value * f.q + b.value]};
  return {f.add_raw(a.value, b.value)};
}

FieldElem Field::neg(FieldElem a) const { return {impl_->neg_table[a.value]}; }

FieldElem Field::sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }

FieldElem Field::mul(FieldElem a, FieldElem b) const {
  const Impl& f = *impl_;
  if (!f.mul_table.empty()) return {f.mul_table[a.value * f.q + b.value]};
  return {f.mul_raw(a.value, b.value)};
}

FieldElem Field::inv(FieldElem a) const {
  if (a.value == 0) throw Error(ErrorCode::kDivisionByZero, "inverse of zero");
  return {impl_->inv_table[a.value]};
}

std::vector<std::uint32_t> Field::coefficients(FieldElem a) const { return decode(a.value, impl_->p, impl_->s); }

FieldElem Field::from_coefficients(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() != impl_->s) throw Error(ErrorCode::kInvalidArgs, "coefficient vector has wrong length");
  for (auto c : coeffs) {
    if (c >= impl_->p) throw Error(ErrorCode::kInvalidArgs, "coefficient outside [0, p)");
  }
  return {encode(coeffs, impl_->p)};
}

bool operator==(const Field& lhs, const Field& rhs) {
  return lhs.impl_->p == rhs.impl_->p && lhs.impl_->s == rhs.impl_->s && lhs.impl_->modulus == rhs.impl_->modulus;
}

FieldElem ff_arith(const Field& field, FieldOp op, FieldElem a, std::optional<FieldElem> b) {
  if (op != FieldOp::kInv && !b) throw Error(ErrorCode::kInvalidArgs, "binary field operation needs two operands");
  switch (op) {
    case FieldOp::kAdd: return field.add(a, *b);
    case FieldOp::kSub: return field.sub(a, *b);
    case FieldOp::kMul: return field.mul(a, *b);
    case FieldOp::kInv: return field.inv(a);
  }
  throw Error(ErrorCode::kInvalidArgs, "unknown field operation");
}

}  // namespace cachedof
