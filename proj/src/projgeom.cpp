#include "cachedof/projgeom.hpp"

#include <algorithm>
#include <string>

#include "cachedof/error.hpp"

namespace cachedof {
namespace {

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim() || !(a.field() == b.field())) {
    throw Error(ErrorCode::kAmbientMismatch, "subspaces live in different ambient spaces");
  }
}

void check_prime_power(std::uint64_t q) {
  if (q < 2 || q > (1U << 16U)) throw Error(ErrorCode::kInvalidArgs, "q must lie in [2, 65536]");
  (void)Field::make(static_cast<std::uint32_t>(q));
}

}  // namespace

Subspace::Subspace(Field field, std::uint32_t ambient_dim) : field_(std::move(field)), ambient_dim_(ambient_dim) {}

std::vector<std::uint32_t> Subspace::pivots() const {
  std::vector<std::uint32_t> out;
  out.reserve(basis_.size());
  for (const auto& row : basis_) {
    const auto it = std::find_if(row.begin(), row.end(), [](FieldElem e) { return e.value != 0; });
    out.push_back(static_cast<std::uint32_t>(it - row.begin()));
  }
  return out;
}

bool Subspace::contains_vector(std::span<const FieldElem> v) const {
  if (v.size() != ambient_dim_) throw Error(ErrorCode::kAmbientMismatch, "vector length differs from ambient dimension");
  // With an RREF basis, v lies in the span iff v = sum_i v[pivot_i] * row_i.
  Vector residual(v.begin(), v.end());
  const auto piv = pivots();
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const FieldElem factor = residual[piv[i]];
    if (factor.value == 0) continue;
    for (std::uint32_t j = 0; j < ambient_dim_; ++j) {
      residual[j] = field_.sub(residual[j], field_.mul(factor, basis_[i][j]));
    }
  }
  return std::all_of(residual.begin(), residual.end(), [](FieldElem e) { return e.value == 0; });
}

bool operator==(const Subspace& lhs, const Subspace& rhs) {
  return lhs.field_.order() == rhs.field_.order() && lhs.ambient_dim_ == rhs.ambient_dim_ && lhs.basis_ == rhs.basis_;
}

std::strong_ordering operator<=>(const Subspace& lhs, const Subspace& rhs) {
  if (auto c = lhs.field_.order() <=> rhs.field_.order(); c != 0) return c;
  if (auto c = lhs.ambient_dim_ <=> rhs.ambient_dim_; c != 0) return c;
  if (auto c = lhs.dim() <=> rhs.dim(); c != 0) return c;
  for (std::size_t i = 0; i < lhs.basis_.size(); ++i) {
    for (std::size_t j = 0; j < lhs.ambient_dim_; ++j) {
      if (auto c = lhs.basis_[i][j] <=> rhs.basis_[i][j]; c != 0) return c;
    }
  }
  return std::strong_ordering::equal;
}

std::uint32_t row_reduce(const Field& field, std::vector<Vector>& rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col].value == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const FieldElem scale = field.inv(rows[rank][col]);
    for (auto& e : rows[rank]) e = field.mul(e, scale);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col].value == 0) continue;
      const FieldElem factor = rows[r][col];
      for (std::size_t j = col; j < cols; ++j) rows[r][j] = field.sub(rows[r][j], field.mul(factor, rows[rank][j]));
    }
    ++rank;
  }
  rows.resize(rank);
  return static_cast<std::uint32_t>(rank);
}

Subspace canonicalize(const Field& field, std::uint32_t ambient_dim, std::span<const Vector> vectors) {
  std::vector<Vector> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != ambient_dim) throw Error(ErrorCode::kAmbientMismatch, "vector length differs from ambient dimension");
    rows.push_back(v);
  }
  row_reduce(field, rows);
  Subspace out(field, ambient_dim);
  out.basis_ = std::move(rows);
  return out;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  std::vector<Vector> rows = a.basis();
  rows.insert(rows.end(), b.basis().begin(), b.basis().end());
  return canonicalize(a.field(), a.ambient_dim(), rows);
}

bool contains(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  return std::all_of(b.basis().begin(), b.basis().end(), [&](const Vector& row) { return a.contains_vector(row); });
}

Subspace standard_subspace(const Field& field, std::uint32_t ambient_dim, std::uint32_t count) {
  if (count > ambient_dim) throw Error(ErrorCode::kInvalidArgs, "more standard vectors than coordinates");
  std::vector<Vector> rows;
  for (std::uint32_t i = 0; i < count; ++i) {
    Vector e(ambient_dim);
    e[i] = field.one();
    rows.push_back(std::move(e));
  }
  return canonicalize(field, ambient_dim, rows);
}

std::vector<Subspace> enumerate_subspaces(const Field& field, std::uint32_t ambient_dim, std::uint32_t d) {
  if (d > ambient_dim) throw Error(ErrorCode::kInvalidArgs, "subspace dimension exceeds ambient dimension");
  std::vector<Subspace> out;
  const std::uint32_t q = field.order();
  // Each d-subspace has a unique RREF: choose pivot columns, then fill the
  // entries right of each pivot that are not themselves pivot columns.
  for_each_combination(ambient_dim, d, [&](const std::vector<std::uint32_t>& piv) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> free_slots;
    for (std::uint32_t i = 0; i < d; ++i) {
      for (std::uint32_t j = piv[i] + 1; j < ambient_dim; ++j) {
        if (!std::binary_search(piv.begin(), piv.end(), j)) free_slots.emplace_back(i, j);
      }
    }
    std::vector<std::uint32_t> digits(free_slots.size(), 0);
    while (true) {
      std::vector<Vector> rows(d, Vector(ambient_dim));
      for (std::uint32_t i = 0; i < d; ++i) rows[i][piv[i]] = field.one();
      for (std::size_t f = 0; f < free_slots.size(); ++f) {
        rows[free_slots[f].first][free_slots[f].second] = FieldElem{digits[f]};
      }
      out.push_back(canonicalize(field, ambient_dim, rows));
      std::size_t pos = 0;
      while (pos < digits.size() && ++digits[pos] == q) digits[pos++] = 0;
      if (pos == digits.size()) break;
    }
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t SubspaceFamily::index_of(const Subspace& s) const {
  const auto it = std::lower_bound(members.begin(), members.end(), s);
  if (it == members.end() || !(*it == s)) throw Error(ErrorCode::kInvalidArgs, "subspace is not a member of the family");
  return static_cast<std::uint32_t>(it - members.begin());
}

SubspaceFamily enumerate_superspaces(const Subspace& fixed, std::uint32_t d, FamilyRole role) {
  const std::uint32_t k = fixed.ambient_dim();
  const std::uint32_t l = fixed.dim();
  if (d < l || d > k) {
    throw Error(ErrorCode::kInvalidArgs,
                "superspace dimension " + std::to_string(d) + " outside [" + std::to_string(l) + ", " + std::to_string(k) + "]");
  }
  const auto piv = fixed.pivots();
  std::vector<std::uint32_t> quotient_cols;
  for (std::uint32_t j = 0; j < k; ++j) {
    if (!std::binary_search(piv.begin(), piv.end(), j)) quotient_cols.push_back(j);
  }
  // Vectors reduced modulo `fixed` vanish on its pivot columns, so GF(q)^k / fixed
  // is identified with the remaining coordinates.
  SubspaceFamily family{role, {}};
  for (const auto& sub : enumerate_subspaces(fixed.field(), k - l, d - l)) {
    std::vector<Vector> rows = fixed.basis();
    for (const auto& qrow : sub.basis()) {
      Vector row(k);
      for (std::size_t j = 0; j < quotient_cols.size(); ++j) row[quotient_cols[j]] = qrow[j];
      rows.push_back(std::move(row));
    }
    family.members.push_back(canonicalize(fixed.field(), k, rows));
  }
  std::sort(family.members.begin(), family.members.end());
  return family;
}

BigInt gaussian_binomial(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  check_prime_power(q);
  if (b > a) throw Error(ErrorCode::kInvalidArgs, "gaussian binomial needs b <= a");
  BigInt num = 1;
  BigInt den = 1;
  for (std::uint64_t i = 0; i < b; ++i) {
    num *= pow_big(q, a - i) - 1;
    den *= pow_big(q, b - i) - 1;
  }
  return num / den;
}

BigInt theta(std::uint64_t a, std::uint64_t q) {
  check_prime_power(q);
  return (pow_big(q, a) - 1) / (q - 1);
}

BigInt count_li_point_sets(std::uint64_t k, std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  if (a + b < 1 || a + b > k) throw Error(ErrorCode::kInvalidArgs, "count_li_point_sets needs 1 <= a + b <= k");
  const BigInt total = theta(k, q);
  BigInt num = 1;
  for (std::uint64_t i = 0; i < b; ++i) num *= total - theta(a + i, q);
  const BigInt den = factorial_big(b);
  if (num % den != 0) throw Error(ErrorCode::kNonIntegerCount, "point-set count is not an integer");
  return num / den;
}

BigInt count_complements(std::uint64_t a, std::uint64_t q) {
  check_prime_power(q);
  if (a < 1) throw Error(ErrorCode::kInvalidArgs, "count_complements needs a >= 1");
  return pow_big(q, a - 1);
}

std::uint64_t encode_vector(const Field& field, std::span<const FieldElem> v) {
  std::uint64_t code = 0;
  for (auto e : v) code = code * field.order() + e.value;
  return code;
}

Vector decode_vector(const Field& field, std::uint32_t ambient_dim, std::uint64_t code) {
  Vector v(ambient_dim);
  for (std::uint32_t i = ambient_dim; i-- > 0;) {
    v[i] = FieldElem{static_cast<std::uint32_t>(code % field.order())};
    code /= field.order();
  }
  if (code != 0) throw Error(ErrorCode::kFormat, "vector code exceeds q^k");
  return v;
}

Vector EchelonBasis::reduce(std::span<const FieldElem> v) const {
  if (v.size() != ambient_dim_) throw Error(ErrorCode::kAmbientMismatch, "vector length differs from ambient dimension");
  Vector r(v.begin(), v.end());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const FieldElem factor = r[pivots_[i]];
    if (factor.value == 0) continue;
    for (std::uint32_t j = pivots_[i]; j < ambient_dim_; ++j) r[j] = field_.sub(r[j], field_.mul(factor, rows_[i][j]));
  }
  return r;
}

bool EchelonBasis::in_span(std::span<const FieldElem> v) const {
  const Vector r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](FieldElem e) { return e.value == 0; });
}

bool EchelonBasis::insert(std::span<const FieldElem> v) {
  Vector r = reduce(v);
  const auto lead = std::find_if(r.begin(), r.end(), [](FieldElem e) { return e.value != 0; });
  if (lead == r.end()) return false;
  const auto pivot = static_cast<std::uint32_t>(lead - r.begin());
  const FieldElem scale = field_.inv(*lead);
  for (auto& e : r) e = field_.mul(e, scale);
  const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, pivot);
  rows_.insert(rows_.begin() + pos, std::move(r));
  return true;
}

}  // namespace cachedof
