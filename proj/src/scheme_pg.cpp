#include "cachedof/scheme_pg.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "cachedof/error.hpp"

namespace cachedof {
namespace {

constexpr std::uint64_t kMaxRoundSets = 20'000'000;

BigInt exact_div(const BigInt& num, const BigInt& den, const char* what) {
  if (num % den != 0) throw Error(ErrorCode::kNonIntegerCount, std::string(what) + " is not an integer");
  return num / den;
}

// A vector of `member` outside `fixed`; member = fixed + span(vector).
Vector representative(const Subspace& fixed, const Subspace& member) {
  for (const auto& row : member.basis()) {
    if (!fixed.contains_vector(row)) return row;
  }
  throw Error(ErrorCode::kInvalidArgs, "member does not extend the fixed subspace");
}

EchelonBasis seeded_basis(const Subspace& fixed) {
  EchelonBasis basis(fixed.field(), fixed.ambient_dim());
  for (const auto& row : fixed.basis()) basis.insert(row);
  return basis;
}

void collect_independent(const std::vector<Vector>& reps, std::uint32_t size, std::uint32_t start,
                         const EchelonBasis& basis, std::vector<std::uint32_t>& chosen,
                         const std::function<void(const std::vector<std::uint32_t>&)>& emit) {
  if (chosen.size() == size) {
    emit(chosen);
    return;
  }
  const auto need = size - static_cast<std::uint32_t>(chosen.size());
  for (std::uint32_t i = start; i + need <= reps.size(); ++i) {
    EchelonBasis next = basis;
    if (!next.insert(reps[i])) continue;
    chosen.push_back(i);
    collect_independent(reps, size, i + 1, next, chosen, emit);
    chosen.pop_back();
  }
}

std::vector<Vector> representatives(const Subspace& fixed, const std::vector<Subspace>& members) {
  std::vector<Vector> reps;
  reps.reserve(members.size());
  for (const auto& m : members) reps.push_back(representative(fixed, m));
  return reps;
}

Subspace span_of(const Subspace& fixed, const std::vector<Subspace>& members, std::span<const std::uint32_t> set) {
  Subspace sum = fixed;
  for (auto i : set) sum = subspace_sum(sum, members[i]);
  return sum;
}

void require_size(const char* what, std::uint64_t enumerated, const BigInt& formula) {
  if (BigInt(enumerated) != formula) {
    throw Error(ErrorCode::kInconsistent, std::string(what) + ": enumerated " + std::to_string(enumerated) +
                                              " but the closed form gives " + formula.str());
  }
}

std::string format_members(std::span<const std::uint32_t> set) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < set.size(); ++i) os << (i ? "," : "") << set[i];
  os << '}';
  return os.str();
}

}  // namespace

PGParams build_pg_params(std::uint32_t q, std::uint32_t k_t, std::uint32_t l_t, std::uint32_t m_t, std::uint32_t k_r,
                         std::uint32_t l_r, std::uint32_t m_r, std::uint32_t N) {
  (void)Field::make(q);
  auto violate = [](const std::string& what) { throw Error(ErrorCode::kConstraintViolation, what); };
  if (l_t < 1) violate("l_t >= 1");
  if (l_r < 1) violate("l_r >= 1");
  if (N < 1) violate("N >= 1");
  if (k_t < m_t + l_t) violate("k_t >= m_t + l_t");
  const BigInt t_T = theta(m_t + 1, q);
  if (BigInt(k_r) < BigInt(m_r + l_r) + t_T) violate("k_r >= m_r + l_r + theta(m_t + 1)");

  PGParams p;
  p.q = q;
  p.k_t = k_t;
  p.l_t = l_t;
  p.m_t = m_t;
  p.k_r = k_r;
  p.l_r = l_r;
  p.m_r = m_r;
  p.N = N;
  p.K_T = theta(k_t - l_t + 1, q);
  p.K_R = theta(k_r - l_r + 1, q);
  p.t_T = t_T;
  p.t_R = theta(m_r + 1, q);

  BigInt prod_t = 1;
  for (std::uint32_t i = 0; i <= m_t; ++i) prod_t *= theta(k_t - l_t + 1 - i, q);
  p.F_T = exact_div(pow_big(q, m_t * (m_t + 1) / 2) * prod_t, factorial_big(m_t + 1), "F_T");

  BigInt prod_r = 1;
  for (std::uint32_t i = 0; i <= m_r; ++i) prod_r *= theta(k_r - l_r + 1 - i, q);
  p.F_R = exact_div(pow_big(q, m_r * (m_r + 1) / 2) * prod_r, factorial_big(m_r + 1), "F_R");

  // Exponent (t_T + 2 m_r + 2)(t_T - 1)/2 = t_T(t_T - 1)/2 + (m_r + 1)(t_T - 1).
  const std::uint64_t tt = to_u64(t_T);
  const std::uint64_t exponent = tt * (tt - 1) / 2 + static_cast<std::uint64_t>(m_r + 1) * (tt - 1);
  BigInt prod_p = 1;
  for (std::uint64_t i = 1; i + 1 <= tt; ++i) prod_p *= theta(k_r - m_r - l_r - i, q);
  p.F_P = exact_div(pow_big(q, exponent) * prod_p, factorial_big(tt - 1), "F_P");

  p.F = p.F_T * p.F_R * p.F_P;
  p.dof = BigInt(m_r) + t_T + 1;
  return p;
}

std::span<const std::uint32_t> MemberSets::at(std::uint64_t index) const {
  if (index >= count_) throw Error(ErrorCode::kInvalidArgs, "member set index out of range");
  return {flat_.data() + index * arity_, arity_};
}

std::optional<std::uint64_t> MemberSets::find(std::span<const std::uint32_t> set) const {
  if (set.size() != arity_) return std::nullopt;
  if (arity_ == 0) return count_ > 0 ? std::optional<std::uint64_t>(0) : std::nullopt;
  std::uint64_t lo = 0;
  std::uint64_t hi = count_;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const auto probe = at(mid);
    if (std::lexicographical_compare(probe.begin(), probe.end(), set.begin(), set.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < count_ && std::equal(set.begin(), set.end(), at(lo).begin())) return lo;
  return std::nullopt;
}

void MemberSets::push_back(std::span<const std::uint32_t> set) {
  if (set.size() != arity_) throw Error(ErrorCode::kInvalidArgs, "member set has wrong size");
  flat_.insert(flat_.end(), set.begin(), set.end());
  ++count_;
}

MemberSets independent_member_sets(const Subspace& fixed, const std::vector<Subspace>& members, std::uint32_t size) {
  const auto reps = representatives(fixed, members);
  MemberSets out(size);
  std::vector<std::uint32_t> chosen;
  collect_independent(reps, size, 0, seeded_basis(fixed), chosen, [&](const auto& set) { out.push_back(set); });
  return out;
}

PGScheme::PGScheme(PGParams params)
    : params_(std::move(params)),
      field_(Field::make(params_.q)),
      lt_(standard_subspace(field_, params_.k_t, params_.l_t - 1)),
      lr_(standard_subspace(field_, params_.k_r, params_.l_r - 1)) {
  const std::uint32_t tt = t_T();
  const std::uint32_t round_size = params_.m_r + tt + 1;
  const BigInt z_formula = count_li_point_sets(params_.k_r - params_.l_r + 1, 0, round_size, params_.q);
  if (z_formula > kMaxRoundSets) {
    throw Error(ErrorCode::kInvalidArgs, "round-set family has " + z_formula.str() + " members; too large to enumerate");
  }

  tx_members_ = enumerate_superspaces(lt_, params_.l_t, FamilyRole::kTransmitters);
  rx_members_ = enumerate_superspaces(lr_, params_.l_r, FamilyRole::kReceivers);
  require_size("K_T", tx_members_.size(), params_.K_T);
  require_size("K_R", rx_members_.size(), params_.K_R);

  rx_reps_ = representatives(lr_, rx_members_.members);
  xt_ = independent_member_sets(lt_, tx_members_.members, params_.m_t + 1);
  xr_ = independent_member_sets(lr_, rx_members_.members, params_.m_r + 1);
  y_ = independent_member_sets(lr_, rx_members_.members, tt - 1);
  z_ = independent_member_sets(lr_, rx_members_.members, round_size);
  require_size("F_T", xt_.size(), params_.F_T);
  require_size("F_R", xr_.size(), params_.F_R);
  require_size("|Z|", z_.size(), z_formula);

  std::vector<std::vector<std::uint32_t>> tx_holders;
  for (std::uint64_t s = 0; s < xt_.size(); ++s) {
    const Subspace sum = tx_set_span(s);
    auto& holders = tx_holders.emplace_back();
    for (std::uint32_t u = 0; u < tx_members_.size(); ++u) {
      if (contains(sum, tx_members_.members[u])) holders.push_back(u);
    }
  }
  std::vector<std::vector<std::uint32_t>> rx_holders;
  for (std::uint64_t s = 0; s < xr_.size(); ++s) {
    const Subspace sum = rx_set_span(s);
    auto& holders = rx_holders.emplace_back();
    for (std::uint32_t v = 0; v < rx_members_.size(); ++v) {
      if (contains(sum, rx_members_.members[v])) holders.push_back(v);
    }
  }
  caching_ = CachingMap(static_cast<std::uint32_t>(tx_members_.size()), static_cast<std::uint32_t>(rx_members_.size()),
                        tx_holders, rx_holders);
}

Subspace PGScheme::tx_set_span(std::uint64_t index) const { return span_of(lt_, tx_members_.members, xt_.at(index)); }

Subspace PGScheme::rx_set_span(std::uint64_t index) const { return span_of(lr_, rx_members_.members, xr_.at(index)); }

std::uint64_t PGScheme::round_count() const {
  const std::uint32_t round_size = params_.m_r + t_T() + 1;
  return xt_.size() * z_.size() * binomial(round_size - 1, params_.m_r + 1);
}

std::vector<PacketId> PGScheme::split_packets(std::uint32_t file, std::uint32_t receiver, std::uint64_t tx_set,
                                              std::uint64_t rx_set) const {
  if (file >= params_.N) throw Error(ErrorCode::kInvalidArgs, "file index outside [N]");
  if (receiver >= rx_members_.size()) throw Error(ErrorCode::kInvalidArgs, "receiver index out of range");
  if (tx_set >= xt_.size()) throw Error(ErrorCode::kInvalidArgs, "X_t index out of range");
  const auto holders = caching_.rx_holders(rx_set);
  if (std::binary_search(holders.begin(), holders.end(), receiver)) {
    throw Error(ErrorCode::kInvalidArgs, "receiver already caches the subfile");
  }
  EchelonBasis basis = seeded_basis(lr_);
  basis.insert(rx_reps_[receiver]);
  for (auto v : xr_.at(rx_set)) basis.insert(rx_reps_[v]);

  std::vector<PacketId> out;
  std::vector<std::uint32_t> chosen;
  collect_independent(rx_reps_, t_T() - 1, 0, basis, chosen, [&](const std::vector<std::uint32_t>& Y) {
    const auto y = y_.find(Y);
    if (!y) throw Error(ErrorCode::kInconsistent, "zero-forcing set missing from its family");
    out.push_back({file, tx_set, rx_set, *y});
  });
  return out;
}

bool PGScheme::is_missing_packet(std::uint32_t receiver, const PacketId& packet) const {
  if (receiver >= rx_members_.size() || packet.file >= params_.N || packet.tx_set >= xt_.size() ||
      packet.rx_set >= xr_.size() || packet.zf_set >= y_.size()) {
    return false;
  }
  const auto holders = caching_.rx_holders(packet.rx_set);
  if (std::binary_search(holders.begin(), holders.end(), receiver)) return false;
  std::vector<std::uint32_t> all;
  all.push_back(receiver);
  const auto xr = xr_.at(packet.rx_set);
  const auto y = y_.at(packet.zf_set);
  all.insert(all.end(), xr.begin(), xr.end());
  all.insert(all.end(), y.begin(), y.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;
  return z_.find(all).has_value();
}

void PGScheme::for_each_missing_packet(const Demands& demands, const PacketSink& sink) const {
  check_demands(demands);
  for (std::uint32_t v = 0; v < rx_members_.size(); ++v) {
    for (std::uint64_t s = 0; s < xr_.size(); ++s) {
      const auto holders = caching_.rx_holders(s);
      if (std::binary_search(holders.begin(), holders.end(), v)) continue;
      for (std::uint64_t t = 0; t < xt_.size(); ++t) {
        for (const auto& packet : split_packets(demands[v], v, t, s)) sink(v, packet);
      }
    }
  }
}

void PGScheme::for_each_round(const Demands& demands, const RoundSink& sink) const {
  check_demands(demands);
  const std::uint32_t cache_size = params_.m_r + 1;
  const std::uint32_t n = cache_size + t_T();
  Round round;
  round.entries.resize(n);
  std::vector<std::uint32_t> xr(cache_size);
  std::vector<std::uint32_t> y;
  std::vector<bool> used(n);
  for (std::uint64_t t = 0; t < xt_.size(); ++t) {
    const auto holders = caching_.tx_holders(t);
    round.transmitters.assign(holders.begin(), holders.end());
    for (std::uint64_t zi = 0; zi < z_.size(); ++zi) {
      const auto Z = z_.at(zi);
      for_each_combination(n - 1, cache_size, [&](const std::vector<std::uint32_t>& pick) {
        for (std::uint32_t l = 0; l < n; ++l) {
          const auto target_pos = static_cast<std::uint32_t>(boxplus(1, static_cast<int>(l), static_cast<int>(n)));
          std::fill(used.begin(), used.end(), false);
          used[target_pos - 1] = true;
          for (std::uint32_t i = 0; i < cache_size; ++i) {
            const auto pos = static_cast<std::uint32_t>(boxplus(static_cast<int>(pick[i] + 2), static_cast<int>(l), static_cast<int>(n)));
            used[pos - 1] = true;
            xr[i] = Z[pos - 1];
          }
          std::sort(xr.begin(), xr.end());
          y.clear();
          for (std::uint32_t pos = 0; pos < n; ++pos) {
            if (!used[pos]) y.push_back(Z[pos]);
          }
          const auto xr_index = xr_.find(xr);
          const auto y_index = y_.find(y);
          if (!xr_index || !y_index) throw Error(ErrorCode::kInconsistent, "round references a set outside its family");
          const std::uint32_t receiver = Z[target_pos - 1];
          round.entries[l] = {receiver, {demands[receiver], t, *xr_index, *y_index}};
        }
        sink(round);
      });
    }
  }
}

std::string PGScheme::describe(std::uint32_t receiver, const PacketId& packet) const {
  std::ostringstream os;
  os << "rx V" << receiver << " W[d=" << packet.file + 1;
  if (packet.tx_set < xt_.size()) os << ", X_t=" << format_members(xt_.at(packet.tx_set));
  if (packet.rx_set < xr_.size()) os << ", X_r=" << format_members(xr_.at(packet.rx_set));
  if (packet.zf_set < y_.size()) os << ", Y=" << format_members(y_.at(packet.zf_set));
  os << "]";
  return os.str();
}

}  // namespace cachedof
