#include "cachedof/scheme_subset.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "cachedof/error.hpp"

namespace cachedof {
namespace {

constexpr std::uint64_t kMaxSubfiles = 10'000'000;

void require_subset(std::span<const std::uint32_t> set, std::uint32_t size, std::uint32_t universe, const char* what) {
  if (set.size() != size || !std::is_sorted(set.begin(), set.end()) ||
      std::adjacent_find(set.begin(), set.end()) != set.end() || (!set.empty() && set.back() >= universe)) {
    throw Error(ErrorCode::kInvalidArgs, std::string(what) + " must be a sorted " + std::to_string(size) +
                                             "-subset of [" + std::to_string(universe) + "]");
  }
}

std::string format_set(std::span<const std::uint32_t> set) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < set.size(); ++i) os << (i ? "," : "") << set[i] + 1;
  os << '}';
  return os.str();
}

}  // namespace

SubsetParams make_subset_params(std::uint32_t K_T, std::uint32_t t_T, std::uint32_t K_R, std::uint32_t t_R,
                                std::uint32_t N) {
  auto violate = [](const std::string& what) { throw Error(ErrorCode::kConstraintViolation, what); };
  if (t_T < 1) violate("t_T >= 1");
  if (t_R < 1) violate("t_R >= 1");
  if (t_T > K_T) violate("t_T <= K_T");
  if (t_R > K_R) violate("t_R <= K_R");
  if (K_R < t_T + t_R) violate("K_R >= t_T + t_R");
  if (N < 1) violate("N >= 1");

  SubsetParams p;
  p.K_T = K_T;
  p.t_T = t_T;
  p.K_R = K_R;
  p.t_R = t_R;
  p.N = N;
  p.F_C = binomial_big(K_T, t_T) * binomial_big(K_R, t_R);
  p.F_P = binomial_big(K_R - t_R - 1, t_T - 1);
  p.F = p.F_C * p.F_P;
  p.rounds = binomial_big(K_T, t_T) * binomial_big(K_R, t_T + t_R) * binomial_big(t_T + t_R - 1, t_R);
  p.dof = t_T + t_R;
  return p;
}

std::vector<SubsetPacketId> split_subset_packets(const SubsetParams& params, std::uint32_t file,
                                                 std::span<const std::uint32_t> T, std::span<const std::uint32_t> R,
                                                 std::uint32_t target) {
  require_subset(T, params.t_T, params.K_T, "T");
  require_subset(R, params.t_R, params.K_R, "R");
  if (file >= params.N) throw Error(ErrorCode::kInvalidArgs, "file index outside [N]");
  if (target >= params.K_R) throw Error(ErrorCode::kInvalidArgs, "target receiver outside [K_R]");
  if (std::binary_search(R.begin(), R.end(), target)) {
    throw Error(ErrorCode::kInvalidArgs, "target receiver already caches the subfile");
  }
  std::vector<std::uint32_t> rest;
  for (std::uint32_t r = 0; r < params.K_R; ++r) {
    if (r != target && !std::binary_search(R.begin(), R.end(), r)) rest.push_back(r);
  }
  std::vector<SubsetPacketId> out;
  for_each_combination(static_cast<std::uint32_t>(rest.size()), params.t_T - 1, [&](const std::vector<std::uint32_t>& pick) {
    SubsetPacketId packet{file, {T.begin(), T.end()}, {R.begin(), R.end()}, {}};
    for (auto i : pick) packet.Rprime.push_back(rest[i]);
    out.push_back(std::move(packet));
  });
  return out;
}

SubsetScheme::SubsetScheme(SubsetParams params) : params_(std::move(params)) {
  if (params_.F_C > kMaxSubfiles) {
    throw Error(ErrorCode::kInvalidArgs, "instance has " + params_.F_C.str() + " subfiles per file; too large to materialize");
  }
  std::vector<std::vector<std::uint32_t>> tx_holders;
  for_each_combination(params_.K_T, params_.t_T, [&](const auto& T) { tx_holders.push_back(T); });
  std::vector<std::vector<std::uint32_t>> rx_holders;
  for_each_combination(params_.K_R, params_.t_R, [&](const auto& R) { rx_holders.push_back(R); });
  caching_ = CachingMap(params_.K_T, params_.K_R, tx_holders, rx_holders);
}

std::vector<std::uint32_t> SubsetScheme::tx_subset(std::uint64_t index) const {
  return combination_unrank(index, params_.K_T, params_.t_T);
}
std::vector<std::uint32_t> SubsetScheme::rx_subset(std::uint64_t index) const {
  return combination_unrank(index, params_.K_R, params_.t_R);
}
std::vector<std::uint32_t> SubsetScheme::zf_subset(std::uint64_t index) const {
  return combination_unrank(index, params_.K_R, params_.t_T - 1);
}

std::uint64_t SubsetScheme::tx_index(std::span<const std::uint32_t> T) const {
  require_subset(T, params_.t_T, params_.K_T, "T");
  return combination_rank(T, params_.K_T);
}
std::uint64_t SubsetScheme::rx_index(std::span<const std::uint32_t> R) const {
  require_subset(R, params_.t_R, params_.K_R, "R");
  return combination_rank(R, params_.K_R);
}
std::uint64_t SubsetScheme::zf_index(std::span<const std::uint32_t> Rprime) const {
  require_subset(Rprime, params_.t_T - 1, params_.K_R, "R'");
  return combination_rank(Rprime, params_.K_R);
}

PacketId SubsetScheme::to_packet_id(const SubsetPacketId& packet) const {
  return {packet.file, tx_index(packet.T), rx_index(packet.R), zf_index(packet.Rprime)};
}

SubsetPacketId SubsetScheme::from_packet_id(const PacketId& packet) const {
  return {packet.file, tx_subset(packet.tx_set), rx_subset(packet.rx_set), zf_subset(packet.zf_set)};
}

bool SubsetScheme::is_missing_packet(std::uint32_t receiver, const PacketId& packet) const {
  if (receiver >= params_.K_R || packet.file >= params_.N || packet.tx_set >= caching_.num_tx_sets() ||
      packet.rx_set >= caching_.num_rx_sets() || packet.zf_set >= num_zf_sets()) {
    return false;
  }
  const auto R = caching_.rx_holders(packet.rx_set);
  if (std::binary_search(R.begin(), R.end(), receiver)) return false;
  for (auto r : zf_subset(packet.zf_set)) {
    if (r == receiver || std::binary_search(R.begin(), R.end(), r)) return false;
  }
  return true;
}

void SubsetScheme::for_each_missing_packet(const Demands& demands, const PacketSink& sink) const {
  check_demands(demands);
  for (std::uint32_t r = 0; r < params_.K_R; ++r) {
    for (std::uint64_t t = 0; t < caching_.num_tx_sets(); ++t) {
      const auto T = caching_.tx_holders(t);
      for (std::uint64_t s = 0; s < caching_.num_rx_sets(); ++s) {
        const auto R = caching_.rx_holders(s);
        if (std::binary_search(R.begin(), R.end(), r)) continue;
        for (const auto& packet : split_subset_packets(params_, demands[r], T, R, r)) sink(r, to_packet_id(packet));
      }
    }
  }
}

void SubsetScheme::for_each_round(const Demands& demands, const RoundSink& sink) const {
  check_demands(demands);
  const std::uint32_t n = params_.t_T + params_.t_R;
  Round round;
  round.entries.resize(n);
  std::vector<std::uint32_t> cached_pos(params_.t_R);
  std::vector<std::uint32_t> R(params_.t_R);
  std::vector<std::uint32_t> Rprime;
  std::vector<bool> used(n);
  for (std::uint64_t t = 0; t < caching_.num_tx_sets(); ++t) {
    const auto T = caching_.tx_holders(t);
    round.transmitters.assign(T.begin(), T.end());
    for_each_combination(params_.K_R, n, [&](const std::vector<std::uint32_t>& group) {
      // Pivot receiver u_j = min(group) sits at position 1; U ranges over the
      // t_R-subsets of positions 2..n.
      for_each_combination(n - 1, params_.t_R, [&](const std::vector<std::uint32_t>& pick) {
        for (std::uint32_t l = 0; l < n; ++l) {
          const auto target_pos = static_cast<std::uint32_t>(boxplus(1, static_cast<int>(l), static_cast<int>(n)));
          std::fill(used.begin(), used.end(), false);
          used[target_pos - 1] = true;
          for (std::uint32_t i = 0; i < params_.t_R; ++i) {
            const auto pos = static_cast<std::uint32_t>(boxplus(static_cast<int>(pick[i] + 2), static_cast<int>(l), static_cast<int>(n)));
            used[pos - 1] = true;
            R[i] = group[pos - 1];
          }
          std::sort(R.begin(), R.end());
          Rprime.clear();
          for (std::uint32_t pos = 0; pos < n; ++pos) {
            if (!used[pos]) Rprime.push_back(group[pos]);
          }
          const std::uint32_t receiver = group[target_pos - 1];
          round.entries[l] = {receiver, {demands[receiver], t, combination_rank(R, params_.K_R),
                                         combination_rank(Rprime, params_.K_R)}};
        }
        sink(round);
      });
    });
  }
}

std::string SubsetScheme::describe(std::uint32_t receiver, const PacketId& packet) const {
  std::ostringstream os;
  const auto p = from_packet_id(packet);
  os << "rx " << receiver + 1 << " W[d=" << p.file + 1 << ", T=" << format_set(p.T) << ", R=" << format_set(p.R)
     << ", R'=" << format_set(p.Rprime) << "]";
  return os.str();
}

}  // namespace cachedof
