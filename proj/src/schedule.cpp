#include "cachedof/schedule.hpp"

#include <algorithm>
#include <sstream>

#include "cachedof/error.hpp"

namespace cachedof {
namespace {

void flatten(const std::vector<std::vector<std::uint32_t>>& lists, std::uint32_t bound, std::vector<std::uint64_t>& offsets,
             std::vector<std::uint32_t>& members) {
  offsets.assign(1, 0);
  for (const auto& list : lists) {
    if (!std::is_sorted(list.begin(), list.end()) || std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw Error(ErrorCode::kInvalidArgs, "holder lists must be sorted and duplicate-free");
    }
    for (auto m : list) {
      if (m >= bound) throw Error(ErrorCode::kInvalidArgs, "holder index out of range");
      members.push_back(m);
    }
    offsets.push_back(members.size());
  }
}

}  // namespace

CachingMap::CachingMap(std::uint32_t num_transmitters, std::uint32_t num_receivers,
                       const std::vector<std::vector<std::uint32_t>>& tx_holders,
                       const std::vector<std::vector<std::uint32_t>>& rx_holders)
    : num_transmitters_(num_transmitters), num_receivers_(num_receivers) {
  flatten(tx_holders, num_transmitters, tx_offsets_, tx_members_);
  flatten(rx_holders, num_receivers, rx_offsets_, rx_members_);
}

std::span<const std::uint32_t> CachingMap::tx_holders(std::uint64_t tx_set) const {
  if (tx_set >= num_tx_sets()) throw Error(ErrorCode::kInvalidArgs, "transmitter set index out of range");
  return {tx_members_.data() + tx_offsets_[tx_set], tx_offsets_[tx_set + 1] - tx_offsets_[tx_set]};
}

std::span<const std::uint32_t> CachingMap::rx_holders(std::uint64_t rx_set) const {
  if (rx_set >= num_rx_sets()) throw Error(ErrorCode::kInvalidArgs, "receiver set index out of range");
  return {rx_members_.data() + rx_offsets_[rx_set], rx_offsets_[rx_set + 1] - rx_offsets_[rx_set]};
}

bool CachingMap::transmitter_caches(std::uint32_t tx, const PacketId& packet) const {
  const auto holders = tx_holders(packet.tx_set);
  return std::binary_search(holders.begin(), holders.end(), tx);
}

bool CachingMap::receiver_caches(std::uint32_t rx, const PacketId& packet) const {
  const auto holders = rx_holders(packet.rx_set);
  return std::binary_search(holders.begin(), holders.end(), rx);
}

std::vector<std::uint64_t> CachingMap::transmitter_tx_sets(std::uint32_t tx) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < num_tx_sets(); ++s) {
    const auto h = tx_holders(s);
    if (std::binary_search(h.begin(), h.end(), tx)) out.push_back(s);
  }
  return out;
}

std::vector<std::uint64_t> CachingMap::receiver_rx_sets(std::uint32_t rx) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < num_rx_sets(); ++s) {
    const auto h = rx_holders(s);
    if (std::binary_search(h.begin(), h.end(), rx)) out.push_back(s);
  }
  return out;
}

Rational CachingMap::transmitter_fraction() const {
  std::vector<std::uint64_t> per_tx(num_transmitters_, 0);
  for (auto m : tx_members_) ++per_tx[m];
  if (std::adjacent_find(per_tx.begin(), per_tx.end(), std::not_equal_to<>()) != per_tx.end()) {
    throw Error(ErrorCode::kInconsistent, "transmitters store different amounts");
  }
  return Rational(BigInt(per_tx.empty() ? 0 : per_tx.front()), BigInt(num_tx_sets()));
}

Rational CachingMap::receiver_fraction() const {
  std::vector<std::uint64_t> per_rx(num_receivers_, 0);
  for (auto m : rx_members_) ++per_rx[m];
  if (std::adjacent_find(per_rx.begin(), per_rx.end(), std::not_equal_to<>()) != per_rx.end()) {
    throw Error(ErrorCode::kInconsistent, "receivers store different amounts");
  }
  return Rational(BigInt(per_rx.empty() ? 0 : per_rx.front()), BigInt(num_rx_sets()));
}

std::uint32_t CachingMap::transmitter_replication() const {
  if (num_tx_sets() == 0) return 0;
  const auto size = tx_holders(0).size();
  for (std::uint64_t s = 1; s < num_tx_sets(); ++s) {
    if (tx_holders(s).size() != size) return 0;
  }
  return static_cast<std::uint32_t>(size);
}

std::uint32_t CachingMap::receiver_replication() const {
  if (num_rx_sets() == 0) return 0;
  const auto size = rx_holders(0).size();
  for (std::uint64_t s = 1; s < num_rx_sets(); ++s) {
    if (rx_holders(s).size() != size) return 0;
  }
  return static_cast<std::uint32_t>(size);
}

std::string DeliveryScheme::describe(std::uint32_t receiver, const PacketId& packet) const {
  std::ostringstream os;
  os << "rx " << receiver << " W[file=" << packet.file << ", tx_set=" << packet.tx_set << ", rx_set=" << packet.rx_set
     << ", zf_set=" << packet.zf_set << "]";
  return os.str();
}

void DeliveryScheme::check_demands(const Demands& demands) const {
  if (demands.size() != caching().num_receivers()) {
    throw Error(ErrorCode::kInvalidDemand, "expected " + std::to_string(caching().num_receivers()) + " demands, got " +
                                               std::to_string(demands.size()));
  }
  for (std::size_t r = 0; r < demands.size(); ++r) {
    if (demands[r] >= num_files()) {
      throw Error(ErrorCode::kInvalidDemand, "receiver " + std::to_string(r) + " demands file " +
                                                 std::to_string(demands[r]) + " outside [N]");
    }
  }
}

std::vector<Round> DeliveryScheme::enumerate_rounds(const Demands& demands) const {
  std::vector<Round> rounds;
  rounds.reserve(round_count());
  for_each_round(demands, [&](const Round& r) { rounds.push_back(r); });
  return rounds;
}

}  // namespace cachedof
