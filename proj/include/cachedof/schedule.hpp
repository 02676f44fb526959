#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cachedof/combinatorics.hpp"

namespace cachedof {

/// Packet W_{file, tx_set, rx_set, zf_set}. The three set fields are indices
/// into the owning scheme's families: (tx_set, rx_set) names the subfile and
/// zf_set names the receivers at which the packet is zero-forced.
struct PacketId {
  std::uint32_t file = 0;
  std::uint64_t tx_set = 0;
  std::uint64_t rx_set = 0;
  std::uint64_t zf_set = 0;

  friend auto operator<=>(const PacketId&, const PacketId&) = default;
};

struct ServedEntry {
  std::uint32_t receiver = 0;
  PacketId packet;

  friend auto operator<=>(const ServedEntry&, const ServedEntry&) = default;
};

struct Round {
  std::vector<std::uint32_t> transmitters;  // sorted, 0-based
  std::vector<ServedEntry> entries;

  friend bool operator==(const Round&, const Round&) = default;
};

/// receiver -> demanded file, both 0-based.
using Demands = std::vector<std::uint32_t>;

/// Symmetric placement: subfile (tx_set, rx_set) of every file sits at the
/// transmitters tx_holders(tx_set) and the receivers rx_holders(rx_set).
class CachingMap {
 public:
  CachingMap() = default;
  CachingMap(std::uint32_t num_transmitters, std::uint32_t num_receivers,
             const std::vector<std::vector<std::uint32_t>>& tx_holders,
             const std::vector<std::vector<std::uint32_t>>& rx_holders);

  std::uint32_t num_transmitters() const noexcept { return num_transmitters_; }
  std::uint32_t num_receivers() const noexcept { return num_receivers_; }
  std::uint64_t num_tx_sets() const noexcept { return tx_offsets_.empty() ? 0 : tx_offsets_.size() - 1; }
  std::uint64_t num_rx_sets() const noexcept { return rx_offsets_.empty() ? 0 : rx_offsets_.size() - 1; }
  std::uint64_t subfiles_per_file() const noexcept { return num_tx_sets() * num_rx_sets(); }

  std::span<const std::uint32_t> tx_holders(std::uint64_t tx_set) const;
  std::span<const std::uint32_t> rx_holders(std::uint64_t rx_set) const;

  bool transmitter_caches(std::uint32_t tx, const PacketId& packet) const;
  bool receiver_caches(std::uint32_t rx, const PacketId& packet) const;

  /// tx_set indices whose subfiles transmitter `tx` stores (all rx_sets each).
  std::vector<std::uint64_t> transmitter_tx_sets(std::uint32_t tx) const;
  /// rx_set indices whose subfiles receiver `rx` stores (all tx_sets each).
  std::vector<std::uint64_t> receiver_rx_sets(std::uint32_t rx) const;

  /// Stored fraction of each file, M_T/N and M_R/N, measured on the map.
  /// Throws Inconsistent when the placement is not symmetric.
  Rational transmitter_fraction() const;
  Rational receiver_fraction() const;

  /// Replication factors; zero when holder lists differ in size.
  std::uint32_t transmitter_replication() const;
  std::uint32_t receiver_replication() const;

 private:
  std::uint32_t num_transmitters_ = 0;
  std::uint32_t num_receivers_ = 0;
  std::vector<std::uint64_t> tx_offsets_;
  std::vector<std::uint32_t> tx_members_;
  std::vector<std::uint64_t> rx_offsets_;
  std::vector<std::uint32_t> rx_members_;
};

using RoundSink = std::function<void(const Round&)>;
using PacketSink = std::function<void(std::uint32_t receiver, const PacketId&)>;

/// What the verifier and simulator need from a scheme family.
class DeliveryScheme {
 public:
  virtual ~DeliveryScheme() = default;

  virtual std::string name() const = 0;
  virtual const CachingMap& caching() const = 0;
  virtual std::uint32_t num_files() const = 0;
  virtual std::uint32_t t_T() const = 0;
  virtual std::uint32_t dof() const = 0;
  virtual BigInt subpacketization() const = 0;
  virtual std::uint64_t num_zf_sets() const = 0;
  virtual std::uint64_t round_count() const = 0;

  /// True iff `packet` is one of the packets receiver `receiver` must be sent:
  /// a well-formed split of a subfile it does not hold.
  virtual bool is_missing_packet(std::uint32_t receiver, const PacketId& packet) const = 0;
  /// Every missing packet of every receiver, derived from the splitting rule
  /// alone (never from the round schedule).
  virtual void for_each_missing_packet(const Demands& demands, const PacketSink& sink) const = 0;
  /// The delivery schedule in its deterministic order.
  virtual void for_each_round(const Demands& demands, const RoundSink& sink) const = 0;

  /// Readable form of a packet for diagnostics.
  virtual std::string describe(std::uint32_t receiver, const PacketId& packet) const;

  /// Throws InvalidDemand unless every receiver demands a file in [N].
  void check_demands(const Demands& demands) const;
  std::vector<Round> enumerate_rounds(const Demands& demands) const;
};

}  // namespace cachedof
