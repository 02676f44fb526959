#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cachedof/combinatorics.hpp"
#include "cachedof/schedule.hpp"

namespace cachedof {

/// Parameters of the subset-indexed scheme: subfiles are indexed by a
/// t_T-subset of transmitters and a t_R-subset of receivers, and every demanded
/// subfile is split once more by the (t_T-1)-subset of receivers at which its
/// packet is zero-forced.
struct SubsetParams {
  std::uint32_t K_T = 0;
  std::uint32_t t_T = 0;
  std::uint32_t K_R = 0;
  std::uint32_t t_R = 0;
  std::uint32_t N = 0;
  BigInt F_C;  // C(K_T,t_T) C(K_R,t_R)
  BigInt F_P;  // C(K_R-t_R-1, t_T-1)
  BigInt F;
  BigInt rounds;  // C(K_T,t_T) C(K_R,t_T+t_R) C(t_T+t_R-1,t_R)
  std::uint32_t dof = 0;

  Rational transmitter_fraction() const { return Rational(BigInt(t_T), BigInt(K_T)); }
  Rational receiver_fraction() const { return Rational(BigInt(t_R), BigInt(K_R)); }
};

/// Throws ConstraintViolation naming the first violated inequality.
SubsetParams make_subset_params(std::uint32_t K_T, std::uint32_t t_T, std::uint32_t K_R, std::uint32_t t_R,
                                std::uint32_t N);

/// W_{d,T,R,R'} with explicit 0-based member sets.
struct SubsetPacketId {
  std::uint32_t file = 0;
  std::vector<std::uint32_t> T;
  std::vector<std::uint32_t> R;
  std::vector<std::uint32_t> Rprime;

  friend bool operator==(const SubsetPacketId&, const SubsetPacketId&) = default;
};

/// One packet per (t_T-1)-subset R' of [K_R] \ (R u {target}).
std::vector<SubsetPacketId> split_subset_packets(const SubsetParams& params, std::uint32_t file,
                                                 std::span<const std::uint32_t> T, std::span<const std::uint32_t> R,
                                                 std::uint32_t target);

class SubsetScheme final : public DeliveryScheme {
 public:
  /// Materializes the caching map; throws InvalidArgs when the instance has
  /// more than 10^7 subfiles per file.
  explicit SubsetScheme(SubsetParams params);

  const SubsetParams& params() const noexcept { return params_; }

  std::vector<std::uint32_t> tx_subset(std::uint64_t index) const;
  std::vector<std::uint32_t> rx_subset(std::uint64_t index) const;
  std::vector<std::uint32_t> zf_subset(std::uint64_t index) const;
  std::uint64_t tx_index(std::span<const std::uint32_t> T) const;
  std::uint64_t rx_index(std::span<const std::uint32_t> R) const;
  std::uint64_t zf_index(std::span<const std::uint32_t> Rprime) const;

  PacketId to_packet_id(const SubsetPacketId& packet) const;
  SubsetPacketId from_packet_id(const PacketId& packet) const;

  std::string name() const override { return "subset"; }
  const CachingMap& caching() const override { return caching_; }
  std::uint32_t num_files() const override { return params_.N; }
  std::uint32_t t_T() const override { return params_.t_T; }
  std::uint32_t dof() const override { return params_.dof; }
  BigInt subpacketization() const override { return params_.F; }
  std::uint64_t num_zf_sets() const override { return binomial(params_.K_R, params_.t_T - 1); }
  std::uint64_t round_count() const override { return to_u64(params_.rounds); }

  bool is_missing_packet(std::uint32_t receiver, const PacketId& packet) const override;
  void for_each_missing_packet(const Demands& demands, const PacketSink& sink) const override;
  /// Rounds in lexicographic order of (T, U-set, U) with the minimum of each
  /// receiver set as the pivot receiver.
  void for_each_round(const Demands& demands, const RoundSink& sink) const override;
  std::string describe(std::uint32_t receiver, const PacketId& packet) const override;

 private:
  SubsetParams params_;
  CachingMap caching_;
};

}  // namespace cachedof
