#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cachedof/combinatorics.hpp"
#include "cachedof/projgeom.hpp"
#include "cachedof/schedule.hpp"

namespace cachedof {

/// Parameters of the projective-geometry scheme over GF(q). Transmitters are
/// the l_t-subspaces of GF(q)^{k_t} through a fixed (l_t-1)-subspace L_t,
/// receivers likewise in GF(q)^{k_r} through L_r.
struct PGParams {
  std::uint32_t q = 0;
  std::uint32_t k_t = 0, l_t = 0, m_t = 0;
  std::uint32_t k_r = 0, l_r = 0, m_r = 0;
  std::uint32_t N = 0;

  BigInt K_T, K_R;  // theta(k - l + 1)
  BigInt t_T, t_R;  // theta(m + 1)
  BigInt F_T, F_R;  // |X_t|, |X_r|
  BigInt F_P;       // packets per demanded subfile
  BigInt F;         // F_T F_R F_P
  BigInt dof;       // m_r + t_T + 1

  Rational transmitter_fraction() const { return Rational(t_T, K_T); }
  Rational receiver_fraction() const { return Rational(t_R, K_R); }
};

/// Evaluates the closed forms. Throws ConstraintViolation naming the violated
/// inequality, NotPrimePower for a bad q, and NonIntegerCount if one of the
/// factorial divisions is inexact.
PGParams build_pg_params(std::uint32_t q, std::uint32_t k_t, std::uint32_t l_t, std::uint32_t m_t, std::uint32_t k_r,
                         std::uint32_t l_r, std::uint32_t m_r, std::uint32_t N);

/// A family of equal-size sets of member indices, each set sorted, the family
/// sorted lexicographically.
class MemberSets {
 public:
  MemberSets() = default;
  explicit MemberSets(std::uint32_t arity) : arity_(arity) {}

  std::uint32_t arity() const noexcept { return arity_; }
  std::uint64_t size() const noexcept { return count_; }
  std::span<const std::uint32_t> at(std::uint64_t index) const;
  std::optional<std::uint64_t> find(std::span<const std::uint32_t> set) const;

  void push_back(std::span<const std::uint32_t> set);

 private:
  std::uint32_t arity_ = 0;
  std::uint64_t count_ = 0;
  std::vector<std::uint32_t> flat_;
};

/// Unordered `size`-sets of members whose sum with `fixed` is direct, i.e.
/// dim(fixed + sum) = dim(fixed) + size; every member is a one-dimensional
/// extension of `fixed`.
MemberSets independent_member_sets(const Subspace& fixed, const std::vector<Subspace>& members, std::uint32_t size);

class PGScheme final : public DeliveryScheme {
 public:
  /// Builds every family and the caching map, and checks each enumerated size
  /// against the closed forms (Inconsistent on mismatch). Throws InvalidArgs
  /// when the round family would exceed 2*10^7 sets.
  explicit PGScheme(PGParams params);

  const PGParams& params() const noexcept { return params_; }
  const Field& field() const noexcept { return field_; }
  const Subspace& tx_fixed() const noexcept { return lt_; }
  const Subspace& rx_fixed() const noexcept { return lr_; }
  const SubspaceFamily& transmitters() const noexcept { return tx_members_; }
  const SubspaceFamily& receivers() const noexcept { return rx_members_; }
  const MemberSets& tx_cache_sets() const noexcept { return xt_; }
  const MemberSets& rx_cache_sets() const noexcept { return xr_; }
  const MemberSets& zf_sets() const noexcept { return y_; }
  const MemberSets& round_sets() const noexcept { return z_; }

  Subspace tx_set_span(std::uint64_t index) const;
  Subspace rx_set_span(std::uint64_t index) const;

  /// Packets W_{file, X_t, X_r, Y}: one per Y with {V} u X_r u Y a round set.
  /// Throws InvalidArgs if V already stores the subfile.
  std::vector<PacketId> split_packets(std::uint32_t file, std::uint32_t receiver, std::uint64_t tx_set,
                                      std::uint64_t rx_set) const;

  std::string name() const override { return "pg"; }
  const CachingMap& caching() const override { return caching_; }
  std::uint32_t num_files() const override { return params_.N; }
  std::uint32_t t_T() const override { return static_cast<std::uint32_t>(to_u64(params_.t_T)); }
  std::uint32_t dof() const override { return static_cast<std::uint32_t>(to_u64(params_.dof)); }
  BigInt subpacketization() const override { return params_.F; }
  std::uint64_t num_zf_sets() const override { return y_.size(); }
  std::uint64_t round_count() const override;

  bool is_missing_packet(std::uint32_t receiver, const PacketId& packet) const override;
  void for_each_missing_packet(const Demands& demands, const PacketSink& sink) const override;
  /// Rounds in order of (X_t, Z, S), pivot receiver = smallest member of Z.
  void for_each_round(const Demands& demands, const RoundSink& sink) const override;
  std::string describe(std::uint32_t receiver, const PacketId& packet) const override;

 private:
  PGParams params_;
  Field field_;
  Subspace lt_;
  Subspace lr_;
  SubspaceFamily tx_members_;
  SubspaceFamily rx_members_;
  std::vector<Vector> rx_reps_;
  MemberSets xt_;
  MemberSets xr_;
  MemberSets y_;
  MemberSets z_;
  CachingMap caching_;
};

}  // namespace cachedof
