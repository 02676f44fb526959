#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "cachedof/combinatorics.hpp"
#include "cachedof/scheme_pg.hpp"
#include "cachedof/scheme_subset.hpp"
#include "cachedof/schedule.hpp"

namespace cachedof {

struct RoundCheck {
  bool valid = true;
  std::vector<std::string> diagnostics;
};

/// A round can be delivered by zero-forcing plus cache cancellation when its
/// receivers are distinct, no receiver already holds its own packet, every
/// packet sits at exactly t_T transmitters all taking part in the round, and
/// every packet is cached at n - t_T or more of the round's n receivers.
RoundCheck check_round_valid(const Round& round, const CachingMap& caching, std::uint32_t t_T);

struct VerificationReport {
  std::uint64_t rounds_total = 0;
  std::uint64_t rounds_valid = 0;
  std::uint64_t packets_missing = 0;
  std::uint64_t packets_served = 0;
  std::uint64_t invalid_entries = 0;  // wrong file, or not a missing packet of that receiver
  std::uint64_t duplicate_count = 0;
  std::uint64_t orphan_count = 0;
  std::vector<std::string> duplicates;  // first few, for diagnostics
  std::vector<std::string> orphans;
  std::vector<std::string> round_diagnostics;
  std::optional<std::uint32_t> dof_observed;  // empty when rounds differ in size
  Rational rate;                              // rounds_total / F
  Rational transmitter_fraction;
  Rational receiver_fraction;

  bool passed() const noexcept {
    return rounds_valid == rounds_total && invalid_entries == 0 && duplicate_count == 0 && orphan_count == 0 &&
           packets_served == packets_missing;
  }
};

/// Streaming coverage check: feed rounds one at a time, then finish() compares
/// the served entries against the scheme's own list of missing packets.
class CompletenessChecker {
 public:
  CompletenessChecker(const DeliveryScheme& scheme, const Demands& demands);

  void add(const Round& round);
  VerificationReport finish();

 private:
  std::optional<std::uint64_t> dense_key(std::uint32_t receiver, const PacketId& packet) const;
  bool mark(std::uint32_t receiver, const PacketId& packet);
  bool seen(std::uint32_t receiver, const PacketId& packet) const;

  const DeliveryScheme& scheme_;
  Demands demands_;
  VerificationReport report_;
  bool use_bitmap_ = true;
  std::vector<bool> bitmap_;
  std::unordered_set<std::string> overflow_;
  std::optional<std::uint32_t> round_size_;
  bool sizes_differ_ = false;
};

VerificationReport check_completeness(const DeliveryScheme& scheme, const Demands& demands, std::span<const Round> rounds);
/// Streams the scheme's own schedule through the checker.
VerificationReport verify_schedule(const DeliveryScheme& scheme, const Demands& demands);

struct RateDof {
  Rational rate;
  Rational dof;
};

/// rate = S/F and DoF = K_R (1 - M_R/N) / rate. Throws Inconsistent when the
/// report failed or either DoF disagrees with `expected_dof`.
RateDof compute_rate_dof(const VerificationReport& report, const BigInt& F, std::uint32_t K_R,
                         const Rational& receiver_fraction, std::uint32_t expected_dof);

/// Exact check of q^{(a-b)b} <= [a b]_q <= q^{(a-b+1)b} and
/// q^{(a-f-1)b} <= [a b]_q/[f b]_q <= q^{(a-f+1)b}. Needs b <= a and b <= f.
bool check_qbinom_bounds(std::uint64_t a, std::uint64_t b, std::uint64_t f, std::uint64_t q);

/// t_T/K_T <= q^{1-alpha} and t_R/K_R <= q^{1-beta} with alpha = k_t - m_t - l_t
/// and beta = k_r - m_r - l_r, compared exactly.
bool check_asymptotic_fractions(const PGParams& params);

struct BoundSweep {
  std::uint64_t checked = 0;
  std::vector<std::string> failures;
};

BoundSweep sweep_qbinom_bounds(std::uint64_t max_value, std::span<const std::uint64_t> qs);

/// A value printed as mantissa x 10^exponent.
struct PrintedValue {
  int mantissa = 1;
  int exponent = 0;

  friend bool operator==(const PrintedValue&, const PrintedValue&) = default;
};

/// Rounds a positive integer to one significant figure, half up.
PrintedValue round_one_significant(const BigInt& value);
std::string format_printed(const PrintedValue& v);

struct Table1Manifest {
  std::uint32_t K_T = 0, K_R = 0;
  std::string tx_fraction, rx_fraction;  // as printed
  std::uint32_t printed_dof_subset = 0, printed_dof_pg = 0;
  std::optional<PrintedValue> reference_F;  // reference only; absent rows print "-"
  PrintedValue printed_F_subset, printed_F_pg;
  std::uint32_t t_T = 0, t_R = 0;
  std::uint32_t q = 0, k_t = 0, l_t = 0, m_t = 0, k_r = 0, l_r = 0, m_r = 0;
  std::string derivation;
};

struct Table1Row {
  Table1Manifest manifest;
  SubsetParams subset;
  PGParams pg;
  bool dof_subset_match = false;
  bool dof_pg_match = false;
  bool F_subset_match = false;
  bool F_pg_match = false;
  std::vector<std::string> flags;
};

const std::vector<Table1Manifest>& table1_manifest();
std::vector<Table1Row> table1_report();
std::string render_table1(const std::vector<Table1Row>& rows);

}  // namespace cachedof
