#include "cachedof/verify.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "cachedof/error.hpp"
#include "cachedof/projgeom.hpp"

namespace cachedof {
namespace {

constexpr std::size_t kMaxListed = 20;
constexpr unsigned __int128 kMaxBitmapBits = static_cast<unsigned __int128>(1) << 30U;

void note(std::vector<std::string>& list, std::string message) {
  if (list.size() < kMaxListed) list.push_back(std::move(message));
}

Rational power_rational(std::uint64_t q, std::int64_t exponent) {
  if (exponent >= 0) return Rational(pow_big(q, static_cast<std::uint64_t>(exponent)));
  return Rational(BigInt(1), pow_big(q, static_cast<std::uint64_t>(-exponent)));
}

}  // namespace

RoundCheck check_round_valid(const Round& round, const CachingMap& caching, std::uint32_t t_T) {
  RoundCheck out;
  auto fail = [&](std::string msg) {
    out.valid = false;
    out.diagnostics.push_back(std::move(msg));
  };
  const auto n = round.entries.size();
  if (n == 0) fail("round serves nobody");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      if (round.entries[i].receiver == round.entries[k].receiver) {
        fail("receiver " + std::to_string(round.entries[i].receiver + 1) + " is served twice");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = round.entries[i];
    if (e.receiver >= caching.num_receivers() || e.packet.tx_set >= caching.num_tx_sets() ||
        e.packet.rx_set >= caching.num_rx_sets()) {
      fail("entry " + std::to_string(i) + " references an unknown receiver or subfile");
      continue;
    }
    if (caching.receiver_caches(e.receiver, e.packet)) {
      fail("entry " + std::to_string(i) + ": receiver already caches its own packet");
    }
    const auto holders = caching.tx_holders(e.packet.tx_set);
    if (holders.size() != t_T) {
      fail("entry " + std::to_string(i) + ": packet cached at " + std::to_string(holders.size()) +
           " transmitters, expected " + std::to_string(t_T));
    }
    for (auto t : holders) {
      if (!std::binary_search(round.transmitters.begin(), round.transmitters.end(), t)) {
        fail("entry " + std::to_string(i) + ": holder transmitter " + std::to_string(t + 1) + " not in the round");
      }
    }
    std::size_t cached_at = 0;
    for (const auto& other : round.entries) {
      if (other.receiver < caching.num_receivers() && caching.receiver_caches(other.receiver, e.packet)) ++cached_at;
    }
    if (cached_at + t_T < n) {
      fail("entry " + std::to_string(i) + ": cached at " + std::to_string(cached_at) + " of " + std::to_string(n) +
           " round receivers, need at least " + std::to_string(n - t_T));
    }
  }
  return out;
}

CompletenessChecker::CompletenessChecker(const DeliveryScheme& scheme, const Demands& demands)
    : scheme_(scheme), demands_(demands) {
  scheme.check_demands(demands);
  const auto& c = scheme.caching();
  const unsigned __int128 bits = static_cast<unsigned __int128>(c.num_receivers()) * c.num_tx_sets() * c.num_rx_sets() *
                                 std::max<std::uint64_t>(scheme.num_zf_sets(), 1);
  use_bitmap_ = bits <= kMaxBitmapBits;
  if (use_bitmap_) bitmap_.assign(static_cast<std::size_t>(bits), false);
}

std::optional<std::uint64_t> CompletenessChecker::dense_key(std::uint32_t receiver, const PacketId& packet) const {
  const auto& c = scheme_.caching();
  if (receiver >= c.num_receivers() || packet.tx_set >= c.num_tx_sets() || packet.rx_set >= c.num_rx_sets() ||
      packet.zf_set >= scheme_.num_zf_sets()) {
    return std::nullopt;
  }
  return ((receiver * c.num_tx_sets() + packet.tx_set) * c.num_rx_sets() + packet.rx_set) * scheme_.num_zf_sets() +
         packet.zf_set;
}

bool CompletenessChecker::mark(std::uint32_t receiver, const PacketId& packet) {
  if (use_bitmap_) {
    const auto key = *dense_key(receiver, packet);
    if (bitmap_[key]) return false;
    bitmap_[key] = true;
    return true;
  }
  std::ostringstream os;
  os << receiver << ':' << packet.tx_set << ':' << packet.rx_set << ':' << packet.zf_set;
  return overflow_.insert(os.str()).second;
}

bool CompletenessChecker::seen(std::uint32_t receiver, const PacketId& packet) const {
  if (use_bitmap_) return bitmap_[*dense_key(receiver, packet)];
  std::ostringstream os;
  os << receiver << ':' << packet.tx_set << ':' << packet.rx_set << ':' << packet.zf_set;
  return overflow_.count(os.str()) > 0;
}

void CompletenessChecker::add(const Round& round) {
  ++report_.rounds_total;
  const auto check = check_round_valid(round, scheme_.caching(), scheme_.t_T());
  if (check.valid) {
    ++report_.rounds_valid;
  } else {
    for (const auto& d : check.diagnostics) note(report_.round_diagnostics, "round " + std::to_string(report_.rounds_total - 1) + ": " + d);
  }
  const auto size = static_cast<std::uint32_t>(round.entries.size());
  if (!round_size_) {
    round_size_ = size;
  } else if (*round_size_ != size) {
    sizes_differ_ = true;
  }
  for (const auto& e : round.entries) {
    if (e.receiver >= demands_.size() || e.packet.file != demands_[e.receiver] ||
        !scheme_.is_missing_packet(e.receiver, e.packet)) {
      ++report_.invalid_entries;
      note(report_.round_diagnostics, "round " + std::to_string(report_.rounds_total - 1) + ": entry " +
                                          scheme_.describe(e.receiver, e.packet) + " is not a demanded missing packet");
      continue;
    }
    if (mark(e.receiver, e.packet)) {
      ++report_.packets_served;
    } else {
      ++report_.duplicate_count;
      note(report_.duplicates, scheme_.describe(e.receiver, e.packet));
    }
  }
}

VerificationReport CompletenessChecker::finish() {
  scheme_.for_each_missing_packet(demands_, [&](std::uint32_t receiver, const PacketId& packet) {
    ++report_.packets_missing;
    if (!seen(receiver, packet)) {
      ++report_.orphan_count;
      note(report_.orphans, scheme_.describe(receiver, packet));
    }
  });
  if (round_size_ && !sizes_differ_) report_.dof_observed = round_size_;
  report_.rate = Rational(BigInt(report_.rounds_total), scheme_.subpacketization());
  report_.transmitter_fraction = scheme_.caching().transmitter_fraction();
  report_.receiver_fraction = scheme_.caching().receiver_fraction();
  return report_;
}

VerificationReport check_completeness(const DeliveryScheme& scheme, const Demands& demands, std::span<const Round> rounds) {
  CompletenessChecker checker(scheme, demands);
  for (const auto& r : rounds) checker.add(r);
  return checker.finish();
}

VerificationReport verify_schedule(const DeliveryScheme& scheme, const Demands& demands) {
  CompletenessChecker checker(scheme, demands);
  scheme.for_each_round(demands, [&](const Round& r) { checker.add(r); });
  return checker.finish();
}

RateDof compute_rate_dof(const VerificationReport& report, const BigInt& F, std::uint32_t K_R,
                         const Rational& receiver_fraction, std::uint32_t expected_dof) {
  if (!report.passed()) throw Error(ErrorCode::kInconsistent, "schedule failed verification");
  if (report.rounds_total == 0) throw Error(ErrorCode::kInconsistent, "empty schedule");
  RateDof out;
  out.rate = Rational(BigInt(report.rounds_total), F);
  out.dof = Rational(BigInt(K_R)) * (Rational(1) - receiver_fraction) / out.rate;
  if (!report.dof_observed || *report.dof_observed != expected_dof) {
    throw Error(ErrorCode::kInconsistent, "receivers served per round differ from the closed-form DoF");
  }
  if (out.dof != Rational(expected_dof)) {
    throw Error(ErrorCode::kInconsistent, "K_R(1 - M_R/N)/rate = " + out.dof.str() + " differs from DoF " +
                                              std::to_string(expected_dof));
  }
  return out;
}

bool check_qbinom_bounds(std::uint64_t a, std::uint64_t b, std::uint64_t f, std::uint64_t q) {
  if (b > a || b > f) throw Error(ErrorCode::kInvalidArgs, "bounds need b <= a and b <= f");
  const BigInt gab = gaussian_binomial(a, b, q);
  const BigInt gfb = gaussian_binomial(f, b, q);
  const auto ai = static_cast<std::int64_t>(a);
  const auto bi = static_cast<std::int64_t>(b);
  const auto fi = static_cast<std::int64_t>(f);
  const Rational value(gab);
  const bool first = power_rational(q, (ai - bi) * bi) <= value && value <= power_rational(q, (ai - bi + 1) * bi);
  const Rational ratio(gab, gfb);
  const bool second = power_rational(q, (ai - fi - 1) * bi) <= ratio && ratio <= power_rational(q, (ai - fi + 1) * bi);
  return first && second;
}

bool check_asymptotic_fractions(const PGParams& p) {
  const auto alpha = static_cast<std::int64_t>(p.k_t) - p.m_t - p.l_t;
  const auto beta = static_cast<std::int64_t>(p.k_r) - p.m_r - p.l_r;
  return p.transmitter_fraction() <= power_rational(p.q, 1 - alpha) &&
         p.receiver_fraction() <= power_rational(p.q, 1 - beta);
}

BoundSweep sweep_qbinom_bounds(std::uint64_t max_value, std::span<const std::uint64_t> qs) {
  BoundSweep sweep;
  for (auto q : qs) {
    for (std::uint64_t a = 1; a <= max_value; ++a) {
      for (std::uint64_t b = 1; b <= a; ++b) {
        for (std::uint64_t f = b; f <= max_value; ++f) {
          ++sweep.checked;
          if (!check_qbinom_bounds(a, b, f, q)) {
            sweep.failures.push_back("q=" + std::to_string(q) + " a=" + std::to_string(a) + " b=" + std::to_string(b) +
                                     " f=" + std::to_string(f));
          }
        }
      }
    }
  }
  return sweep;
}

PrintedValue round_one_significant(const BigInt& value) {
  if (value <= 0) throw Error(ErrorCode::kInvalidArgs, "one-figure rounding needs a positive value");
  const std::string digits = value.str();
  int exponent = static_cast<int>(digits.size()) - 1;
  int mantissa = digits[0] - '0';
  if (digits.size() > 1 && digits[1] >= '5') ++mantissa;
  if (mantissa == 10) {
    mantissa = 1;
    ++exponent;
  }
  return {mantissa, exponent};
}

std::string format_printed(const PrintedValue& v) {
  if (v.mantissa == 1) return "10^" + std::to_string(v.exponent);
  return std::to_string(v.mantissa) + "x10^" + std::to_string(v.exponent);
}

const std::vector<Table1Manifest>& table1_manifest() {
  // Parameters recovered from the printed K_T, K_R and cache fractions:
  // K = theta(k - l + 1) fixes q and k - l, t = theta(m + 1) fixes m, and l = 1
  // is taken throughout (every count depends on k and l only through k - l).
  static const std::vector<Table1Manifest> rows = {
      {7, 31, ".428", ".097", 6, 5, PrintedValue{3, 6}, {1, 7}, {2, 6}, 3, 3, 2, 3, 1, 1, 5, 1, 1,
       "q=2: K_T=7=theta(3), t_T=3=theta(2) -> m_t=1; K_R=31=theta(5), t_R=.097*31=3 -> m_r=1"},
      {7, 63, ".428", ".111", 10, 6, std::nullopt, {1, 13}, {7, 8}, 3, 7, 2, 3, 1, 1, 6, 1, 2,
       "q=2: K_R=63=theta(6), t_R=.111*63=7=theta(3) -> m_r=2; k_r=6 meets k_r>=m_r+l_r+theta(2)"},
      {7, 127, ".428", ".055", 10, 6, std::nullopt, {1, 16}, {4, 10}, 3, 7, 2, 3, 1, 1, 7, 1, 2,
       "q=2: K_R=127=theta(7), t_R=.055*127=7 -> m_r=2"},
      {13, 364, ".308", ".011", 8, 6, PrintedValue{3, 16}, {1, 18}, {2, 13}, 4, 4, 3, 3, 1, 1, 6, 1, 1,
       "q=3: K_T=13=theta(3), t_T=.308*13=4=theta(2) -> m_t=1; K_R=364=theta(6), t_R=.011*364=4 -> m_r=1"},
      {40, 364, ".10", ".011", 8, 6, PrintedValue{3, 18}, {1, 20}, {3, 14}, 4, 4, 3, 4, 1, 1, 6, 1, 1,
       "q=3: K_T=40=theta(4), t_T=.10*40=4 -> m_t=1; K_R=364=theta(6), t_R=4 -> m_r=1"},
      {40, 1093, ".10", ".004", 8, 6, PrintedValue{7, 21}, {1, 24}, {8, 16}, 4, 4, 3, 4, 1, 1, 7, 1, 1,
       "q=3: K_T=40=theta(4) -> m_t=1; K_R=1093=theta(7), t_R=.004*1093=4 -> m_r=1"},
  };
  return rows;
}

std::vector<Table1Row> table1_report() {
  std::vector<Table1Row> out;
  for (const auto& m : table1_manifest()) {
    Table1Row row;
    row.manifest = m;
    row.subset = make_subset_params(m.K_T, m.t_T, m.K_R, m.t_R, m.K_R);
    row.pg = build_pg_params(m.q, m.k_t, m.l_t, m.m_t, m.k_r, m.l_r, m.m_r, m.K_R);
    if (row.pg.K_T != m.K_T || row.pg.K_R != m.K_R) row.flags.push_back("manifest does not reproduce K_T/K_R");
    row.dof_subset_match = row.subset.dof == m.printed_dof_subset;
    row.dof_pg_match = row.pg.dof == m.printed_dof_pg;
    row.F_subset_match = round_one_significant(row.subset.F) == m.printed_F_subset;
    row.F_pg_match = round_one_significant(row.pg.F) == m.printed_F_pg;
    if (!row.dof_subset_match) row.flags.push_back("subset DoF differs from printed");
    if (!row.dof_pg_match) row.flags.push_back("pg DoF differs from printed");
    if (!row.F_subset_match) {
      row.flags.push_back("subset F " + row.subset.F.str() + " vs printed " + format_printed(m.printed_F_subset));
    }
    if (!row.F_pg_match) row.flags.push_back("pg F " + row.pg.F.str() + " vs printed " + format_printed(m.printed_F_pg));
    out.push_back(std::move(row));
  }
  return out;
}

std::string render_table1(const std::vector<Table1Row>& rows) {
  std::ostringstream os;
  auto cell = [&](const std::string& s, int w) { os << std::setw(w) << s << ' '; };
  cell("K_T", 4);
  cell("K_R", 5);
  cell("M_T/N", 6);
  cell("M_R/N", 6);
  cell("DoF(sub)", 8);
  cell("DoF(pg)", 7);
  cell("F(reference)", 16);
  cell("F(subset)", 26);
  cell("F(pg)", 20);
  os << "flags\n";
  for (const auto& r : rows) {
    const auto& m = r.manifest;
    cell(std::to_string(m.K_T), 4);
    cell(std::to_string(m.K_R), 5);
    cell(m.tx_fraction, 6);
    cell(m.rx_fraction, 6);
    cell(std::to_string(r.subset.dof), 8);
    cell(r.pg.dof.str(), 7);
    cell(m.reference_F ? format_printed(*m.reference_F) : "-", 16);
    cell(r.subset.F.str(), 26);
    cell(r.pg.F.str(), 20);
    for (std::size_t i = 0; i < r.flags.size(); ++i) os << (i ? "; " : "") << r.flags[i];
    if (r.flags.empty()) os << "ok";
    os << '\n';
  }
  return os.str();
}

}  // namespace cachedof
