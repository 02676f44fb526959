#include <doctest.h>

#include <cmath>

#include "cachedof/channel.hpp"
#include "cachedof/error.hpp"
#include "cachedof/scheme_pg.hpp"
#include "cachedof/scheme_subset.hpp"

using namespace cachedof;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kFormat;
}

Round first_round(const DeliveryScheme& s, const Demands& d) {
  Round out;
  bool got = false;
  s.for_each_round(d, [&](const Round& r) {
    if (!got) out = r;
    got = true;
  });
  return out;
}

}  // namespace

TEST_CASE("sampled channels are reproducible and roughly unit variance") {
  const auto a = sample_channel(40, 50, 11);
  const auto b = sample_channel(40, 50, 11);
  const auto c = sample_channel(40, 50, 12);
  CHECK(a.H == b.H);
  CHECK(a.H != c.H);
  const double power = a.H.squaredNorm() / 2000.0;
  CHECK(power == doctest::Approx(1.0).epsilon(0.1));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  CHECK(db_to_linear(20.0) == doctest::Approx(100.0));
}

TEST_CASE("zero-forcing on the subset scheme") {
  const SubsetScheme s(make_subset_params(3, 2, 6, 2, 6));
  const Demands d{0, 1, 2, 3, 4, 5};
  std::uint64_t index = 0;
  s.for_each_round(d, [&](const Round& round) {
    const auto ch = sample_channel(static_cast<std::uint32_t>(round.entries.size()), 3, derive_seed(5, index++, 0));
    const auto plan = solve_beamforming(round, s.caching(), s.t_T(), ch);
    CHECK(residual_interference(round, s.caching(), plan, ch) < kZeroForcingTolerance);
    CHECK(active_transmitters(plan) <= s.t_T());
    const auto w = random_payloads(static_cast<std::uint32_t>(round.entries.size()), 16, index);
    const auto out = simulate_round(round, s.caching(), plan, ch, w, 10.0, std::nullopt);
    CHECK(out.mean_mse < 1e-18);
    CHECK(out.max_tx_power == doctest::Approx(10.0));
  });
}

TEST_CASE("zero-forcing on the projective scheme") {
  const PGScheme s(build_pg_params(2, 2, 1, 1, 4, 1, 0, 15));
  Demands d(15);
  for (std::uint32_t r = 0; r < 15; ++r) d[r] = r;
  std::uint64_t index = 0;
  s.for_each_round(d, [&](const Round& round) {
    if (index++ % 37 != 0) return;
    const auto ch = sample_channel(static_cast<std::uint32_t>(round.entries.size()), 3, derive_seed(9, index, 0));
    const auto plan = solve_beamforming(round, s.caching(), s.t_T(), ch);
    CHECK(residual_interference(round, s.caching(), plan, ch) < kZeroForcingTolerance);
    CHECK(active_transmitters(plan) <= s.t_T());
  });
}

TEST_CASE("noise lowers with SNR") {
  const SubsetScheme s(make_subset_params(2, 1, 4, 1, 4));
  const auto round = first_round(s, {0, 1, 2, 3});
  double low = 0.0, high = 0.0;
  for (std::uint64_t k = 0; k < 300; ++k) {
    const auto ch = sample_channel(2, 2, derive_seed(3, k, 0));
    const auto plan = solve_beamforming(round, s.caching(), s.t_T(), ch);
    const auto w = random_payloads(2, 32, derive_seed(3, k, 1));
    low += simulate_round(round, s.caching(), plan, ch, w, db_to_linear(0), derive_seed(3, k, 2)).mean_mse;
    high += simulate_round(round, s.caching(), plan, ch, w, db_to_linear(20), derive_seed(3, k, 2)).mean_mse;
  }
  CHECK(high < low / 10.0);
}

TEST_CASE("precondition failures") {
  const SubsetScheme s(make_subset_params(2, 1, 4, 1, 4));
  const auto round = first_round(s, {0, 1, 2, 3});
  const auto ch = sample_channel(2, 2, 1);

  auto twice = round;
  twice.entries[1].receiver = twice.entries[0].receiver;
  CHECK(code_of([&] { solve_beamforming(twice, s.caching(), 1, ch); }) == ErrorCode::kPreconditionFailed);

  auto absent = round;
  absent.transmitters.clear();
  CHECK(code_of([&] { solve_beamforming(absent, s.caching(), 1, ch); }) == ErrorCode::kPreconditionFailed);

  auto cached = round;
  cached.entries[0].receiver = s.caching().rx_holders(cached.entries[0].packet.rx_set)[0];
  CHECK(code_of([&] { solve_beamforming(cached, s.caching(), 1, ch); }) == ErrorCode::kPreconditionFailed);

  CHECK(code_of([&] { solve_beamforming(round, s.caching(), 2, ch); }) == ErrorCode::kPreconditionFailed);
  CHECK(code_of([&] { solve_beamforming(round, s.caching(), 1, sample_channel(3, 2, 1)); }) ==
        ErrorCode::kPreconditionFailed);
}

TEST_CASE("singular channels are rejected") {
  const SubsetScheme s(make_subset_params(3, 2, 5, 1, 5));
  const auto round = first_round(s, {0, 1, 2, 3, 4});
  auto ch = sample_channel(3, 3, 4);
  ch.H.row(1) = ch.H.row(0);
  ch.H.row(2) = ch.H.row(0);
  CHECK(code_of([&] { solve_beamforming(round, s.caching(), 2, ch); }) == ErrorCode::kIllConditioned);
}
