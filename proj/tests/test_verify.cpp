#include <doctest.h>

#include "cachedof/error.hpp"
#include "cachedof/scheme_pg.hpp"
#include "cachedof/scheme_subset.hpp"
#include "cachedof/verify.hpp"

using namespace cachedof;

TEST_CASE("one significant figure") {
  CHECK(round_one_significant(1874880) == PrintedValue{2, 6});
  CHECK(round_one_significant(55221075) == PrintedValue{6, 7});
  CHECK(round_one_significant(95) == PrintedValue{1, 2});
  CHECK(round_one_significant(7) == PrintedValue{7, 0});
  CHECK(round_one_significant(BigInt("85757981135299200")) == PrintedValue{9, 16});
  CHECK(format_printed({1, 7}) == "10^7");
  CHECK(format_printed({3, 14}) == "3x10^14");
  CHECK_THROWS_AS(round_one_significant(0), Error);
}

TEST_CASE("q-binomial bounds") {
  CHECK(check_qbinom_bounds(4, 2, 4, 2));
  CHECK(check_qbinom_bounds(5, 1, 3, 3));
  CHECK(check_qbinom_bounds(3, 3, 7, 2));
  CHECK_THROWS_AS(check_qbinom_bounds(2, 3, 5, 2), Error);
  CHECK_THROWS_AS(check_qbinom_bounds(5, 3, 2, 2), Error);
  const std::vector<std::uint64_t> qs{2, 3};
  const auto sweep = sweep_qbinom_bounds(6, qs);
  CHECK(sweep.failures.empty());
  CHECK(sweep.checked > 0);
}

TEST_CASE("asymptotic fraction bounds on constructed instances") {
  CHECK(check_asymptotic_fractions(build_pg_params(2, 2, 1, 1, 5, 1, 1, 31)));
  CHECK(check_asymptotic_fractions(build_pg_params(3, 4, 1, 1, 7, 1, 1, 1093)));
}

TEST_CASE("comparison table regeneration") {
  const auto rows = table1_report();
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.dof_subset_match);
    CHECK(r.dof_pg_match);
    CHECK(r.pg.K_T == r.manifest.K_T);
    CHECK(r.pg.K_R == r.manifest.K_R);
    CHECK(r.subset.t_T == r.pg.t_T);
    CHECK(r.subset.t_R == r.pg.t_R);
  }
  CHECK(rows[0].pg.F == 1874880);
  CHECK(rows[0].F_pg_match);
  CHECK(rows[3].F_pg_match);
  CHECK(rows[0].subset.F == 55221075);
  CHECK_FALSE(rows[0].F_subset_match);
  CHECK(rows[1].pg.F == 629959680);
  CHECK_FALSE(rows[1].F_pg_match);
  CHECK_FALSE(rows[1].flags.empty());
  const auto text = render_table1(rows);
  CHECK(text.find("1874880") != std::string::npos);
  CHECK(text.find("629959680") != std::string::npos);
}

TEST_CASE("mutated schedules are caught") {
  const SubsetScheme s(make_subset_params(3, 2, 5, 1, 5));
  const Demands d{0, 1, 2, 3, 4};
  auto rounds = s.enumerate_rounds(d);
  REQUIRE(check_completeness(s, d, rounds).passed());

  SUBCASE("dropped round leaves orphans") {
    rounds.pop_back();
    const auto r = check_completeness(s, d, rounds);
    CHECK_FALSE(r.passed());
    CHECK(r.orphan_count == 3);
    CHECK(r.orphans.size() == 3);
  }
  SUBCASE("repeated round is a duplicate") {
    rounds.push_back(rounds.front());
    const auto r = check_completeness(s, d, rounds);
    CHECK_FALSE(r.passed());
    CHECK(r.duplicate_count == 3);
  }
  SUBCASE("wrong file is an invalid entry") {
    rounds[4].entries[0].packet.file = (rounds[4].entries[0].packet.file + 1) % 5;
    const auto r = check_completeness(s, d, rounds);
    CHECK(r.invalid_entries == 1);
    CHECK(r.orphan_count == 1);
  }
  SUBCASE("swapped receivers break the round") {
    std::swap(rounds[0].entries[0].receiver, rounds[0].entries[1].receiver);
    const auto r = check_completeness(s, d, rounds);
    CHECK(r.rounds_valid == r.rounds_total - 1);
    CHECK_FALSE(r.round_diagnostics.empty());
  }
  SUBCASE("rate and DoF reject a failed report") {
    rounds.pop_back();
    const auto r = check_completeness(s, d, rounds);
    CHECK_THROWS_AS(compute_rate_dof(r, s.params().F, 5, s.params().receiver_fraction(), 3), Error);
  }
}

TEST_CASE("round validity diagnostics") {
  const SubsetScheme s(make_subset_params(2, 1, 4, 1, 4));
  const auto rounds = s.enumerate_rounds({0, 1, 2, 3});
  auto r = rounds[0];
  CHECK(check_round_valid(r, s.caching(), 1).valid);
  r.entries.clear();
  CHECK_FALSE(check_round_valid(r, s.caching(), 1).valid);
  r = rounds[0];
  r.transmitters = {1 - r.transmitters[0]};
  const auto check = check_round_valid(r, s.caching(), 1);
  CHECK_FALSE(check.valid);
  CHECK(check.diagnostics.front().find("not in the round") != std::string::npos);
}

TEST_CASE("rate and DoF from a passing report") {
  const SubsetScheme s(make_subset_params(2, 1, 4, 1, 4));
  const auto r = verify_schedule(s, {3, 3, 0, 1});
  const auto rd = compute_rate_dof(r, s.params().F, 4, s.params().receiver_fraction(), 2);
  CHECK(rd.rate == Rational(3, 2));
  CHECK(rd.dof == 2);
  CHECK_THROWS_AS(compute_rate_dof(r, s.params().F, 4, s.params().receiver_fraction(), 3), Error);
}
