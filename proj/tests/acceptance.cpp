// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fail.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cachedof/channel.hpp"
#include "cachedof/error.hpp"
#include "cachedof/projgeom.hpp"
#include "cachedof/scheme_pg.hpp"
#include "cachedof/scheme_subset.hpp"
#include "cachedof/verify.hpp"
#include "oracle.hpp"

using namespace cachedof;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

Demands all_files(std::uint32_t K_R, std::uint32_t N) {
  Demands d(K_R);
  for (std::uint32_t r = 0; r < K_R; ++r) d[r] = r % N;
  return d;
}

Demands random_demands(std::uint32_t K_R, std::uint32_t N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, N - 1);
  Demands d(K_R);
  for (auto& x : d) x = pick(rng);
  return d;
}

std::vector<Round> sample_rounds(const DeliveryScheme& s, const Demands& d, std::uint64_t want) {
  const auto stride = std::max<std::uint64_t>(1, s.round_count() / want);
  std::vector<Round> out;
  std::uint64_t i = 0;
  s.for_each_round(d, [&](const Round& r) {
    if (i++ % stride == 0 && out.size() < want) out.push_back(r);
  });
  return out;
}

const SubsetScheme& subset_desk() {
  static const SubsetScheme s(make_subset_params(2, 1, 4, 1, 4));
  return s;
}

const PGScheme& pg_desk() {
  static const PGScheme s(build_pg_params(2, 2, 1, 1, 5, 1, 1, 31));
  return s;
}

// 1: comparison table.
void table1(Outcome& o) {
  const auto rows = table1_report();
  o.require(rows.size() == 6, "expected 6 rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto n = std::to_string(i + 1);
    o.require(r.dof_subset_match, "row " + n + " subset DoF " + std::to_string(r.subset.dof));
    o.require(r.dof_pg_match, "row " + n + " pg DoF " + r.pg.dof.str());
  }
  o.require(rows[0].pg.F == 1874880, "row 1 pg F " + rows[0].pg.F.str());
  for (std::size_t i : {0U, 3U, 4U, 5U}) {
    const auto& r = rows[i];
    o.require(r.F_pg_match, "row " + std::to_string(i + 1) + " pg F " + r.pg.F.str() + " rounds to " +
                                format_printed(round_one_significant(r.pg.F)) + ", printed " +
                                format_printed(r.manifest.printed_F_pg));
  }
  o.require(!rows[0].F_subset_match && !rows[0].flags.empty(), "row 1 subset F not flagged");
  o.require(!rows[1].F_pg_match && !rows[1].flags.empty(), "row 2 pg F not flagged");
  if (o.pass) o.detail << "all DoF exact, pg F matches rows 1,4,5,6; flagged rows 1 (subset) and 2 (pg)";
}

// 2: counting formulas against the closure oracle.
void counting(Outcome& o) {
  std::uint64_t checks = 0;
  for (std::uint32_t p : {2U, 3U}) {
    for (std::uint32_t k = 1; k <= 5; ++k) {
      const oracle::Space sp{p, k};
      for (std::uint32_t d = 0; d <= k; ++d) {
        const auto n = sp.subspaces(d).size();
        o.require(gaussian_binomial(k, d, p) == BigInt(n), "gaussian binomial");
        if (d == 1) o.require(theta(k, p) == BigInt(n), "theta");
        checks += d == 1 ? 2 : 1;
      }
      const auto pts = sp.points();
      std::vector<oracle::Set> point_sets;
      for (auto v : pts) point_sets.push_back(sp.span({v}));
      for (std::uint32_t a = 0; a <= k; ++a) {
        std::vector<std::uint32_t> gens;
        for (std::uint32_t i = 0; i < a; ++i) gens.push_back(sp.unit(i));
        const auto A = sp.span(gens);
        for (std::uint32_t b = (a == 0 ? 1 : 0); a + b <= k; ++b) {
          const auto formula = count_li_point_sets(k, a, b, p);
          if (formula > 2'000'000) continue;
          o.require(formula == BigInt(oracle::count_direct_sets(sp, A, point_sets, b)),
                    "independent point sets q=" + std::to_string(p) + " k=" + std::to_string(k));
          ++checks;
        }
        if (a >= 1) {
          gens.pop_back();
          const auto hyper = sp.span(gens);
          std::uint64_t count = 0;
          for (const auto& c : point_sets) count += oracle::sum(sp, hyper, c) == A;
          o.require(count_complements(a, p) == BigInt(count), "complements");
          ++checks;
        }
      }
      // Cache-set families: (m+1)-sets of l-dim superspaces of a fixed
      // (l-1)-dim space whose sum is direct.
      for (std::uint32_t l = 1; l <= k; ++l) {
        std::vector<std::uint32_t> gens;
        for (std::uint32_t i = 0; i + 1 < l; ++i) gens.push_back(sp.unit(i));
        const auto L = sp.span(gens);
        const auto members = sp.superspaces(L, l);
        for (std::uint32_t m = 0; m + l <= k; ++m) {
          const auto tx = build_pg_params(p, k, l, m, 1 + static_cast<std::uint32_t>(to_u64(theta(m + 1, p))), 1, 0, 1);
          if (tx.F_T > 2'000'000) continue;
          const auto brute = oracle::count_direct_sets(sp, L, members, m + 1);
          o.require(tx.F_T == BigInt(brute), "|X_t| formula");
          const auto fixed = standard_subspace(Field::make(p), k, l - 1);
          const auto family = enumerate_superspaces(fixed, l);
          o.require(independent_member_sets(fixed, family.members, m + 1).size() == brute, "|X_t| enumeration");
          checks += 2;
          if (k >= m + l + 1) {
            const auto rx = build_pg_params(p, 1, 1, 0, k, l, m, 1);
            o.require(rx.F_R == BigInt(brute), "|X_r| formula");
            ++checks;
          }
        }
      }
    }
  }
  // Packets per subfile: receiver side in dimension <= 5.
  for (std::uint32_t p : {2U, 3U}) {
    for (std::uint32_t m_t : {0U, 1U}) {
      const auto t_T = static_cast<std::uint32_t>(to_u64(theta(m_t + 1, p)));
      for (std::uint32_t k = 1; k <= 5; ++k) {
        for (std::uint32_t l = 1; l <= k; ++l) {
          for (std::uint32_t m = 0; m + l + t_T <= k; ++m) {
            const auto params = build_pg_params(p, m_t + 1, 1, m_t, k, l, m, 1);
            const oracle::Space sp{p, k};
            std::vector<std::uint32_t> gens;
            for (std::uint32_t i = 0; i + 1 < l; ++i) gens.push_back(sp.unit(i));
            const auto L = sp.span(gens);
            const auto members = sp.superspaces(L, l);
            // Greedy V and X_r: the first m + 2 members in direct sum.
            oracle::Set base = L;
            std::vector<std::uint32_t> used;
            for (std::uint32_t i = 0; i < members.size() && used.size() < m + 2; ++i) {
              const auto next = oracle::sum(sp, base, members[i]);
              if (next.size() == base.size() * p) {
                base = next;
                used.push_back(i);
              }
            }
            std::vector<oracle::Set> rest;
            for (std::uint32_t i = 0; i < members.size(); ++i) {
              if (std::find(used.begin(), used.end(), i) == used.end()) rest.push_back(members[i]);
            }
            const auto brute = oracle::count_direct_sets(sp, base, rest, t_T - 1);
            o.require(params.F_P == BigInt(brute), "F_P q=" + std::to_string(p) + " k_r=" + std::to_string(k));
            ++checks;
          }
        }
      }
    }
  }
  if (o.pass) o.detail << checks << " exact comparisons over q in {2,3}, dimension <= 5";
}

// 3: subset scheme, every demand vector.
void subset_exhaustive(Outcome& o) {
  const auto& s = subset_desk();
  std::uint64_t vectors = 0;
  Demands d(4, 0);
  while (true) {
    const auto rounds = s.enumerate_rounds(d);
    bool rounds_ok = rounds.size() == 12;
    for (const auto& r : rounds) rounds_ok = rounds_ok && check_round_valid(r, s.caching(), 1).valid;
    const auto report = check_completeness(s, d, rounds);
    o.require(rounds_ok && report.passed() && report.packets_missing == 24 && report.packets_served == 24,
              "demand vector failed");
    if (report.passed()) {
      try {
        const auto rd = compute_rate_dof(report, s.params().F, 4, s.params().receiver_fraction(), 2);
        o.require(rd.dof == 2, "DoF");
      } catch (const Error& e) {
        o.require(false, e.what());
      }
    }
    ++vectors;
    std::uint32_t i = 0;
    while (i < 4 && ++d[i] == 4) d[i++] = 0;
    if (i == 4) break;
  }
  o.require(vectors == 256, "expected 256 demand vectors");
  if (o.pass) o.detail << vectors << " demand vectors, 12 valid rounds each, 24/24 packets once, DoF 2";
}

// 4: projective scheme at desk scale, streaming.
void pg_desk_scale(Outcome& o) {
  const auto& s = pg_desk();
  const std::uint64_t expected = s.tx_cache_sets().size() * s.round_sets().size() * binomial(4, 2);
  o.require(expected == 1499904, "|X_t||Z|C(4,2) = " + std::to_string(expected));
  for (const auto& [label, d] : {std::pair{std::string("explicit"), all_files(31, 31)},
                                 std::pair{std::string("random seed 7"), random_demands(31, 31, 7)}}) {
    const auto r = verify_schedule(s, d);
    o.require(r.rounds_total == 1499904, label + ": " + std::to_string(r.rounds_total) + " rounds");
    o.require(r.rounds_valid == r.rounds_total, label + ": invalid rounds");
    o.require(r.passed(), label + ": coverage failed");
    if (o.pass) o.detail << label << " " << r.rounds_total << " rounds, " << r.packets_served << " packets; ";
  }
}

struct ZfStats {
  double residual = 0.0;
  std::uint32_t active = 0;
  double mse = 0.0;
  std::uint64_t failures = 0;
};

ZfStats zero_forcing_trials(const DeliveryScheme& s, const Demands& d, std::uint64_t trials, std::uint64_t seed) {
  const auto rounds = sample_rounds(s, d, 1000);
  ZfStats out;
  for (std::uint64_t k = 0; k < trials; ++k) {
    const auto& round = rounds[k % rounds.size()];
    const auto n = static_cast<std::uint32_t>(round.entries.size());
    const auto ch = sample_channel(n, s.caching().num_transmitters(), derive_seed(seed, k, 0));
    try {
      const auto plan = solve_beamforming(round, s.caching(), s.t_T(), ch);
      out.residual = std::max(out.residual, residual_interference(round, s.caching(), plan, ch));
      out.active = std::max(out.active, active_transmitters(plan));
      const auto w = random_payloads(n, 64, derive_seed(seed, k, 1));
      out.mse = std::max(out.mse, simulate_round(round, s.caching(), plan, ch, w, 1.0, std::nullopt).mean_mse);
    } catch (const Error&) {
      ++out.failures;
    }
  }
  return out;
}

// 5: zero-forcing feasibility.
void zero_forcing(Outcome& o) {
  const std::pair<const DeliveryScheme*, Demands> cases[] = {{&subset_desk(), all_files(4, 4)},
                                                             {&pg_desk(), random_demands(31, 31, 7)}};
  for (const auto& [s, d] : cases) {
    const auto st = zero_forcing_trials(*s, d, 1000, 2024);
    o.require(st.failures == 0, s->name() + ": " + std::to_string(st.failures) + " solves failed");
    o.require(st.residual < kZeroForcingTolerance, s->name() + ": residual " + std::to_string(st.residual));
    o.require(st.active <= s->t_T(), s->name() + ": too many active transmitters");
    o.require(st.mse < 1e-18, s->name() + ": noise-free MSE " + std::to_string(st.mse));
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s max residual %.1e, max active %u, noise-free MSE %.1e; ", s->name().c_str(),
                  st.residual, st.active, st.mse);
    o.detail << buf;
  }
}

// 6: MSE over the SNR grid.
void snr_sweep(Outcome& o) {
  const double grid[] = {0.0, 10.0, 20.0, 30.0};
  const std::pair<const DeliveryScheme*, Demands> cases[] = {{&subset_desk(), all_files(4, 4)},
                                                             {&pg_desk(), random_demands(31, 31, 7)}};
  for (const auto& [s, d] : cases) {
    const auto rounds = sample_rounds(*s, d, 100);
    double previous = INFINITY;
    o.detail << s->name() << " MSE";
    for (std::size_t g = 0; g < 4; ++g) {
      double sum = 0.0;
      const std::uint64_t draws = 1000;
      for (std::uint64_t k = 0; k < draws; ++k) {
        const auto& round = rounds[k % rounds.size()];
        const auto n = static_cast<std::uint32_t>(round.entries.size());
        const auto ch = sample_channel(n, s->caching().num_transmitters(), derive_seed(77, k, 0));
        const auto plan = solve_beamforming(round, s->caching(), s->t_T(), ch);
        const auto w = random_payloads(n, 64, derive_seed(77, k, 1));
        sum += simulate_round(round, s->caching(), plan, ch, w, db_to_linear(grid[g]), derive_seed(77, k, 2 + g))
                   .mean_mse;
      }
      const double mean = sum / static_cast<double>(draws);
      o.require(mean < previous, s->name() + ": MSE not decreasing at " + std::to_string(grid[g]) + " dB");
      previous = mean;
      char buf[32];
      std::snprintf(buf, sizeof buf, " %.3g", mean);
      o.detail << buf;
    }
    o.detail << "; ";
  }
}

// 7: q-binomial bounds and fraction bounds.
void bounds(Outcome& o) {
  const std::vector<std::uint64_t> qs{2, 3, 4, 5};
  const auto sweep = sweep_qbinom_bounds(12, qs);
  for (const auto& f : sweep.failures) o.require(false, f);
  std::uint64_t instances = 0;
  for (std::uint32_t q : {2U, 3U, 4U, 5U}) {
    for (std::uint32_t k_t = 1; k_t <= 6; ++k_t) {
      for (std::uint32_t l_t = 1; l_t <= 3; ++l_t) {
        for (std::uint32_t m_t = 0; m_t <= 2; ++m_t) {
          for (std::uint32_t k_r = 2; k_r <= 10; ++k_r) {
            for (std::uint32_t l_r = 1; l_r <= 3; ++l_r) {
              for (std::uint32_t m_r = 0; m_r <= 3; ++m_r) {
                PGParams p;
                try {
                  p = build_pg_params(q, k_t, l_t, m_t, k_r, l_r, m_r, 1);
                } catch (const Error&) {
                  continue;
                }
                ++instances;
                o.require(check_asymptotic_fractions(p), "fraction bound q=" + std::to_string(q));
              }
            }
          }
        }
      }
    }
  }
  for (const auto& m : table1_manifest()) {
    ++instances;
    o.require(check_asymptotic_fractions(build_pg_params(m.q, m.k_t, m.l_t, m.m_t, m.k_r, m.l_r, m.m_r, 1)),
              "fraction bound on a table instance");
  }
  o.detail << sweep.checked << " (a,b,f,q) cases, " << sweep.failures.size() << " failures; fraction bounds on "
           << instances << " instances";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"comparison table reproduction", table1},
      {"counting formulas equal brute-force enumeration", counting},
      {"subset scheme exhaustive correctness", subset_exhaustive},
      {"projective scheme desk-scale correctness", pg_desk_scale},
      {"zero-forcing feasibility", zero_forcing},
      {"MSE decreases over the SNR grid", snr_sweep},
      {"q-binomial and fraction bounds", bounds},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto detail = o.detail.str();
    while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
    std::printf("%s %d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", index, name, secs, detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
