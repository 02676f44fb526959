// Command-line front end: params | build | verify | simulate | table1 | bounds.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cachedof/channel.hpp"
#include "cachedof/error.hpp"
#include "cachedof/export.hpp"
#include "cachedof/scheme_pg.hpp"
#include "cachedof/scheme_subset.hpp"
#include "cachedof/verify.hpp"

using namespace cachedof;

namespace {

constexpr int kExitParams = 2;
constexpr int kExitVerify = 3;
constexpr int kExitSimulation = 4;
constexpr std::uint64_t kStreamingThreshold = 100000;

struct SchemeArgs {
  CLI::App* subset = nullptr;
  CLI::App* pg = nullptr;
  std::uint32_t KT = 0, tT = 0, KR = 0, tR = 0;
  std::uint32_t q = 0, kt = 0, lt = 0, mt = 0, kr = 0, lr = 0, mr = 0;
  std::uint32_t N = 0;  // 0: one file per receiver

  void attach(CLI::App* parent) {
    subset = parent->add_subcommand("subset", "subset-indexed scheme");
    subset->add_option("--KT", KT, "transmitters")->required();
    subset->add_option("--tT", tT, "transmitters caching each subfile")->required();
    subset->add_option("--KR", KR, "receivers")->required();
    subset->add_option("--tR", tR, "receivers caching each subfile")->required();
    subset->add_option("--N", N, "files (default K_R)");
    pg = parent->add_subcommand("pg", "projective-geometry scheme");
    pg->add_option("--q", q, "field order")->required();
    pg->add_option("--kt", kt)->required();
    pg->add_option("--lt", lt)->required();
    pg->add_option("--mt", mt)->required();
    pg->add_option("--kr", kr)->required();
    pg->add_option("--lr", lr)->required();
    pg->add_option("--mr", mr)->required();
    pg->add_option("--N", N, "files (default K_R)");
    subset->fallthrough();
    pg->fallthrough();
    parent->require_subcommand(1);
  }

  bool is_subset() const { return subset->parsed(); }

  SubsetParams subset_params() const { return make_subset_params(KT, tT, KR, tR, N == 0 ? KR : N); }

  PGParams pg_params() const {
    if (N != 0) return build_pg_params(q, kt, lt, mt, kr, lr, mr, N);
    const auto probe = build_pg_params(q, kt, lt, mt, kr, lr, mr, 1);
    return build_pg_params(q, kt, lt, mt, kr, lr, mr, static_cast<std::uint32_t>(to_u64(probe.K_R)));
  }

  std::unique_ptr<DeliveryScheme> make() const {
    if (is_subset()) return std::make_unique<SubsetScheme>(subset_params());
    return std::make_unique<PGScheme>(pg_params());
  }
};

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw Error(ErrorCode::kInvalidArgs, "bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgs, "empty list");
  return out;
}

Demands make_demands(const DeliveryScheme& scheme, const std::string& spec, std::uint64_t seed) {
  const auto K_R = scheme.caching().num_receivers();
  Demands d;
  if (spec == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, scheme.num_files() - 1);
    for (std::uint32_t r = 0; r < K_R; ++r) d.push_back(pick(rng));
  } else if (spec == "distinct") {
    for (std::uint32_t r = 0; r < K_R; ++r) d.push_back(r % scheme.num_files());
  } else {
    for (double v : parse_doubles(spec)) {
      if (v < 1 || v != std::floor(v)) throw Error(ErrorCode::kInvalidDemand, "demands are 1-based file numbers");
      d.push_back(static_cast<std::uint32_t>(v) - 1);
    }
  }
  scheme.check_demands(d);
  return d;
}

void emit(const Json& doc, const std::string& out_path) {
  const auto text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kInvalidArgs, "cannot write " + out_path);
  os << text;
}

int run_params(const SchemeArgs& args) {
  if (args.is_subset()) {
    const auto p = args.subset_params();
    std::cout << "scheme  subset\nK_T     " << p.K_T << "\nK_R     " << p.K_R << "\nt_T     " << p.t_T << "\nt_R     "
              << p.t_R << "\nM_T/N   " << p.transmitter_fraction() << "\nM_R/N   " << p.receiver_fraction()
              << "\nF_C     " << p.F_C << "\nF_P     " << p.F_P << "\nF       " << p.F << "\nDoF     " << p.dof
              << "\nrounds  " << p.rounds << "\n";
    return 0;
  }
  const auto p = args.pg_params();
  std::cout << "scheme  pg\nK_T     " << p.K_T << "\nK_R     " << p.K_R << "\nt_T     " << p.t_T << "\nt_R     "
            << p.t_R << "\nM_T/N   " << p.transmitter_fraction() << "\nM_R/N   " << p.receiver_fraction()
            << "\nF_C     " << p.F_T * p.F_R << "\nF_P     " << p.F_P << "\nF       " << p.F << "\nDoF     " << p.dof
            << "\n";
  return 0;
}

int run_replay(const std::string& path, const std::string& out_path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kInvalidArgs, "cannot read " + path);
  Json doc;
  try {
    doc = Json::parse(is);
  } catch (const Json::exception& e) {
    std::cerr << "Format: " << e.what() << "\n";
    return kExitVerify;
  }
  ReplayResult replay;
  try {
    replay = replay_export(doc);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kFormat && e.code() != ErrorCode::kInvalidDemand) throw;
    std::cerr << e.what() << "\n";
    return kExitVerify;
  }
  Json out;
  out["format_version"] = kFormatVersion;
  out["source"] = path;
  out["stored_report_matches"] = replay.report_matches;
  out["report"] = report_to_json(replay.report);
  emit(out, out_path);
  return replay.report.passed() && replay.report_matches ? 0 : kExitVerify;
}

int run_build(const SchemeArgs& args, const std::string& demand_spec, std::uint64_t seed, const std::string& out_path,
              bool materialize, bool stream) {
  const auto scheme = args.make();
  const auto demands = make_demands(*scheme, demand_spec, seed);
  const bool keep = materialize || (!stream && scheme->round_count() <= kStreamingThreshold);
  VerificationReport report;
  std::vector<Round> rounds;
  CompletenessChecker checker(*scheme, demands);
  scheme->for_each_round(demands, [&](const Round& r) {
    checker.add(r);
    if (keep) rounds.push_back(r);
  });
  report = checker.finish();
  emit(export_document(*scheme, demands, report, keep ? &rounds : nullptr), out_path);
  if (!out_path.empty()) {
    std::cerr << scheme->name() << ": " << report.rounds_total << " rounds, " << report.packets_served << "/"
              << report.packets_missing << " packets, " << (report.passed() ? "verified" : "FAILED") << "\n";
  }
  return report.passed() ? 0 : kExitVerify;
}

struct SimulateOptions {
  std::uint32_t seeds = 1000;
  std::string snr_db = "0,10,20,30";
  std::uint32_t draws = 1000;
  bool noise_free_only = false;
  std::uint32_t b = 64;
  std::uint32_t threads = 1;
  std::uint32_t rounds = 64;
  std::string demands = "random";
};

struct TrialResult {
  double residual = 0.0;
  double condition = 0.0;
  std::uint32_t active = 0;
  double noise_free_mse = 0.0;
  bool ill_conditioned = false;
};

template <typename Fn>
void parallel_for(std::uint64_t count, std::uint32_t threads, Fn fn) {
  threads = std::max<std::uint32_t>(1, std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1)));
  std::vector<std::thread> pool;
  for (std::uint32_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t i = w; i < count; i += threads) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

int run_simulate(const SchemeArgs& args, const SimulateOptions& opt, std::uint64_t seed, const std::string& out_path) {
  if (opt.seeds == 0 || opt.rounds == 0 || opt.b == 0) throw Error(ErrorCode::kInvalidArgs, "counts must be positive");
  const auto scheme = args.make();
  const auto demands = make_demands(*scheme, opt.demands, seed);
  const auto grid = parse_doubles(opt.snr_db);

  // Evenly spaced sample of the schedule.
  const std::uint64_t total = scheme->round_count();
  const std::uint64_t stride = std::max<std::uint64_t>(1, total / opt.rounds);
  std::vector<Round> sample;
  std::uint64_t index = 0;
  scheme->for_each_round(demands, [&](const Round& r) {
    if (index % stride == 0 && sample.size() < opt.rounds) sample.push_back(r);
    ++index;
  });

  const auto K_T = scheme->caching().num_transmitters();
  auto setup = [&](std::uint64_t trial) {
    const auto& round = sample[trial % sample.size()];
    auto channel = sample_channel(static_cast<std::uint32_t>(round.entries.size()), K_T, derive_seed(seed, trial, 0));
    return std::make_pair(&round, channel);
  };

  std::vector<TrialResult> trials(opt.seeds);
  parallel_for(opt.seeds, opt.threads, [&](std::uint64_t s) {
    auto [round, channel] = setup(s);
    TrialResult& t = trials[s];
    try {
      const auto plan = solve_beamforming(*round, scheme->caching(), scheme->t_T(), channel);
      t.residual = residual_interference(*round, scheme->caching(), plan, channel);
      t.condition = plan.worst_condition;
      t.active = active_transmitters(plan);
      const auto payloads =
          random_payloads(static_cast<std::uint32_t>(round->entries.size()), opt.b, derive_seed(seed, s, 1));
      t.noise_free_mse = simulate_round(*round, scheme->caching(), plan, channel, payloads, 1.0, std::nullopt).mean_mse;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kIllConditioned) throw;
      t.ill_conditioned = true;
    }
  });

  TrialResult worst;
  std::uint64_t ill = 0;
  for (const auto& t : trials) {
    if (t.ill_conditioned) {
      ++ill;
      continue;
    }
    worst.residual = std::max(worst.residual, t.residual);
    worst.condition = std::max(worst.condition, t.condition);
    worst.active = std::max(worst.active, t.active);
    worst.noise_free_mse = std::max(worst.noise_free_mse, t.noise_free_mse);
  }

  Json curve = Json::array();
  bool decreasing = true;
  if (!opt.noise_free_only) {
    double previous = INFINITY;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::vector<double> mse(opt.draws, 0.0);
      std::vector<char> skipped(opt.draws, 0);
      parallel_for(opt.draws, opt.threads, [&](std::uint64_t d) {
        auto [round, channel] = setup(d % opt.seeds);
        try {
          const auto plan = solve_beamforming(*round, scheme->caching(), scheme->t_T(), channel);
          const auto payloads =
              random_payloads(static_cast<std::uint32_t>(round->entries.size()), opt.b, derive_seed(seed, d, 1));
          mse[d] = simulate_round(*round, scheme->caching(), plan, channel, payloads, db_to_linear(grid[g]),
                                  derive_seed(seed, d, 2 + g))
                       .mean_mse;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kIllConditioned) throw;
          skipped[d] = 1;
        }
      });
      double sum = 0.0;
      std::uint64_t used = 0;
      for (std::uint64_t d = 0; d < opt.draws; ++d) {
        if (!skipped[d]) {
          sum += mse[d];
          ++used;
        }
      }
      const double mean = used ? sum / static_cast<double>(used) : INFINITY;
      if (!(mean < previous)) decreasing = false;
      previous = mean;
      Json point;
      point["snr_db"] = grid[g];
      point["mean_mse"] = mean;
      point["draws"] = used;
      curve.push_back(point);
    }
  }

  const bool ok = ill == 0 && worst.residual < kZeroForcingTolerance && worst.active <= scheme->t_T();
  Json out;
  out["format_version"] = kFormatVersion;
  out["scheme"] = scheme->name();
  out["params"] = params_to_json(*scheme);
  out["seed"] = seed;
  out["channel_seeds"] = opt.seeds;
  out["sampled_rounds"] = sample.size();
  out["payload_length"] = opt.b;
  out["max_residual"] = worst.residual;
  out["residual_tolerance"] = kZeroForcingTolerance;
  out["worst_condition"] = worst.condition;
  out["max_active_transmitters"] = worst.active;
  out["ill_conditioned"] = ill;
  out["noise_free_max_mse"] = worst.noise_free_mse;
  out["mse_curve"] = curve;
  if (!opt.noise_free_only) out["mse_strictly_decreasing"] = decreasing;
  out["passed"] = ok;
  emit(out, out_path);
  return ok ? 0 : kExitSimulation;
}

int run_table1(bool json) {
  const auto rows = table1_report();
  if (!json) {
    std::cout << render_table1(rows);
    return 0;
  }
  Json out;
  out["format_version"] = kFormatVersion;
  Json list = Json::array();
  for (const auto& r : rows) {
    const auto& m = r.manifest;
    Json row;
    row["K_T"] = m.K_T;
    row["K_R"] = m.K_R;
    row["M_T/N"] = m.tx_fraction;
    row["M_R/N"] = m.rx_fraction;
    row["pg_params"] = {{"q", m.q}, {"k_t", m.k_t}, {"l_t", m.l_t}, {"m_t", m.m_t},
                        {"k_r", m.k_r}, {"l_r", m.l_r}, {"m_r", m.m_r}};
    row["derivation"] = m.derivation;
    row["dof_subset"] = r.subset.dof;
    row["dof_pg"] = r.pg.dof.str();
    row["F_reference_printed"] = m.reference_F ? Json(format_printed(*m.reference_F)) : Json(nullptr);
    row["F_subset"] = r.subset.F.str();
    row["F_subset_printed"] = format_printed(m.printed_F_subset);
    row["F_pg"] = r.pg.F.str();
    row["F_pg_printed"] = format_printed(m.printed_F_pg);
    row["dof_subset_match"] = r.dof_subset_match;
    row["dof_pg_match"] = r.dof_pg_match;
    row["F_subset_match"] = r.F_subset_match;
    row["F_pg_match"] = r.F_pg_match;
    row["flags"] = r.flags;
    list.push_back(row);
  }
  out["rows"] = list;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_bounds(std::uint64_t amax, const std::string& qset) {
  std::vector<std::uint64_t> qs;
  for (double v : parse_doubles(qset)) {
    if (v < 2 || v != std::floor(v)) throw Error(ErrorCode::kInvalidArgs, "q must be an integer >= 2");
    qs.push_back(static_cast<std::uint64_t>(v));
    Field::make(static_cast<std::uint32_t>(v));  // rejects non prime powers
  }
  const auto sweep = sweep_qbinom_bounds(amax, qs);
  Json out;
  out["format_version"] = kFormatVersion;
  out["amax"] = amax;
  out["qset"] = qs;
  out["checked"] = sweep.checked;
  out["failures"] = sweep.failures;
  out["passed"] = sweep.failures.empty();
  std::cout << out.dump(2) << "\n";
  return sweep.failures.empty() ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cache-aided interference management schemes"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "global seed")->envname("CACHEDOF_SEED")->capture_default_str();
  };

  SchemeArgs params_args, build_args, sim_args;
  auto* params = app.add_subcommand("params", "print the closed-form parameters");
  params_args.attach(params);

  auto* build = app.add_subcommand("build", "build, verify and export a schedule");
  std::string demand_spec = "random", out_path, verify_only;
  bool materialize = false, stream = false;
  build->add_option("--demands", demand_spec, "comma-separated 1-based files, 'random' or 'distinct'")
      ->capture_default_str();
  build->add_option("--out", out_path, "export file (default stdout)");
  build->add_flag("--materialize", materialize, "write every round into the export");
  build->add_flag("--stream", stream, "verify as rounds are generated, without storing them");
  build->add_option("--verify-only", verify_only, "replay an existing export instead of building");
  add_seed(build);
  build_args.attach(build);
  build->require_subcommand(0, 1);

  auto* verify = app.add_subcommand("verify", "replay and verify an export");
  std::string verify_path, verify_out;
  verify->add_option("file", verify_path)->required();
  verify->add_option("--out", verify_out);

  auto* simulate = app.add_subcommand("simulate", "zero-forcing channel simulation");
  SimulateOptions sim;
  std::string sim_out;
  simulate->add_option("--seeds", sim.seeds, "channel realizations")->capture_default_str();
  simulate->add_option("--snr-db", sim.snr_db, "SNR grid in dB")->capture_default_str();
  simulate->add_option("--draws", sim.draws, "noise draws per SNR point")->capture_default_str();
  simulate->add_flag("--noise-free", sim.noise_free_only, "skip the SNR sweep");
  simulate->add_option("--b", sim.b, "payload length")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "worker threads")->capture_default_str();
  simulate->add_option("--rounds", sim.rounds, "rounds sampled from the schedule")->capture_default_str();
  simulate->add_option("--demands", sim.demands)->capture_default_str();
  simulate->add_option("--out", sim_out);
  add_seed(simulate);
  sim_args.attach(simulate);

  auto* table1 = app.add_subcommand("table1", "regenerate the comparison table");
  bool table_json = false;
  table1->add_flag("--json", table_json);

  auto* bounds = app.add_subcommand("bounds", "sweep the q-binomial bounds");
  std::uint64_t amax = 12;
  std::string qset = "2,3,4,5";
  bounds->add_option("--amax", amax)->capture_default_str();
  bounds->add_option("--qset", qset)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParams;
  }

  try {
    if (params->parsed()) return run_params(params_args);
    if (build->parsed()) {
      if (!verify_only.empty()) return run_replay(verify_only, out_path);
      if (!build_args.subset->parsed() && !build_args.pg->parsed()) {
        std::cerr << "build needs a scheme subcommand or --verify-only\n";
        return kExitParams;
      }
      return run_build(build_args, demand_spec, seed, out_path, materialize, stream);
    }
    if (verify->parsed()) return run_replay(verify_path, verify_out);
    if (simulate->parsed()) return run_simulate(sim_args, sim, seed, sim_out);
    if (table1->parsed()) return run_table1(table_json);
    if (bounds->parsed()) return run_bounds(amax, qset);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    if (e.code() == ErrorCode::kIllConditioned) return kExitSimulation;
    if (e.code() == ErrorCode::kInconsistent || e.code() == ErrorCode::kPreconditionFailed) return kExitVerify;
    return kExitParams;
  } catch (const std::invalid_argument& e) {
    std::cerr << "InvalidArgs: " << e.what() << "\n";
    return kExitParams;
  }
  return 0;
}
