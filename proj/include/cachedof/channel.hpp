#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cachedof/schedule.hpp"

namespace cachedof {

using CMatrix = Eigen::MatrixXcd;

/// Block-constant Rayleigh channel for one round: H(r, t) is the gain from
/// transmitter t to the r-th receiver of the round, i.i.d. CN(0, 1).
struct ChannelRealization {
  CMatrix H;
  std::uint64_t seed = 0;
};

ChannelRealization sample_channel(std::uint32_t receivers, std::uint32_t transmitters, std::uint64_t seed);

/// Column i is the beamforming vector of the i-th packet of the round; rows of
/// transmitters not caching that packet are zero.
struct BeamformingPlan {
  CMatrix M;
  double worst_condition = 1.0;
};

inline constexpr double kZeroForcingTolerance = 1e-9;
inline constexpr double kConditionLimit = 1e12;

/// Solves, per packet, the (e+1) x t_T system that puts unit gain at its
/// receiver and zero gain at the e round receivers that cannot cancel it,
/// taking the minimum-norm solution when e + 1 < t_T.
/// Throws PreconditionFailed for a round that violates the zero-forcing
/// precondition and IllConditioned when cond(H'') > 1e12.
BeamformingPlan solve_beamforming(const Round& round, const CachingMap& caching, std::uint32_t t_T,
                                  const ChannelRealization& channel);

/// max over required zeros of |C(k, i)| together with max_i |C(i, i) - 1|,
/// where C = H M.
double residual_interference(const Round& round, const CachingMap& caching, const BeamformingPlan& plan,
                             const ChannelRealization& channel);

/// Transmitters with a nonzero beamforming row.
std::uint32_t active_transmitters(const BeamformingPlan& plan);

/// n x b unit-modulus symbols with uniform random phase.
CMatrix random_payloads(std::uint32_t packets, std::uint32_t length, std::uint64_t seed);

struct RoundOutcome {
  CMatrix estimates;                  // n x b, after interference cancellation
  std::vector<double> mse;            // per served receiver
  double mean_mse = 0.0;
  double max_tx_power = 0.0;          // max_t (1/b)||x_t||^2 after scaling
  double power_scale = 0.0;
};

/// Transmits one round: x = s * M W with s chosen so the loudest transmitter
/// meets (1/b)||x_t||^2 = snr, adds CN(0,1) noise (none when `noise_seed` is
/// empty), and lets each receiver cancel the cached interference terms.
RoundOutcome simulate_round(const Round& round, const CachingMap& caching, const BeamformingPlan& plan,
                            const ChannelRealization& channel, const CMatrix& payloads, double snr,
                            std::optional<std::uint64_t> noise_seed);

double db_to_linear(double db);

/// Per-round stream seed derived from a global seed; `stream` separates the
/// channel, payload and noise draws of the same round.
std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t round_index, std::uint64_t stream);

}  // namespace cachedof
