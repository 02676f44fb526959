#include "cachedof/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cachedof/error.hpp"

namespace cachedof {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

void fill_gaussian(CMatrix& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double re = half(rng);
      const double im = half(rng);
      m(r, c) = {re, im};
    }
  }
}

// Round receivers (by entry position) that neither want nor cache packet i.
std::vector<std::uint32_t> zero_forced_rows(const Round& round, const CachingMap& caching, std::size_t i) {
  std::vector<std::uint32_t> rows;
  for (std::size_t k = 0; k < round.entries.size(); ++k) {
    if (k == i) continue;
    if (!caching.receiver_caches(round.entries[k].receiver, round.entries[i].packet)) {
      rows.push_back(static_cast<std::uint32_t>(k));
    }
  }
  return rows;
}

}  // namespace

ChannelRealization sample_channel(std::uint32_t receivers, std::uint32_t transmitters, std::uint64_t seed) {
  if (receivers < 1 || transmitters < 1) throw Error(ErrorCode::kInvalidArgs, "channel needs at least one receiver and transmitter");
  ChannelRealization out{CMatrix(receivers, transmitters), seed};
  fill_gaussian(out.H, seed);
  return out;
}

BeamformingPlan solve_beamforming(const Round& round, const CachingMap& caching, std::uint32_t t_T,
                                  const ChannelRealization& channel) {
  const auto n = round.entries.size();
  const auto K_T = caching.num_transmitters();
  if (n == 0) throw Error(ErrorCode::kPreconditionFailed, "empty round");
  if (static_cast<std::size_t>(channel.H.rows()) != n || channel.H.cols() != K_T) {
    throw Error(ErrorCode::kPreconditionFailed, "channel matrix does not match the round");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      if (round.entries[i].receiver == round.entries[k].receiver) {
        throw Error(ErrorCode::kPreconditionFailed, "round serves a receiver twice");
      }
    }
  }

  BeamformingPlan plan{CMatrix::Zero(K_T, static_cast<Eigen::Index>(n)), 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& entry = round.entries[i];
    if (caching.receiver_caches(entry.receiver, entry.packet)) {
      throw Error(ErrorCode::kPreconditionFailed, "receiver " + std::to_string(entry.receiver + 1) + " already caches its packet");
    }
    const auto holders = caching.tx_holders(entry.packet.tx_set);
    if (holders.size() != t_T) throw Error(ErrorCode::kPreconditionFailed, "packet is not cached at exactly t_T transmitters");
    for (auto t : holders) {
      if (!std::binary_search(round.transmitters.begin(), round.transmitters.end(), t)) {
        throw Error(ErrorCode::kPreconditionFailed, "packet holder does not take part in the round");
      }
    }
    const auto zeros = zero_forced_rows(round, caching, i);
    if (zeros.size() + 1 > t_T) {
      throw Error(ErrorCode::kPreconditionFailed, "packet " + std::to_string(i) + " must be zero-forced at " +
                                                      std::to_string(zeros.size()) + " receivers with only " +
                                                      std::to_string(t_T) + " transmitters");
    }

    const auto rows = static_cast<Eigen::Index>(zeros.size() + 1);
    const auto cols = static_cast<Eigen::Index>(holders.size());
    CMatrix sub(rows, cols);
    Eigen::VectorXcd target = Eigen::VectorXcd::Zero(rows);
    target(0) = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      sub(0, c) = channel.H(static_cast<Eigen::Index>(i), holders[c]);
      for (std::size_t z = 0; z < zeros.size(); ++z) {
        sub(static_cast<Eigen::Index>(z + 1), c) = channel.H(zeros[z], holders[c]);
      }
    }
    Eigen::JacobiSVD<CMatrix> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    const double condition = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
    if (!(condition <= kConditionLimit)) {
      throw Error(ErrorCode::kIllConditioned, "zero-forcing system has condition number " + std::to_string(condition));
    }
    plan.worst_condition = std::max(plan.worst_condition, condition);
    const Eigen::VectorXcd weights = svd.solve(target);
    for (Eigen::Index c = 0; c < cols; ++c) plan.M(holders[c], static_cast<Eigen::Index>(i)) = weights(c);
  }
  return plan;
}

double residual_interference(const Round& round, const CachingMap& caching, const BeamformingPlan& plan,
                             const ChannelRealization& channel) {
  const CMatrix C = channel.H * plan.M;
  double worst = 0.0;
  for (std::size_t i = 0; i < round.entries.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    worst = std::max(worst, std::abs(C(ii, ii) - 1.0));
    for (auto k : zero_forced_rows(round, caching, i)) worst = std::max(worst, std::abs(C(k, ii)));
  }
  return worst;
}

std::uint32_t active_transmitters(const BeamformingPlan& plan) {
  std::uint32_t count = 0;
  for (Eigen::Index t = 0; t < plan.M.rows(); ++t) {
    if (plan.M.row(t).cwiseAbs().maxCoeff() > 0.0) ++count;
  }
  return count;
}

CMatrix random_payloads(std::uint32_t packets, std::uint32_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  CMatrix w(packets, length);
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = std::polar(1.0, phase(rng));
  }
  return w;
}

RoundOutcome simulate_round(const Round& round, const CachingMap& caching, const BeamformingPlan& plan,
                            const ChannelRealization& channel, const CMatrix& payloads, double snr,
                            std::optional<std::uint64_t> noise_seed) {
  const auto n = static_cast<Eigen::Index>(round.entries.size());
  if (payloads.rows() != n || plan.M.cols() != n) throw Error(ErrorCode::kInvalidArgs, "payloads do not match the round");
  if (!(snr > 0.0)) throw Error(ErrorCode::kInvalidArgs, "snr must be positive");
  const auto b = static_cast<double>(payloads.cols());

  const CMatrix x = plan.M * payloads;  // K_T x b
  double peak = 0.0;
  for (Eigen::Index t = 0; t < x.rows(); ++t) peak = std::max(peak, x.row(t).squaredNorm() / b);
  const double scale = peak > 0.0 ? std::sqrt(snr / peak) : std::sqrt(snr);

  CMatrix y = scale * (channel.H * x);
  if (noise_seed) {
    CMatrix z(y.rows(), y.cols());
    fill_gaussian(z, *noise_seed);
    y += z;
  }

  const CMatrix C = channel.H * plan.M;
  RoundOutcome out;
  out.estimates.resize(n, payloads.cols());
  out.mse.resize(static_cast<std::size_t>(n));
  out.power_scale = scale;
  out.max_tx_power = peak * scale * scale;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::RowVectorXcd r = y.row(k);
    const auto receiver = round.entries[static_cast<std::size_t>(k)].receiver;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k) continue;
      if (caching.receiver_caches(receiver, round.entries[static_cast<std::size_t>(i)].packet)) {
        r -= scale * C(k, i) * payloads.row(i);
      }
    }
    out.estimates.row(k) = r / (scale * C(k, k));
    const double err = (out.estimates.row(k) - payloads.row(k)).squaredNorm() / b;
    out.mse[static_cast<std::size_t>(k)] = err;
    out.mean_mse += err / static_cast<double>(n);
  }
  return out;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t round_index, std::uint64_t stream) {
  return splitmix64(splitmix64(global_seed ^ round_index) + stream);
}

}  // namespace cachedof
