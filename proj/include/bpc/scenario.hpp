#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "bpc/allocation.hpp"
#include "bpc/rate.hpp"
#include "bpc/rng.hpp"

namespace bpc {

enum class FadingLaw { kRayleigh, kNone };

/// One circular cell: users drop uniformly on a disk around the receiver,
/// the user count is Poisson in the disk area, and the gain of a user at
/// distance d is fade / (1 + d^alpha). The bounded path loss keeps gains
/// finite for users arbitrarily close to the receiver.
struct ScenarioConfig {
  double radius = 5.0;
  double density = 1.0;            // users per unit area
  double pathloss_exponent = 4.0;  // must exceed 2
  FadingLaw fading = FadingLaw::kRayleigh;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  int min_users = 1;  // redraw cells with fewer users than this
  int fixed_n = 0;    // > 0 pins the user count instead of drawing it
};

inline void validate(const ScenarioConfig& cfg) {
  detail::require(std::isfinite(cfg.radius) && cfg.radius > 0.0, "radius must be > 0");
  detail::require(std::isfinite(cfg.density) && cfg.density > 0.0, "density must be > 0");
  detail::require(std::isfinite(cfg.pathloss_exponent) && cfg.pathloss_exponent > 2.0,
                  "path loss exponent must exceed 2");
  detail::require(std::isfinite(cfg.snr_db), "snr_db must be finite");
  detail::require(cfg.min_users >= 1, "min_users must be >= 1");
  detail::require(cfg.fixed_n >= 0, "fixed_n must be >= 0");
  if (cfg.fixed_n > 0)
    detail::require(cfg.fixed_n >= cfg.min_users, "fixed_n must respect min_users");
}

inline double mean_users(const ScenarioConfig& cfg) {
  return cfg.density * std::numbers::pi * cfg.radius * cfg.radius;
}

struct CellInstance {
  std::vector<double> distances;  // same order as gains
  ChannelState gains;
};

/// Draws one cell from the given stream. Draw order is fixed (count, then
/// per user: distance, then fade), so a (seed, trial) pair fully determines
/// the cell.
inline CellInstance sample_cell(const ScenarioConfig& cfg, Philox& rng) {
  validate(cfg);
  std::int64_t n;
  if (cfg.fixed_n > 0) {
    n = cfg.fixed_n;
  } else {
    const double mean = mean_users(cfg);
    do {
      n = rng.next_poisson(mean);
    } while (n < cfg.min_users);
  }
  std::vector<double> distances(static_cast<std::size_t>(n));
  std::vector<double> gains(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < gains.size(); ++i) {
    const double d = cfg.radius * std::sqrt(rng.next_double());
    rng.next_double();  // angle; uniform placement, but only d reaches the gain
    const double fade = cfg.fading == FadingLaw::kRayleigh ? rng.next_exponential() : 1.0;
    distances[i] = d;
    gains[i] = fade / (1.0 + std::pow(d, cfg.pathloss_exponent));
  }
  return CellInstance{std::move(distances), ChannelState(std::move(gains))};
}

/// Monte Carlo estimate of the probability that no user clears the
/// single-user threshold (e - 1) / rho, i.e. that the sufficient condition
/// for k* = 1 fails for the whole cell. More users or more SNR can only
/// shrink it. Trials use disjoint streams keyed by (seed, trial).
inline double tdma_dominance_probability(const ScenarioConfig& cfg, std::int64_t trials) {
  validate(cfg);
  detail::require(trials >= 1, "trials must be >= 1");
  const LinkBudget budget = LinkBudget::from_snr_db(cfg.snr_db);
  std::int64_t all_below = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    Philox rng(cfg.seed, static_cast<std::uint64_t>(t));
    const CellInstance cell = sample_cell(cfg, rng);
    if (!tdma_sufficient(cell.gains, budget)) ++all_below;
  }
  return static_cast<double>(all_below) / static_cast<double>(trials);
}

}  // namespace bpc
