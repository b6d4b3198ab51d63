#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bpc/allocation.hpp"
#include "bpc/rate.hpp"
#include "bpc/scenario.hpp"

namespace bpc {

/// Exhaustive scan of all 2^n - 1 nonempty on/off patterns, evaluated through
/// the received-power form rather than the sorted-prefix recursion, so the
/// two routes check each other. Ties resolve to the smallest active set,
/// then lexicographically smallest index set. Deliberately limited to
/// n <= 20.
inline AllocationResult brute_force_binary(const ChannelState& h, const LinkBudget& budget) {
  const std::size_t n = h.size();
  detail::require(n <= 20, "brute force is limited to n <= 20");
  const double peak = budget.peak_power();
  std::vector<double> x(n);
  double best_rate = -1.0;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = (mask >> i & 1u) ? h.gains()[i] * peak : 0.0;
    const double rate = sum_rate_received(x, budget.noise_var()).nats;
    bool better = rate > best_rate;
    if (rate == best_rate) {
      const int pc = std::popcount(mask), best_pc = std::popcount(best_mask);
      // smaller set wins; same size, lower indices win (mask compare works
      // because the set bits read off in ascending index order)
      better = pc < best_pc || (pc == best_pc && mask < best_mask);
    }
    if (better) {
      best_rate = rate;
      best_mask = mask;
    }
  }
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i)
    if (best_mask >> i & 1u) active.push_back(i);
  return AllocationResult{PowerAllocation::binary(n, active, peak),
                          active.size(), SumRate{best_rate}, PolicyTag::kOptimal};
}

struct GridSearchResult {
  std::vector<double> powers;
  SumRate rate;
};

/// Grid search over [0, P]^n with points_per_axis levels per user, endpoint
/// pinned to exactly P. Intended as an independent check that the continuous
/// optimum sits at a corner; throws if the grid ever beats the binary
/// optimum, since that would falsify the corner property this library is
/// built on.
inline GridSearchResult grid_search_continuous(const ChannelState& h, const LinkBudget& budget,
                                               int points_per_axis) {
  const std::size_t n = h.size();
  detail::require(n <= 4, "grid search is limited to n <= 4");
  detail::require(points_per_axis >= 2 && points_per_axis <= 64,
                  "points_per_axis must lie in [2, 64]");
  const double peak = budget.peak_power();
  const int g = points_per_axis;
  std::vector<double> levels(static_cast<std::size_t>(g));
  for (int v = 0; v < g; ++v)
    levels[static_cast<std::size_t>(v)] =
        v == g - 1 ? peak : peak * static_cast<double>(v) / static_cast<double>(g - 1);

  std::vector<int> digit(n, 0);
  std::vector<double> x(n, 0.0);
  std::vector<int> best_digit(n, 0);
  double best_rate = -1.0;
  for (;;) {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = h.gains()[i] * levels[static_cast<std::size_t>(digit[i])];
    const double rate = sum_rate_received(x, budget.noise_var()).nats;
    if (rate > best_rate) {  // first maximizer in odometer order
      best_rate = rate;
      best_digit = digit;
    }
    std::size_t pos = 0;
    while (pos < n && ++digit[pos] == g) digit[pos++] = 0;
    if (pos == n) break;
  }

  const double corner_best = brute_force_binary(h, budget).rate.nats;
  if (best_rate > corner_best + 1e-12 * std::max(corner_best, 1.0))
    throw std::logic_error("grid point beat the binary optimum");

  std::vector<double> powers(n);
  for (std::size_t i = 0; i < n; ++i)
    powers[i] = levels[static_cast<std::size_t>(best_digit[i])];
  return GridSearchResult{std::move(powers), SumRate{best_rate}};
}

/// Fraction of sampled cells whose two best prefix rates agree to within
/// 1e-12 relative, i.e. cells where the reported k* genuinely depends on the
/// tie-break rule.
inline double tie_frequency(const ScenarioConfig& cfg, std::int64_t trials) {
  validate(cfg);
  detail::require(trials >= 1, "trials must be >= 1");
  const LinkBudget budget = LinkBudget::from_snr_db(cfg.snr_db);
  std::int64_t ties = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    Philox rng(cfg.seed, static_cast<std::uint64_t>(t));
    const CellInstance cell = sample_cell(cfg, rng);
    const std::size_t n = cell.gains.size();
    if (n < 2) continue;
    double top = -1.0, second = -1.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double rk = best_k_rate(cell.gains, k, budget).nats;
      if (rk > top) {
        second = top;
        top = rk;
      } else if (rk > second) {
        second = rk;
      }
    }
    if (top - second <= 1e-12 * top) ++ties;
  }
  return static_cast<double>(ties) / static_cast<double>(trials);
}

}  // namespace bpc
