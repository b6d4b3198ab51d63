#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "bpc/rate.hpp"

namespace bpc {

enum class PolicyTag { kOptimal, kHeuristic, kTdma, kWideband };

struct AllocationResult {
  PowerAllocation allocation;
  std::size_t k_star = 0;  // number of active users
  SumRate rate;
  PolicyTag policy = PolicyTag::kOptimal;
};

namespace detail {

/// Packages "the k strongest users transmit at peak" as an AllocationResult.
inline AllocationResult make_top_k_result(const ChannelState& h, const LinkBudget& budget,
                                          std::size_t k, SumRate rate, PolicyTag tag) {
  std::vector<std::size_t> active(h.sort_order().begin(), h.sort_order().begin() + k);
  std::sort(active.begin(), active.end());
  return AllocationResult{PowerAllocation::binary(h.size(), active, budget.peak_power()),
                          k, rate, tag};
}

}  // namespace detail

/// Exact optimal binary allocation: evaluates R_k for every prefix size k of
/// the descending gain order and keeps the smallest maximizer. The optimum
/// over all of [0, P]^n is attained at such a vertex, so this O(n^2) scan is
/// exhaustive despite touching only n of the 2^n corners.
inline AllocationResult optimal_binary(const ChannelState& h, const LinkBudget& budget) {
  std::size_t k_star = 1;
  double best = best_k_rate(h, 1, budget).nats;
  for (std::size_t k = 2; k <= h.size(); ++k) {
    const double rk = best_k_rate(h, k, budget).nats;
    if (rk > best) {  // strict, so ties resolve to the smallest k
      best = rk;
      k_star = k;
    }
  }
  return detail::make_top_k_result(h, budget, k_star, SumRate{best}, PolicyTag::kOptimal);
}

/// Two-point heuristic: picks the better of single-user transmission (k = 1)
/// and everyone-on (k = n), preferring k = 1 on ties.
inline AllocationResult heuristic_wb_tdma(const ChannelState& h, const LinkBudget& budget) {
  std::size_t k = 1;
  double rate = best_k_rate(h, 1, budget).nats;
  if (h.size() > 1) {
    const double wideband = best_k_rate(h, h.size(), budget).nats;
    if (wideband > rate) {
      k = h.size();
      rate = wideband;
    }
  }
  return detail::make_top_k_result(h, budget, k, SumRate{rate}, PolicyTag::kHeuristic);
}

/// Sufficient condition for k* = 1: the strongest received SNR clears e - 1.
/// The threshold is inclusive.
inline bool tdma_sufficient(const ChannelState& h, const LinkBudget& budget) {
  return h.sorted_desc().front() >= (std::numbers::e - 1.0) * budget.inv_snr();
}

enum class TwoUserRegion { kUser1Only, kUser2Only, kBoth, kBoundary };

/// Classifies the two-user plane by comparing the three candidate rates
/// (only user 1, only user 2, both on). Reports kBoundary whenever the top
/// two candidates are within rel_tol of each other, rather than silently
/// picking a side.
inline TwoUserRegion two_user_region(double h1, double h2, const LinkBudget& budget,
                                     double rel_tol = 1e-12) {
  detail::require(detail::finite_nonneg(h1) && detail::finite_nonneg(h2),
                  "channel gains must be finite and >= 0");
  detail::require(std::isfinite(rel_tol) && rel_tol >= 0.0, "tolerance must be >= 0");
  const double inv_rho = budget.inv_snr();
  const double r1 = 0.5 * std::log1p(h1 / inv_rho);
  const double r2 = 0.5 * std::log1p(h2 / inv_rho);
  const double r12 =
      0.5 * (std::log1p(h1 / (inv_rho + h2)) + std::log1p(h2 / (inv_rho + h1)));
  const double best = std::max({r1, r2, r12});
  const auto near_best = [&](double r) { return best - r <= rel_tol * best; };
  const int contenders = near_best(r1) + near_best(r2) + near_best(r12);
  if (contenders >= 2) return TwoUserRegion::kBoundary;
  if (best == r1) return TwoUserRegion::kUser1Only;
  if (best == r2) return TwoUserRegion::kUser2Only;
  return TwoUserRegion::kBoth;
}

/// Cancellation level at which residual-interference decoding of all n
/// equal-gain users ties single-user transmission, for x = rho * h_[1]:
///
///   eps(n, x) = (x - t) / ((n - 1) * x * t),  t = (1 + x)^{1/n} - 1.
inline double epsilon_crossing(int n, double rho_h1) {
  detail::require(n >= 2, "crossing needs n >= 2");
  detail::require(std::isfinite(rho_h1) && rho_h1 > 0.0, "rho * h must be > 0");
  const double t = std::expm1(std::log1p(rho_h1) / n);
  return (rho_h1 - t) / ((n - 1) * rho_h1 * t);
}

/// Large-n limit of epsilon_crossing: 1 / ln(1 + rho * h_[1]).
inline double epsilon_limit(double rho_h1) {
  detail::require(std::isfinite(rho_h1) && rho_h1 > 0.0, "rho * h must be > 0");
  return 1.0 / std::log1p(rho_h1);
}

}  // namespace bpc
