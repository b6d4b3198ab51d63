#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace bpc {

namespace detail {

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

/// Sum rate of a set of received powers x over noise variance sigma2:
///
///   0.5 * sum_i ln(1 + x_i / (sigma2 + sum_{j != i} x_j))
///
/// The input is canonicalized to descending order first, which makes the
/// result exactly permutation invariant, and the exclusion sum for each i is
/// assembled from prefix and suffix accumulators instead of total - x_i, so
/// no term suffers cancellation.
inline double rate_nats_from_received(std::span<const double> x, double sigma2) {
  const std::size_t n = x.size();
  std::vector<double> xs(x.begin(), x.end());
  std::sort(xs.begin(), xs.end(), std::greater<double>());
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + xs[i];
  double prefix = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double others = prefix + suffix[i + 1];
    acc += std::log1p(xs[i] / (sigma2 + others));
    prefix += xs[i];
  }
  return 0.5 * acc;
}

}  // namespace detail

/// Converts an SNR in decibels to the linear ratio rho = P / sigma^2.
inline double snr_from_db(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

/// Channel gains of the n users sharing the cell, kept both in submission
/// order and sorted in descending order. Ties sort by ascending original
/// index (stable), so every downstream selection is deterministic.
class ChannelState {
 public:
  explicit ChannelState(std::vector<double> gains) : gains_(std::move(gains)) {
    detail::require(!gains_.empty(), "channel state needs at least one user");
    for (double g : gains_)
      detail::require(detail::finite_nonneg(g), "channel gains must be finite and >= 0");
    order_.resize(gains_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return gains_[a] > gains_[b]; });
    sorted_.resize(gains_.size());
    for (std::size_t r = 0; r < order_.size(); ++r) sorted_[r] = gains_[order_[r]];
  }

  std::size_t size() const { return gains_.size(); }
  const std::vector<double>& gains() const { return gains_; }
  const std::vector<double>& sorted_desc() const { return sorted_; }
  /// sort_order()[r] is the original index of the rank-r strongest user.
  const std::vector<std::size_t>& sort_order() const { return order_; }

 private:
  std::vector<double> gains_;
  std::vector<double> sorted_;
  std::vector<std::size_t> order_;
};

/// Peak transmit power and receiver noise variance. The working
/// normalization is P = 1, sigma^2 = 1/rho, so rho carries the whole
/// operating point; the explicit constructor exists for callers that want
/// unnormalized units.
class LinkBudget {
 public:
  LinkBudget(double peak_power, double noise_var)
      : peak_(peak_power), noise_(noise_var) {
    detail::require(std::isfinite(peak_) && peak_ > 0.0, "peak power must be > 0");
    detail::require(std::isfinite(noise_) && noise_ > 0.0, "noise variance must be > 0");
  }

  static LinkBudget from_snr(double snr) {
    detail::require(std::isfinite(snr) && snr > 0.0, "snr must be > 0");
    return LinkBudget(1.0, 1.0 / snr);
  }

  static LinkBudget from_snr_db(double snr_db) { return from_snr(snr_from_db(snr_db)); }

  double peak_power() const { return peak_; }
  double noise_var() const { return noise_; }
  double snr() const { return peak_ / noise_; }
  /// rho^{-1} in received-power units; the additive noise floor seen by the
  /// rate formulas once gains are multiplied by peak power.
  double inv_snr() const { return noise_ / peak_; }

 private:
  double peak_;
  double noise_;
};

/// Per-user transmit powers, each in [0, peak].
class PowerAllocation {
 public:
  static PowerAllocation continuous(std::vector<double> powers, double peak) {
    detail::require(std::isfinite(peak) && peak > 0.0, "peak power must be > 0");
    detail::require(!powers.empty(), "allocation needs at least one user");
    for (double p : powers)
      detail::require(std::isfinite(p) && p >= 0.0 && p <= peak,
                      "powers must lie in [0, peak]");
    return PowerAllocation(std::move(powers), peak, false);
  }

  /// Binary allocation: users in `active` (original indices, need not be
  /// sorted) transmit at peak, everyone else is silent.
  static PowerAllocation binary(std::size_t n, std::span<const std::size_t> active,
                                double peak) {
    detail::require(std::isfinite(peak) && peak > 0.0, "peak power must be > 0");
    detail::require(n >= 1, "allocation needs at least one user");
    std::vector<double> powers(n, 0.0);
    for (std::size_t i : active) {
      detail::require(i < n, "active index out of range");
      powers[i] = peak;
    }
    return PowerAllocation(std::move(powers), peak, true);
  }

  std::size_t size() const { return powers_.size(); }
  const std::vector<double>& powers() const { return powers_; }
  double peak() const { return peak_; }
  bool is_binary() const { return binary_; }

  /// Original indices of users transmitting at exactly peak power.
  std::vector<std::size_t> active_set() const {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < powers_.size(); ++i)
      if (powers_[i] == peak_) active.push_back(i);
    return active;
  }

 private:
  PowerAllocation(std::vector<double> powers, double peak, bool binary)
      : powers_(std::move(powers)), peak_(peak), binary_(binary) {}

  std::vector<double> powers_;
  double peak_;
  bool binary_;
};

/// A sum rate in nats per channel use.
struct SumRate {
  double nats = 0.0;
  double bits() const { return nats * std::numbers::log2e; }
};

/// Sum rate achieved when every user is decoded against the interference of
/// all others plus noise.
inline SumRate sum_rate(const ChannelState& h, const PowerAllocation& p,
                        const LinkBudget& budget) {
  detail::require(h.size() == p.size(), "channel and allocation sizes differ");
  std::vector<double> x(h.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = h.gains()[i] * p.powers()[i];
  return SumRate{detail::rate_nats_from_received(x, budget.noise_var())};
}

/// Same objective expressed directly in received powers x_i = h_i * P_i.
inline SumRate sum_rate_received(std::span<const double> received, double noise_var) {
  detail::require(std::isfinite(noise_var) && noise_var > 0.0,
                  "noise variance must be > 0");
  for (double v : received)
    detail::require(detail::finite_nonneg(v), "received powers must be finite and >= 0");
  return SumRate{detail::rate_nats_from_received(received, noise_var)};
}

/// Sum rate when exactly the k strongest users transmit at peak power:
///
///   R_k = 0.5 * sum_{i<=k} ln(1 + h_[i] / (rho^{-1} + sum_{j<=k, j!=i} h_[j]))
///
/// with h_[1] >= h_[2] >= ... the sorted gains.
inline SumRate best_k_rate(const ChannelState& h, std::size_t k, const LinkBudget& budget) {
  detail::require(k >= 1 && k <= h.size(), "k must lie in [1, n]");
  const std::vector<double>& hs = h.sorted_desc();
  const double inv_rho = budget.inv_snr();
  std::vector<double> suffix(k + 1, 0.0);
  for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] + hs[i];
  double prefix = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double others = prefix + suffix[i + 1];
    acc += std::log1p(hs[i] / (inv_rho + others));
    prefix += hs[i];
  }
  return SumRate{0.5 * acc};
}

/// Sum rate of successive decoding with cancellation fraction beta: users are
/// decoded strongest first, and a decoded user leaves (1 - beta) of its
/// received power behind as residual interference. beta = 0 is plain
/// interference-as-noise with everyone on; beta = 1 removes decoded users
/// entirely.
inline SumRate sic_capacity(const ChannelState& h, const LinkBudget& budget, double beta) {
  detail::require(std::isfinite(beta) && beta >= 0.0 && beta <= 1.0,
                  "beta must lie in [0, 1]");
  const std::vector<double>& hs = h.sorted_desc();
  const std::size_t n = hs.size();
  const double inv_rho = budget.inv_snr();
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + hs[i];
  double prefix = 0.0;  // received power already decoded
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // grouped so beta = 0 reproduces the all-on sum rate bit for bit
    const double denom = inv_rho + ((1.0 - beta) * prefix + suffix[i + 1]);
    acc += std::log1p(hs[i] / denom);
    prefix += hs[i];
  }
  return SumRate{0.5 * acc};
}

/// Closed form for beta = 1: the interference channel telescopes to the
/// multiple-access sum capacity 0.5 * ln(1 + rho * sum_i h_i).
inline SumRate sic_perfect_capacity(const ChannelState& h, const LinkBudget& budget) {
  double total = 0.0;
  for (double g : h.gains()) total += g;
  return SumRate{0.5 * std::log1p(budget.snr() * total)};
}

}  // namespace bpc
