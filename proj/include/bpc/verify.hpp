#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "bpc/allocation.hpp"
#include "bpc/majorization.hpp"
#include "bpc/oracle.hpp"
#include "bpc/rate.hpp"
#include "bpc/rng.hpp"

namespace bpc {

/// Allocator under test. run_verify checks whatever is plugged in against
/// the independent oracles, which also lets tests confirm the harness flags
/// deliberately broken allocators.
using AllocatorFn = std::function<AllocationResult(const ChannelState&, const LinkBudget&)>;

struct VerifyLimits {
  std::size_t max_n = 12;      // largest user count for exhaustive comparison
  std::int64_t trials = 10000;  // instances per suite
  std::uint64_t seed = 0;
};

struct SuiteResult {
  std::string name;
  std::int64_t checked = 0;
  std::int64_t failures = 0;
  double worst_rel_dev = 0.0;
  std::string note;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const {
    for (const SuiteResult& s : suites)
      if (s.failures != 0) return false;
    return true;
  }
};

namespace detail {

inline double rel_dev(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline Philox suite_stream(std::uint64_t seed, std::uint64_t suite, std::int64_t trial) {
  return Philox(seed, (suite << 48) + static_cast<std::uint64_t>(trial));
}

inline double log_uniform(Philox& rng, double lo_exp10, double hi_exp10) {
  return std::pow(10.0, lo_exp10 + (hi_exp10 - lo_exp10) * rng.next_double());
}

inline std::vector<double> exp_gains(Philox& rng, std::size_t n) {
  std::vector<double> g(n);
  for (double& v : g) v = rng.next_exponential();
  return g;
}

/// Allocator vs exhaustive oracle. Three checks per instance: the reported
/// rate matches an independent evaluation of the reported allocation, that
/// rate ties the exhaustive optimum, and the oracle's winner is a
/// strongest-prefix set. Differing active sets at matching rates are
/// counted as ties, not failures.
inline SuiteResult verify_oracle_agreement(const VerifyLimits& lim, const AllocatorFn& alloc) {
  SuiteResult res;
  res.name = "oracle_agreement";
  std::int64_t ties = 0;
  for (std::int64_t t = 0; t < lim.trials; ++t) {
    Philox rng = suite_stream(lim.seed, 1, t);
    const std::size_t n = 1 + static_cast<std::size_t>(rng.next_index(lim.max_n));
    const LinkBudget budget = LinkBudget::from_snr(log_uniform(rng, -3.0, 3.0));
    const ChannelState h(exp_gains(rng, n));
    const AllocationResult a = alloc(h, budget);
    const AllocationResult bf = brute_force_binary(h, budget);
    ++res.checked;

    const double honest = sum_rate(h, a.allocation, budget).nats;
    const double dev =
        std::max(rel_dev(a.rate.nats, honest), rel_dev(a.rate.nats, bf.rate.nats));
    res.worst_rel_dev = std::max(res.worst_rel_dev, dev);

    double min_active = std::numeric_limits<double>::infinity();
    double max_silent = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (bf.allocation.powers()[i] > 0.0)
        min_active = std::min(min_active, h.gains()[i]);
      else
        max_silent = std::max(max_silent, h.gains()[i]);
    }
    const bool prefix_ok = min_active >= max_silent || max_silent == -std::numeric_limits<double>::infinity();

    if (dev > 1e-12 || !prefix_ok) {
      ++res.failures;
    } else if (a.allocation.active_set() != bf.allocation.active_set()) {
      ++ties;
    }
  }
  res.note = "set_ties=" + std::to_string(ties);
  return res;
}

/// Dense grid over the continuous power box never beats the binary corner
/// optimum, and its argmax sits at a corner.
inline SuiteResult verify_corner_dominance(const VerifyLimits& lim, const AllocatorFn& alloc) {
  SuiteResult res;
  res.name = "corner_dominance";
  const std::int64_t count = std::min<std::int64_t>(lim.trials, 400);
  for (std::int64_t t = 0; t < count; ++t) {
    Philox rng = suite_stream(lim.seed, 2, t);
    const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
    const LinkBudget budget = LinkBudget::from_snr(log_uniform(rng, -3.0, 3.0));
    const ChannelState h(exp_gains(rng, n));
    const GridSearchResult grid = grid_search_continuous(h, budget, 33);
    const AllocationResult a = alloc(h, budget);
    ++res.checked;

    bool corner = true;
    for (double p : grid.powers)
      if (p != 0.0 && p != budget.peak_power()) corner = false;
    const double dev = rel_dev(grid.rate.nats, a.rate.nats);
    res.worst_rel_dev = std::max(res.worst_rel_dev, dev);
    if (!corner || dev > 1e-12) ++res.failures;
  }
  return res;
}

/// Random spreading transfers strictly raise the sum rate and the
/// majorization test recognizes the chain.
inline SuiteResult verify_schur_convexity(const VerifyLimits& lim, const AllocatorFn&) {
  SuiteResult res;
  res.name = "schur_convexity";
  for (std::int64_t t = 0; t < lim.trials; ++t) {
    Philox rng = suite_stream(lim.seed, 3, t);
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_index(7));
    const double noise = log_uniform(rng, -2.0, 2.0);
    std::vector<double> base(n);
    for (double& v : base) v = 0.2 + 2.8 * rng.next_double();
    const int transfers = 1 + static_cast<int>(t % 3);

    std::vector<double> cur = base;
    bool ok = true;
    for (int s = 0; s < transfers && ok; ++s) {
      std::size_t a = static_cast<std::size_t>(rng.next_index(n));
      std::size_t b = static_cast<std::size_t>(rng.next_index(n - 1));
      if (b >= a) ++b;
      if (cur[a] < cur[b]) std::swap(a, b);
      const double eps = (0.3 + 0.6 * rng.next_double()) * cur[b];
      const std::vector<double> next = epsilon_transfer(cur, a, b, eps);
      const MajorizationVerdict step = majorizes(next, cur);
      const double before = sum_rate_received(cur, noise).nats;
      const double after = sum_rate_received(next, noise).nats;
      if (!step.majorizes || step.equal_up_to_permutation || !(after > before)) ok = false;
      cur = next;
    }
    const MajorizationVerdict chain = majorizes(cur, base);
    if (!chain.majorizes) ok = false;
    ++res.checked;
    if (!ok) ++res.failures;
  }
  return res;
}

/// Whenever the sufficient single-user condition fires, the allocator must
/// activate exactly the strongest user.
inline SuiteResult verify_tdma_linkage(const VerifyLimits& lim, const AllocatorFn& alloc) {
  SuiteResult res;
  res.name = "tdma_linkage";
  std::int64_t antecedent = 0;
  for (std::int64_t t = 0; t < lim.trials; ++t) {
    Philox rng = suite_stream(lim.seed, 4, t);
    const std::size_t n = 1 + static_cast<std::size_t>(rng.next_index(50));
    const LinkBudget budget = LinkBudget::from_snr_db(-30.0 + 60.0 * rng.next_double());
    std::vector<double> gains(n);
    for (double& g : gains) {
      const double d = 5.0 * std::sqrt(rng.next_double());
      g = rng.next_exponential() / (1.0 + d * d * d * d);
    }
    const ChannelState h(std::move(gains));
    ++res.checked;
    if (!tdma_sufficient(h, budget)) continue;
    ++antecedent;
    if (alloc(h, budget).k_star != 1) ++res.failures;
  }
  res.note = "antecedent_held=" + std::to_string(antecedent);
  return res;
}

/// Closed-form two-user regions agree with the allocator away from
/// boundaries.
inline SuiteResult verify_two_user_consistency(const VerifyLimits& lim, const AllocatorFn& alloc) {
  SuiteResult res;
  res.name = "two_user_consistency";
  std::int64_t boundary = 0;
  for (std::int64_t t = 0; t < lim.trials; ++t) {
    Philox rng = suite_stream(lim.seed, 5, t);
    const double h1 = 5.0 * (1.0 - rng.next_double());
    const double h2 = 5.0 * (1.0 - rng.next_double());
    const LinkBudget budget = LinkBudget::from_snr(log_uniform(rng, -1.0, 1.0));
    const TwoUserRegion region = two_user_region(h1, h2, budget);
    ++res.checked;
    if (region == TwoUserRegion::kBoundary) {
      ++boundary;
      continue;
    }
    const AllocationResult a = alloc(ChannelState({h1, h2}), budget);
    const std::vector<std::size_t> active = a.allocation.active_set();
    bool ok = false;
    switch (region) {
      case TwoUserRegion::kUser1Only: ok = active == std::vector<std::size_t>{0}; break;
      case TwoUserRegion::kUser2Only: ok = active == std::vector<std::size_t>{1}; break;
      case TwoUserRegion::kBoth: ok = active == std::vector<std::size_t>{0, 1}; break;
      case TwoUserRegion::kBoundary: break;
    }
    if (!ok) ++res.failures;
  }
  res.note = "boundary_skipped=" + std::to_string(boundary);
  return res;
}

/// Scaling gains by c while scaling SNR by 1/c leaves the problem invariant,
/// so the chosen set must not move (rate ties excepted).
inline SuiteResult verify_scale_covariance(const VerifyLimits& lim, const AllocatorFn& alloc) {
  SuiteResult res;
  res.name = "scale_covariance";
  for (std::int64_t t = 0; t < lim.trials; ++t) {
    Philox rng = suite_stream(lim.seed, 6, t);
    const std::size_t n = 1 + static_cast<std::size_t>(rng.next_index(10));
    const double snr = log_uniform(rng, -2.0, 2.0);
    const double c = log_uniform(rng, -2.0, 2.0);
    const std::vector<double> gains = exp_gains(rng, n);
    std::vector<double> scaled = gains;
    for (double& g : scaled) g *= c;

    const AllocationResult a = alloc(ChannelState(gains), LinkBudget::from_snr(snr));
    const AllocationResult b = alloc(ChannelState(scaled), LinkBudget::from_snr(snr / c));
    ++res.checked;
    const double dev = rel_dev(a.rate.nats, b.rate.nats);
    res.worst_rel_dev = std::max(res.worst_rel_dev, dev);
    if (a.allocation.active_set() != b.allocation.active_set() && dev > 1e-9) ++res.failures;
  }
  return res;
}

}  // namespace detail

/// Cross-checks the allocator (optimal_binary by default) against the
/// exhaustive and grid oracles plus the structural properties the design
/// rests on. All randomness is derived from limits.seed.
inline VerifyReport run_verify(const VerifyLimits& limits = {}, AllocatorFn allocator = {}) {
  detail::require(limits.max_n >= 1 && limits.max_n <= 20, "max_n must lie in [1, 20]");
  detail::require(limits.trials >= 1, "trials must be >= 1");
  if (!allocator)
    allocator = [](const ChannelState& h, const LinkBudget& b) { return optimal_binary(h, b); };

  VerifyReport report;
  report.suites.push_back(detail::verify_oracle_agreement(limits, allocator));
  report.suites.push_back(detail::verify_corner_dominance(limits, allocator));
  report.suites.push_back(detail::verify_schur_convexity(limits, allocator));
  report.suites.push_back(detail::verify_tdma_linkage(limits, allocator));
  report.suites.push_back(detail::verify_two_user_consistency(limits, allocator));
  report.suites.push_back(detail::verify_scale_covariance(limits, allocator));
  return report;
}

inline std::string to_string(const VerifyReport& report) {
  std::ostringstream out;
  for (const SuiteResult& s : report.suites) {
    char dev[32];
    std::snprintf(dev, sizeof(dev), "%.3g", s.worst_rel_dev);
    out << (s.failures == 0 ? "ok   " : "FAIL ") << s.name << "  checked=" << s.checked
        << " failures=" << s.failures << " worst_rel_dev=" << dev;
    if (!s.note.empty()) out << "  " << s.note;
    out << '\n';
  }
  out << (report.passed() ? "verify: all suites passed" : "verify: failures present") << '\n';
  return out.str();
}

}  // namespace bpc
