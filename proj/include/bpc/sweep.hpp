#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bpc/allocation.hpp"
#include "bpc/parallel.hpp"
#include "bpc/rate.hpp"
#include "bpc/rng.hpp"
#include "bpc/scenario.hpp"

namespace bpc {

/// A policy evaluated by the sweep harness. beta applies to kSic only.
struct Policy {
  enum class Kind { kOptimal, kHeuristic, kTdma, kWideband, kSic };
  Kind kind = Kind::kOptimal;
  double beta = 1.0;
};

/// Parses "optimal", "heuristic", "tdma", "wb", "sic" or "sic:<beta>".
inline Policy parse_policy(std::string_view text) {
  if (text == "optimal") return {Policy::Kind::kOptimal, 0.0};
  if (text == "heuristic") return {Policy::Kind::kHeuristic, 0.0};
  if (text == "tdma") return {Policy::Kind::kTdma, 0.0};
  if (text == "wb") return {Policy::Kind::kWideband, 0.0};
  if (text == "sic") return {Policy::Kind::kSic, 1.0};
  if (text.rfind("sic:", 0) == 0) {
    const std::string arg(text.substr(4));
    std::size_t used = 0;
    double beta = std::stod(arg, &used);
    if (used != arg.size() || !std::isfinite(beta) || beta < 0.0 || beta > 1.0)
      throw std::invalid_argument("sic beta must be a number in [0, 1]");
    return {Policy::Kind::kSic, beta};
  }
  throw std::invalid_argument("unknown policy '" + std::string(text) + "'");
}

inline std::string policy_name(const Policy& p) {
  switch (p.kind) {
    case Policy::Kind::kOptimal: return "optimal";
    case Policy::Kind::kHeuristic: return "heuristic";
    case Policy::Kind::kTdma: return "tdma";
    case Policy::Kind::kWideband: return "wb";
    case Policy::Kind::kSic: return "sic";
  }
  return "?";
}

/// Rate a policy attains on one cell at one operating point.
inline double policy_rate(const ChannelState& h, const LinkBudget& budget, const Policy& p) {
  switch (p.kind) {
    case Policy::Kind::kOptimal: return optimal_binary(h, budget).rate.nats;
    case Policy::Kind::kHeuristic: return heuristic_wb_tdma(h, budget).rate.nats;
    case Policy::Kind::kTdma: return best_k_rate(h, 1, budget).nats;
    case Policy::Kind::kWideband: return best_k_rate(h, h.size(), budget).nats;
    case Policy::Kind::kSic: return sic_capacity(h, budget, p.beta).nats;
  }
  return 0.0;
}

struct SweepRecord {
  double snr_db = 0.0;
  Policy policy;
  double mean_rate_nats = 0.0;
  double std_err = 0.0;
  std::int64_t trials = 0;
};

struct KStarHistogram {
  double snr_db = 0.0;
  std::map<std::size_t, std::int64_t> counts;  // k* -> occurrences
  std::int64_t trials = 0;
};

namespace detail {

inline void check_snr_grid(std::span<const double> snr_db_grid) {
  require(!snr_db_grid.empty(), "snr grid must not be empty");
  for (double v : snr_db_grid) require(std::isfinite(v), "snr grid must be finite");
}

/// Mean and standard error of one slice, accumulated in trial order.
inline void mean_and_std_err(std::span<const double> values, double& mean, double& se) {
  const auto n = static_cast<double>(values.size());
  double total = 0.0;
  for (double v : values) total += v;
  mean = total / n;
  if (values.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  se = std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace detail

/// Monte Carlo sweep of mean sum rate versus SNR for several policies.
///
/// One cell is drawn per trial from the stream keyed by (seed, trial) and
/// shared across every SNR point and policy, so per-trial dominance
/// relations between policies carry over to the estimates exactly, and
/// output is a deterministic function of (config, grid, policies, trials)
/// regardless of thread count.
inline std::vector<SweepRecord> run_sweep(const ScenarioConfig& cfg,
                                          std::span<const double> snr_db_grid,
                                          std::span<const Policy> policies,
                                          std::int64_t trials, int threads = 1) {
  validate(cfg);
  detail::check_snr_grid(snr_db_grid);
  detail::require(!policies.empty(), "policy list must not be empty");
  detail::require(trials >= 1, "trials must be >= 1");

  const std::size_t ns = snr_db_grid.size();
  const std::size_t np = policies.size();
  std::vector<LinkBudget> budgets;
  budgets.reserve(ns);
  for (double db : snr_db_grid) budgets.push_back(LinkBudget::from_snr_db(db));

  std::vector<double> slot(static_cast<std::size_t>(trials) * ns * np);
  parallel_for(trials, threads, [&](std::int64_t t) {
    Philox rng(cfg.seed, static_cast<std::uint64_t>(t));
    const CellInstance cell = sample_cell(cfg, rng);
    double* row = slot.data() + static_cast<std::size_t>(t) * ns * np;
    for (std::size_t s = 0; s < ns; ++s)
      for (std::size_t p = 0; p < np; ++p)
        row[s * np + p] = policy_rate(cell.gains, budgets[s], policies[p]);
  });

  std::vector<SweepRecord> records;
  records.reserve(ns * np);
  std::vector<double> slice(static_cast<std::size_t>(trials));
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t p = 0; p < np; ++p) {
      for (std::int64_t t = 0; t < trials; ++t)
        slice[static_cast<std::size_t>(t)] =
            slot[static_cast<std::size_t>(t) * ns * np + s * np + p];
      SweepRecord rec;
      rec.snr_db = snr_db_grid[s];
      rec.policy = policies[p];
      rec.trials = trials;
      detail::mean_and_std_err(slice, rec.mean_rate_nats, rec.std_err);
      records.push_back(rec);
    }
  }
  return records;
}

/// Distribution of the optimal active-set size k* at each SNR point, using
/// the same per-trial streams and shared cells as run_sweep.
inline std::vector<KStarHistogram> run_kdist(const ScenarioConfig& cfg,
                                             std::span<const double> snr_db_grid,
                                             std::int64_t trials, int threads = 1) {
  validate(cfg);
  detail::check_snr_grid(snr_db_grid);
  detail::require(trials >= 1, "trials must be >= 1");

  const std::size_t ns = snr_db_grid.size();
  std::vector<LinkBudget> budgets;
  budgets.reserve(ns);
  for (double db : snr_db_grid) budgets.push_back(LinkBudget::from_snr_db(db));

  std::vector<std::uint32_t> slot(static_cast<std::size_t>(trials) * ns);
  parallel_for(trials, threads, [&](std::int64_t t) {
    Philox rng(cfg.seed, static_cast<std::uint64_t>(t));
    const CellInstance cell = sample_cell(cfg, rng);
    for (std::size_t s = 0; s < ns; ++s)
      slot[static_cast<std::size_t>(t) * ns + s] =
          static_cast<std::uint32_t>(optimal_binary(cell.gains, budgets[s]).k_star);
  });

  std::vector<KStarHistogram> out;
  out.reserve(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    KStarHistogram hist;
    hist.snr_db = snr_db_grid[s];
    hist.trials = trials;
    for (std::int64_t t = 0; t < trials; ++t)
      ++hist.counts[slot[static_cast<std::size_t>(t) * ns + s]];
    out.push_back(std::move(hist));
  }
  return out;
}

}  // namespace bpc
