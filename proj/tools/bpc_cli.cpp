// Command line front end: optimal binary allocation for explicit gains,
// Monte Carlo k* histograms and rate sweeps over sampled cells, and the
// oracle-backed verification suites.
//
// Exit codes: 0 success, 1 usage or input error, 2 verification failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bpc/bpc.hpp"

namespace {

struct ScenarioFlags {
  double density = 1.0;
  double radius = 5.0;
  double alpha = 4.0;
  int fixed_n = 0;
  int min_users = 1;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  int threads = 0;
  std::string out;
  std::string config;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Splices "--key value" pairs read from a key=value file in right after the
/// --config option itself, so they land in the same subcommand scope. Keys
/// already present on the command line are skipped: explicit flags win.
std::vector<std::string> expand_config_args(const std::vector<std::string>& args) {
  std::size_t at = args.size();
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      at = i + 2;
      path = args[i + 1];
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      at = i + 1;
      path = args[i].substr(9);
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line is not key=value: '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw std::runtime_error("bad config key in line: '" + line + "'");
    const std::string flag = "--" + key;
    bool overridden = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) overridden = true;
    if (overridden) continue;
    tokens.push_back(flag);
    tokens.push_back(value);
  }
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(at));
  out.insert(out.end(), tokens.begin(), tokens.end());
  out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(at), args.end());
  return out;
}

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f, std::int64_t default_trials) {
  f.trials = default_trials;
  cmd->add_option("--density", f.density, "users per unit area")->required();
  cmd->add_option("--radius", f.radius, "cell radius")->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "path loss exponent")->capture_default_str();
  cmd->add_option("--fixed-n", f.fixed_n, "pin the user count (0 = Poisson draw)")
      ->capture_default_str();
  cmd->add_option("--min-users", f.min_users, "redraw cells with fewer users")
      ->capture_default_str();
  cmd->add_option("--trials", f.trials, "Monte Carlo trials")->capture_default_str();
  cmd->add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads (0 = all hardware threads)")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "output CSV path (stdout if omitted)");
  cmd->add_option("--config", f.config, "key=value file; command line flags win");
}

bpc::ScenarioConfig to_config(const ScenarioFlags& f) {
  bpc::ScenarioConfig cfg;
  cfg.density = f.density;
  cfg.radius = f.radius;
  cfg.pathloss_exponent = f.alpha;
  cfg.fixed_n = f.fixed_n;
  cfg.min_users = f.min_users;
  cfg.seed = f.seed;
  return cfg;
}

std::vector<double> parse_snr_range(const std::string& text) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &tail) != 3)
    throw std::invalid_argument("snr range must look like lo:hi:step");
  if (!(step > 0.0) || hi < lo)
    throw std::invalid_argument("snr range needs step > 0 and hi >= lo");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

std::vector<bpc::Policy> parse_policies(const std::string& text) {
  std::vector<bpc::Policy> out;
  for (const std::string& token : bpc::detail::split_fields(text))
    out.push_back(bpc::parse_policy(token));
  return out;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  file << content;
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-rate-optimal binary power control for the single-cell uplink"};
  app.require_subcommand(1);

  CLI::App* alloc_cmd = app.add_subcommand("allocate", "optimal allocation for explicit gains");
  std::vector<double> gains;
  double alloc_snr_db = 0.0;
  alloc_cmd->add_option("--gains", gains, "comma-separated channel gains")
      ->required()
      ->delimiter(',');
  alloc_cmd->add_option("--snr-db", alloc_snr_db, "operating SNR in dB")->required();

  CLI::App* kdist_cmd = app.add_subcommand("kdist", "histogram of the optimal k*");
  ScenarioFlags kdist_flags;
  std::vector<double> kdist_snr;
  kdist_cmd->add_option("--snr-db", kdist_snr, "comma-separated SNR points in dB")
      ->required()
      ->delimiter(',');
  add_scenario_flags(kdist_cmd, kdist_flags, 100000);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "mean rate vs SNR per policy");
  ScenarioFlags sweep_flags;
  std::string sweep_range;
  std::string sweep_policies = "optimal,heuristic,tdma,wb";
  sweep_cmd->add_option("--snr-db-range", sweep_range, "SNR grid as lo:hi:step in dB")
      ->required();
  sweep_cmd
      ->add_option("--policies", sweep_policies,
                   "comma-separated from optimal, heuristic, tdma, wb, sic:<beta>")
      ->capture_default_str();
  add_scenario_flags(sweep_cmd, sweep_flags, 10000);

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the oracle verification suites");
  bpc::VerifyLimits limits;
  bool inject_fault = false;
  verify_cmd->add_option("--max-n", limits.max_n, "largest exhaustively checked user count")
      ->capture_default_str();
  verify_cmd->add_option("--trials", limits.trials, "instances per suite")->capture_default_str();
  verify_cmd->add_option("--seed", limits.seed, "RNG seed")->capture_default_str();
  verify_cmd->add_flag("--inject-fault", inject_fault)->group("");  // self-test hook

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config_args(args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*alloc_cmd) {
      const bpc::ChannelState h(gains);
      const bpc::LinkBudget budget = bpc::LinkBudget::from_snr_db(alloc_snr_db);
      const bpc::AllocationResult res = bpc::optimal_binary(h, budget);
      std::ostringstream out;
      out << "k_star: " << res.k_star << '\n';
      out << "active_set:";
      for (std::size_t i : res.allocation.active_set()) out << ' ' << i;
      out << '\n';
      out << "rate_nats: " << bpc::format_double(res.rate.nats) << '\n';
      out << "rate_bits: " << bpc::format_double(res.rate.bits()) << '\n';
      std::cout << out.str();
    } else if (*kdist_cmd) {
      const std::vector<bpc::KStarHistogram> hists =
          bpc::run_kdist(to_config(kdist_flags), kdist_snr, kdist_flags.trials,
                         kdist_flags.threads);
      std::ostringstream buf;
      bpc::write_kdist_csv(buf, hists);
      emit(kdist_flags.out, buf.str());
    } else if (*sweep_cmd) {
      const std::vector<double> grid = parse_snr_range(sweep_range);
      const std::vector<bpc::Policy> policies = parse_policies(sweep_policies);
      const std::vector<bpc::SweepRecord> records =
          bpc::run_sweep(to_config(sweep_flags), grid, policies, sweep_flags.trials,
                         sweep_flags.threads);
      std::ostringstream buf;
      bpc::write_sweep_csv(buf, records);
      emit(sweep_flags.out, buf.str());
    } else if (*verify_cmd) {
      bpc::AllocatorFn allocator;
      if (inject_fault) {
        allocator = [](const bpc::ChannelState& h, const bpc::LinkBudget& b) {
          // deliberately wrong: schedule everyone regardless of gains
          std::vector<std::size_t> all(h.size());
          std::iota(all.begin(), all.end(), std::size_t{0});
          return bpc::AllocationResult{
              bpc::PowerAllocation::binary(h.size(), all, b.peak_power()), h.size(),
              bpc::best_k_rate(h, h.size(), b), bpc::PolicyTag::kOptimal};
        };
      }
      const bpc::VerifyReport report = bpc::run_verify(limits, allocator);
      std::cout << bpc::to_string(report);
      if (!report.passed()) return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
