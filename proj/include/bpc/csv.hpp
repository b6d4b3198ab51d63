#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpc/sweep.hpp"

namespace bpc {

inline constexpr const char* kSweepCsvHeader = "snr_db,policy,beta,mean_rate_nats,stderr,trials";
inline constexpr const char* kKdistCsvHeader = "snr_db,k_star,count,trials";

/// Shortest representation that round-trips the exact double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad numeric field '" + s + "'");
  return v;
}

inline std::int64_t parse_count(const std::string& s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size() || v < 0) throw std::invalid_argument("bad count field '" + s + "'");
  return v;
}

/// Reads one line, tolerating a trailing CR. Returns false on EOF.
inline bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace detail

inline void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRecord& r : records) {
    out << format_double(r.snr_db) << ',' << policy_name(r.policy) << ',';
    if (r.policy.kind == Policy::Kind::kSic) out << format_double(r.policy.beta);
    out << ',' << format_double(r.mean_rate_nats) << ',' << format_double(r.std_err) << ','
        << r.trials << '\n';
  }
}

inline std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!detail::next_line(in, line) || line != kSweepCsvHeader)
    throw std::invalid_argument("missing or malformed sweep header");
  std::vector<SweepRecord> records;
  while (detail::next_line(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = detail::split_fields(line);
    if (f.size() != 6) throw std::invalid_argument("sweep row needs 6 fields");
    SweepRecord r;
    r.snr_db = detail::parse_double(f[0]);
    r.policy = parse_policy(f[1]);
    if (r.policy.kind == Policy::Kind::kSic) {
      if (f[2].empty()) throw std::invalid_argument("sic row needs a beta");
      r.policy.beta = detail::parse_double(f[2]);
    } else if (!f[2].empty()) {
      throw std::invalid_argument("beta only applies to sic rows");
    }
    r.mean_rate_nats = detail::parse_double(f[3]);
    r.std_err = detail::parse_double(f[4]);
    r.trials = detail::parse_count(f[5]);
    records.push_back(r);
  }
  return records;
}

inline void write_kdist_csv(std::ostream& out, std::span<const KStarHistogram> hists) {
  out << kKdistCsvHeader << '\n';
  for (const KStarHistogram& h : hists)
    for (const auto& [k, count] : h.counts)
      out << format_double(h.snr_db) << ',' << k << ',' << count << ',' << h.trials << '\n';
}

inline std::vector<KStarHistogram> read_kdist_csv(std::istream& in) {
  std::string line;
  if (!detail::next_line(in, line) || line != kKdistCsvHeader)
    throw std::invalid_argument("missing or malformed kdist header");
  std::vector<KStarHistogram> hists;
  while (detail::next_line(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = detail::split_fields(line);
    if (f.size() != 4) throw std::invalid_argument("kdist row needs 4 fields");
    const double snr_db = detail::parse_double(f[0]);
    if (hists.empty() || hists.back().snr_db != snr_db) {
      hists.push_back(KStarHistogram{snr_db, {}, detail::parse_count(f[3])});
    }
    hists.back().counts[static_cast<std::size_t>(detail::parse_count(f[1]))] =
        detail::parse_count(f[2]);
  }
  return hists;
}

}  // namespace bpc
