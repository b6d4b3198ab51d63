#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "bpc/rate.hpp"

namespace bpc {

struct MajorizationVerdict {
  bool majorizes = false;
  /// Set only when majorizes is also set, since vectors that are equal up to
  /// permutation majorize each other.
  bool equal_up_to_permutation = false;
};

/// Tests whether x majorizes y: equal totals, and every prefix of the
/// descending rearrangement of x dominates the corresponding prefix of y.
/// Comparisons use an absolute tolerance to absorb float noise in the
/// partial sums.
inline MajorizationVerdict majorizes(std::span<const double> x, std::span<const double> y,
                                     double tol = 1e-9) {
  detail::require(x.size() == y.size(), "majorization needs equal lengths");
  detail::require(!x.empty(), "majorization needs at least one component");
  detail::require(std::isfinite(tol) && tol >= 0.0, "tolerance must be >= 0");
  for (double v : x) detail::require(std::isfinite(v), "components must be finite");
  for (double v : y) detail::require(std::isfinite(v), "components must be finite");

  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end(), std::greater<double>());
  std::sort(ys.begin(), ys.end(), std::greater<double>());

  MajorizationVerdict verdict;
  double px = 0.0, py = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    px += xs[k];
    py += ys[k];
    if (px < py - tol) return verdict;  // prefix dominance fails
  }
  if (std::abs(px - py) > tol) return verdict;  // totals differ
  verdict.majorizes = true;

  verdict.equal_up_to_permutation = true;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (std::abs(xs[k] - ys[k]) > tol) {
      verdict.equal_up_to_permutation = false;
      break;
    }
  }
  return verdict;
}

/// Robin Hood transfer in reverse: moves eps from the smaller component j to
/// the larger component i, spreading the pair further apart. The result
/// majorizes the input, and any Schur-convex objective can only grow.
inline std::vector<double> epsilon_transfer(std::span<const double> x, std::size_t i,
                                            std::size_t j, double eps) {
  detail::require(i < x.size() && j < x.size() && i != j, "transfer needs distinct indices");
  detail::require(x[i] >= x[j], "transfer must move mass toward the larger component");
  detail::require(std::isfinite(eps) && eps >= 0.0 && eps <= x[j],
                  "eps must lie in [0, x[j]]");
  std::vector<double> out(x.begin(), x.end());
  out[i] += eps;
  out[j] -= eps;
  return out;
}

}  // namespace bpc
