#pragma once

// Wilcoxon signed-rank test for paired samples. Exact null distribution
// (midranks allowed) up to 25 non-zero differences, normal approximation
// with tie and continuity corrections above that.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hgrec/error.hpp"

namespace hgrec {

/// H0: no difference; H1a: first sample significantly larger; H1b: significantly smaller.
enum class Verdict { h0, h1a, h1b };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::h0: return "H0";
    case Verdict::h1a: return "H1a";
    case Verdict::h1b: return "H1b";
  }
  return "H0";
}

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n = 0;  // non-zero differences
  double p_two_sided = 1.0;
  double p_greater = 1.0;  // P(W+ >= observed): x tends to exceed y
  double p_less = 1.0;     // P(W+ <= observed): x tends to fall below y
  bool exact = true;
  bool small_sample = false;  // fewer than 5 non-zero differences
  Verdict verdict = Verdict::h0;
};

inline constexpr std::size_t kWilcoxonExactMax = 25;

/// Non-zero paired differences and their midranks by absolute value.
struct SignedRanks {
  std::vector<double> differences;
  std::vector<double> ranks;
  std::vector<std::size_t> tie_sizes;
};

inline SignedRanks signed_ranks(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("paired samples differ in length");
  double scale = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) scale = std::max({scale, std::abs(x[i]), std::abs(y[i])});
  const double eps = 1e-12 * scale;

  SignedRanks out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (std::abs(d) > eps) out.differences.push_back(d);
  }
  const std::size_t n = out.differences.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(out.differences[a]) < std::abs(out.differences[b]);
  });
  out.ranks.assign(n, 0.0);
  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = begin + 1;
    while (end < n &&
           std::abs(out.differences[order[end]]) - std::abs(out.differences[order[end - 1]]) <= eps)
      ++end;
    const double midrank = (static_cast<double>(begin + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t i = begin; i < end; ++i) out.ranks[order[i]] = midrank;
    out.tie_sizes.push_back(end - begin);
    begin = end;
  }
  return out;
}

/// Number of sign patterns per value of 2*W+ for the given ranks
/// (ranks are multiples of one half).
inline std::vector<double> exact_doubled_wplus_counts(const std::vector<double>& ranks) {
  std::size_t total = 0;
  std::vector<std::size_t> doubled;
  for (double r : ranks) {
    doubled.push_back(static_cast<std::size_t>(std::llround(2.0 * r)));
    total += doubled.back();
  }
  std::vector<double> counts(total + 1, 0.0);
  counts[0] = 1.0;
  std::size_t reach = 0;
  for (auto r : doubled) {
    reach += r;
    for (std::size_t s = reach; s >= r; --s) {
      counts[s] += counts[s - r];
      if (s == r) break;
    }
  }
  return counts;
}

inline WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                           double significance = 0.05) {
  const SignedRanks sr = signed_ranks(x, y);
  WilcoxonResult res;
  res.n = sr.differences.size();
  if (res.n == 0) return res;
  res.small_sample = res.n < 5;
  for (std::size_t i = 0; i < res.n; ++i) (sr.differences[i] > 0 ? res.w_plus : res.w_minus) += sr.ranks[i];
  res.statistic = std::min(res.w_plus, res.w_minus);

  const double nd = static_cast<double>(res.n);
  if (res.n <= kWilcoxonExactMax) {
    const auto counts = exact_doubled_wplus_counts(sr.ranks);
    const double patterns = std::ldexp(1.0, static_cast<int>(res.n));
    const auto observed = static_cast<std::size_t>(std::llround(2.0 * res.w_plus));
    double at_most = 0.0;
    double at_least = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (s <= observed) at_most += counts[s];
      if (s >= observed) at_least += counts[s];
    }
    res.p_less = at_most / patterns;
    res.p_greater = at_least / patterns;
    res.exact = true;
  } else {
    double tie_term = 0.0;
    for (auto t : sr.tie_sizes) tie_term += std::pow(static_cast<double>(t), 3) - static_cast<double>(t);
    const double mean = nd * (nd + 1.0) / 4.0;
    const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
    const double sd = std::sqrt(var);
    const double z_greater = (res.w_plus - mean - 0.5) / sd;
    const double z_less = (res.w_plus - mean + 0.5) / sd;
    res.p_greater = 0.5 * std::erfc(z_greater / std::sqrt(2.0));
    res.p_less = 0.5 * std::erfc(-z_less / std::sqrt(2.0));
    res.exact = false;
  }
  res.p_greater = std::min(1.0, res.p_greater);
  res.p_less = std::min(1.0, res.p_less);
  res.p_two_sided = std::min(1.0, 2.0 * std::min(res.p_greater, res.p_less));
  if (res.p_greater < significance) {
    res.verdict = Verdict::h1a;
  } else if (res.p_less < significance) {
    res.verdict = Verdict::h1b;
  }
  return res;
}

}  // namespace hgrec
