#pragma once

// Top-k accuracy, mean reciprocal rank and recommendation distribution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hgrec/error.hpp"

namespace hgrec {

/// One evaluated target: who actually reviewed it and what was recommended.
struct RecommendationRecord {
  std::string target;
  std::set<std::string> ground_truth;
  std::vector<std::string> ranked;  // best first, may be shorter than k
};

namespace detail {

inline void check_records(const std::vector<RecommendationRecord>& records, std::size_t k) {
  if (records.empty()) throw DataError("metric undefined on an empty record set");
  if (k < 1) throw DataError("k must be at least 1");
}

/// 1-based rank of the first correct reviewer within the top k, 0 if none.
inline std::size_t first_hit(const RecommendationRecord& r, std::size_t k) {
  const std::size_t n = std::min(k, r.ranked.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (r.ground_truth.count(r.ranked[i])) return i + 1;
  }
  return 0;
}

}  // namespace detail

inline double acc(const std::vector<RecommendationRecord>& records, std::size_t k) {
  detail::check_records(records, k);
  std::size_t hits = 0;
  for (const auto& r : records) hits += detail::first_hit(r, k) > 0 ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

inline double mrr(const std::vector<RecommendationRecord>& records, std::size_t k) {
  detail::check_records(records, k);
  double sum = 0.0;
  for (const auto& r : records) {
    if (const auto rank = detail::first_hit(r, k); rank > 0) sum += 1.0 / static_cast<double>(rank);
  }
  return sum / static_cast<double>(records.size());
}

/// Normalized entropy of how top-k slots spread over reviewers. The
/// normalizer is log2 of max(n_reviewers, distinct recommended reviewers),
/// which keeps the value in [0, 1].
inline double rd(const std::vector<RecommendationRecord>& records, std::size_t k, std::size_t n_reviewers) {
  detail::check_records(records, k);
  if (n_reviewers < 2) throw DataError("RD needs at least two reviewers");
  std::map<std::string, std::size_t> slots;
  std::size_t total = 0;
  for (const auto& r : records) {
    const std::size_t n = std::min(k, r.ranked.size());
    for (std::size_t i = 0; i < n; ++i) {
      ++slots[r.ranked[i]];
      ++total;
    }
  }
  if (total == 0) return 0.0;
  const std::size_t n = std::max(n_reviewers, slots.size());
  double entropy = 0.0;
  for (const auto& [who, count] : slots) {
    const double p = static_cast<double>(count) / static_cast<double>(total);
    entropy -= p * std::log2(p);
  }
  return std::clamp(entropy / std::log2(static_cast<double>(n)), 0.0, 1.0);
}

}  // namespace hgrec
