#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hgrec/corpus.hpp"
#include "hgrec/error.hpp"
#include "hgrec/time.hpp"

namespace hgrec {

/// A PR awaiting reviewers.
struct TargetPR {
  std::string id;
  std::string contributor;
  Timestamp created_at;
  std::vector<std::string> file_paths;

  static TargetPR from(const PullRequest& pr) { return {pr.id, pr.contributor, pr.created_at, pr.file_paths}; }
};

struct Candidate {
  std::string developer;
  double score = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Recommendation {
  std::string target;
  std::size_t k = 0;
  std::vector<Candidate> candidates;
  /// Set when fewer than k candidates were available.
  bool short_list = false;
};

/// Relative tolerance under which two scores count as tied.
inline constexpr double kScoreTieTolerance = 1e-12;

inline bool scores_tied(double a, double b) {
  return std::abs(a - b) <= kScoreTieTolerance * std::max(std::abs(a), std::abs(b));
}

/// Orders scored developers by descending score and truncates to k. Runs of
/// tied scores are ordered by historical review-comment count (descending),
/// then id, and share the run's leading score.
inline Recommendation rank_candidates(std::string target, std::vector<Candidate> scored, const ReviewCorpus& history,
                                      std::size_t k) {
  if (k < 1) throw DataError("k must be at least 1");
  std::sort(scored.begin(), scored.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.developer < b.developer;
  });
  auto tie_order = [&](const Candidate& a, const Candidate& b) {
    const auto ca = history.review_comment_count(a.developer);
    const auto cb = history.review_comment_count(b.developer);
    if (ca != cb) return ca > cb;
    return a.developer < b.developer;
  };
  for (std::size_t begin = 0; begin < scored.size();) {
    std::size_t end = begin + 1;
    while (end < scored.size() && scores_tied(scored[end - 1].score, scored[end].score)) ++end;
    if (end - begin > 1) {
      const double lead = scored[begin].score;
      std::sort(scored.begin() + static_cast<std::ptrdiff_t>(begin), scored.begin() + static_cast<std::ptrdiff_t>(end),
                tie_order);
      for (std::size_t i = begin; i < end; ++i) scored[i].score = lead;
    }
    begin = end;
  }
  Recommendation rec;
  rec.target = std::move(target);
  rec.k = k;
  rec.short_list = scored.size() < k;
  if (scored.size() > k) scored.resize(k);
  rec.candidates = std::move(scored);
  return rec;
}

}  // namespace hgrec
