#pragma once

// Simplified comparison recommenders. Each is a pure function of the training
// history, the target PR and k, and lists only candidates with a positive
// score. They are deliberately reduced versions of the published methods:
//
//   AC-s        review comments in a trailing activity window.
//   RevFinder-s mean file-path similarity between the target and each past
//               PR, credited to that PR's reviewers.
//   cHRev-s     per target file: comment share plus recency of the
//               reviewer's last comment on PRs touching that exact file.
//   CN-s        comment-network tie strength between a reviewer and the
//               target's contributor, decayed by interaction age.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hgrec/corpus.hpp"
#include "hgrec/error.hpp"
#include "hgrec/path_similarity.hpp"
#include "hgrec/recommendation.hpp"

namespace hgrec {

enum class BaselineKind { ac, revfinder, chrev, cn };

namespace detail {

inline Recommendation finish(const TargetPR& target, const std::map<std::string, double>& scores,
                             const ReviewCorpus& history, std::size_t k) {
  std::vector<Candidate> scored;
  for (const auto& [dev, s] : scores) {
    if (dev == target.contributor || !(s > 0.0)) continue;
    if (auto it = history.developers().find(dev); it != history.developers().end() && it->second.is_bot) continue;
    scored.push_back({dev, s});
  }
  return rank_candidates(target.id, std::move(scored), history, k);
}

}  // namespace detail

/// Counts each reviewer's review comments posted within `window_days` of the
/// end of the history.
inline Recommendation ac_recommend(const ReviewCorpus& history, const TargetPR& target, std::size_t k,
                                   std::size_t window_days = 90) {
  if (window_days < 1) throw DataError("window_days must be at least 1");
  const Timestamp since = history.t_e() - std::chrono::days{static_cast<long>(window_days)};
  std::map<std::string, double> scores;
  for (const auto& pr : history.prs()) {
    for (const auto& c : pr.comments) {
      if (c.author != pr.contributor && c.created_at >= since) scores[c.author] += 1.0;
    }
  }
  return detail::finish(target, scores, history, k);
}

inline Recommendation revfinder_recommend(const ReviewCorpus& history, const TargetPR& target, std::size_t k,
                                          SimilarityUnit unit = SimilarityUnit::components) {
  if (target.file_paths.empty()) throw DataError("target PR '" + target.id + "' has no changed files");
  std::map<std::string, double> scores;
  for (std::size_t i = 0; i < history.prs().size(); ++i) {
    const auto& pr = history.prs()[i];
    const auto& reviewers = history.reviewers(i);
    if (reviewers.empty()) continue;
    double sum = 0.0;
    for (const auto& ft : target.file_paths) {
      for (const auto& fp : pr.file_paths) sum += path_similarity(ft, fp, unit);
    }
    const double s = sum / (static_cast<double>(target.file_paths.size()) * static_cast<double>(pr.file_paths.size()));
    if (s <= 0.0) continue;
    for (const auto& r : reviewers) scores[r] += s;
  }
  return detail::finish(target, scores, history, k);
}

inline Recommendation chrev_recommend(const ReviewCorpus& history, const TargetPR& target, std::size_t k) {
  if (target.file_paths.empty()) throw DataError("target PR '" + target.id + "' has no changed files");
  const double span = seconds_between(history.t_s(), history.t_e());
  const std::set<std::string> wanted(target.file_paths.begin(), target.file_paths.end());

  struct Expertise {
    std::size_t comments = 0;
    Timestamp last{};
  };
  // file -> reviewer -> expertise, plus file -> total review comments
  std::map<std::string, std::map<std::string, Expertise>> per_file;
  std::map<std::string, std::size_t> totals;
  for (const auto& pr : history.prs()) {
    for (const auto& f : pr.file_paths) {
      if (!wanted.count(f)) continue;
      for (const auto& c : pr.comments) {
        if (c.author == pr.contributor) continue;
        auto& e = per_file[f][c.author];
        ++e.comments;
        e.last = std::max(e.last, c.created_at);
        ++totals[f];
      }
    }
  }
  std::map<std::string, double> scores;
  for (const auto& [file, reviewers] : per_file) {
    const double total = static_cast<double>(totals[file]);
    for (const auto& [dev, e] : reviewers) {
      const double recency = span > 0.0 ? seconds_between(history.t_s(), e.last) / span : 1.0;
      scores[dev] += static_cast<double>(e.comments) / total + recency;
    }
  }
  return detail::finish(target, scores, history, k);
}

/// Directed comment network: r -> a for every PR by a that r commented on.
/// The j-th most recent such PR (0-based) contributes decay^j to the edge.
inline Recommendation cn_recommend(const ReviewCorpus& history, const TargetPR& target, std::size_t k,
                                   double decay = 0.8) {
  if (!(decay > 0.0 && decay <= 1.0)) throw DataError("decay must lie in (0, 1]");
  // (reviewer, contributor) -> creation times of the PRs that link them
  std::map<std::pair<std::string, std::string>, std::vector<Timestamp>> links;
  for (std::size_t i = 0; i < history.prs().size(); ++i) {
    const auto& pr = history.prs()[i];
    if (pr.contributor != target.contributor) {
      if (!history.reviewers(i).count(target.contributor)) continue;
      links[{target.contributor, pr.contributor}].push_back(pr.created_at);
    } else {
      for (const auto& r : history.reviewers(i)) links[{r, pr.contributor}].push_back(pr.created_at);
    }
  }
  std::map<std::string, double> scores;
  for (auto& [key, times] : links) {
    std::sort(times.begin(), times.end(), std::greater<>());
    double w = 0.0;
    double factor = 1.0;
    for (std::size_t j = 0; j < times.size(); ++j, factor *= decay) w += factor;
    const std::string& other = key.first == target.contributor ? key.second : key.first;
    scores[other] += w;
  }
  return detail::finish(target, scores, history, k);
}

inline std::string baseline_label(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::ac: return "AC-s";
    case BaselineKind::revfinder: return "RevFinder-s";
    case BaselineKind::chrev: return "cHRev-s";
    case BaselineKind::cn: return "CN-s";
  }
  return "";
}

}  // namespace hgrec
