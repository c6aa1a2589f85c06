#pragma once

// Review-history data model, JSONL export parsing and the cleaning rules that
// turn a raw export into a ReviewCorpus.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "hgrec/error.hpp"
#include "hgrec/time.hpp"

namespace hgrec {

enum class PrState { merged, closed, open };

inline std::string to_string(PrState s) {
  switch (s) {
    case PrState::merged: return "merged";
    case PrState::closed: return "closed";
    case PrState::open: return "open";
  }
  return "open";
}

inline std::optional<PrState> parse_pr_state(std::string_view s) {
  if (s == "merged") return PrState::merged;
  if (s == "closed") return PrState::closed;
  if (s == "open") return PrState::open;
  return std::nullopt;
}

struct Developer {
  std::string id;
  bool is_bot = false;

  friend bool operator==(const Developer&, const Developer&) = default;
};

struct ReviewComment {
  std::string author;
  Timestamp created_at;

  friend bool operator==(const ReviewComment&, const ReviewComment&) = default;
};

struct PullRequest {
  std::string id;
  std::string contributor;
  Timestamp created_at;
  std::vector<std::string> file_paths;  // sorted, unique
  std::vector<ReviewComment> comments;  // ascending by created_at after cleaning
  PrState state = PrState::merged;

  friend bool operator==(const PullRequest&, const PullRequest&) = default;
};

struct CorpusStats {
  std::size_t prs = 0;
  std::size_t comments = 0;
  std::size_t reviewers = 0;
  std::size_t contributors = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Distinct comment authors of a PR minus its contributor.
inline std::set<std::string> reviewers_of(const PullRequest& pr) {
  std::set<std::string> out;
  for (const auto& c : pr.comments) {
    if (c.author != pr.contributor) out.insert(c.author);
  }
  return out;
}

/// A cleaned, chronologically ordered review history. Immutable once built.
class ReviewCorpus {
 public:
  ReviewCorpus() = default;

  /// Builds a corpus from already-cleaned PRs: sorts PRs and comments,
  /// computes the time bounds and the developer index.
  static ReviewCorpus from_prs(std::vector<PullRequest> prs) {
    if (prs.empty()) throw DataError("empty corpus: no pull requests left after cleaning");
    for (auto& pr : prs) {
      std::stable_sort(pr.comments.begin(), pr.comments.end(),
                       [](const ReviewComment& a, const ReviewComment& b) { return a.created_at < b.created_at; });
    }
    std::stable_sort(prs.begin(), prs.end(),
                     [](const PullRequest& a, const PullRequest& b) { return a.created_at < b.created_at; });

    ReviewCorpus c;
    c.prs_ = std::move(prs);
    c.t_s_ = c.prs_.front().created_at;
    c.t_e_ = c.prs_.front().created_at;
    for (std::size_t i = 0; i < c.prs_.size(); ++i) {
      const auto& pr = c.prs_[i];
      if (!c.index_.emplace(pr.id, i).second) throw DataError("duplicate pull request id '" + pr.id + "'");
      c.t_s_ = std::min(c.t_s_, pr.created_at);
      c.t_e_ = std::max(c.t_e_, pr.created_at);
      c.developers_.try_emplace(pr.contributor, Developer{pr.contributor, false});
      for (const auto& cm : pr.comments) {
        c.t_s_ = std::min(c.t_s_, cm.created_at);
        c.t_e_ = std::max(c.t_e_, cm.created_at);
        c.developers_.try_emplace(cm.author, Developer{cm.author, false});
      }
      c.reviewers_.push_back(reviewers_of(pr));
      for (const auto& cm : pr.comments) {
        if (cm.author != pr.contributor) ++c.review_comment_counts_[cm.author];
      }
    }
    return c;
  }

  const std::vector<PullRequest>& prs() const { return prs_; }
  Timestamp t_s() const { return t_s_; }
  Timestamp t_e() const { return t_e_; }
  const std::map<std::string, Developer>& developers() const { return developers_; }

  /// R_i of the PR at corpus position i.
  const std::set<std::string>& reviewers(std::size_t i) const { return reviewers_.at(i); }

  std::optional<std::size_t> find(const std::string& pr_id) const {
    auto it = index_.find(pr_id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Number of comments a developer left on other people's PRs.
  std::size_t review_comment_count(const std::string& dev) const {
    auto it = review_comment_counts_.find(dev);
    return it == review_comment_counts_.end() ? 0 : it->second;
  }

  /// Developers that appear in at least one R_i.
  std::set<std::string> all_reviewers() const {
    std::set<std::string> out;
    for (const auto& r : reviewers_) out.insert(r.begin(), r.end());
    return out;
  }

  CorpusStats stats() const {
    CorpusStats s;
    s.prs = prs_.size();
    std::set<std::string> contributors;
    for (const auto& pr : prs_) {
      s.comments += pr.comments.size();
      contributors.insert(pr.contributor);
    }
    s.reviewers = all_reviewers().size();
    s.contributors = contributors.size();
    return s;
  }

  /// History visible strictly before `cut`: PRs created before it, with only
  /// the comments posted before it. Throws DataError when nothing remains.
  ReviewCorpus before(Timestamp cut) const {
    std::vector<PullRequest> kept;
    for (const auto& pr : prs_) {
      if (pr.created_at >= cut) break;
      PullRequest p = pr;
      std::erase_if(p.comments, [&](const ReviewComment& c) { return c.created_at >= cut; });
      kept.push_back(std::move(p));
    }
    return from_prs(std::move(kept));
  }

  friend bool operator==(const ReviewCorpus& a, const ReviewCorpus& b) {
    return a.prs_ == b.prs_ && a.t_s_ == b.t_s_ && a.t_e_ == b.t_e_ && a.developers_ == b.developers_;
  }

 private:
  std::vector<PullRequest> prs_;
  Timestamp t_s_{};
  Timestamp t_e_{};
  std::map<std::string, Developer> developers_;
  std::vector<std::set<std::string>> reviewers_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> review_comment_counts_;
};

/// PR id -> R_i for every PR of a cleaned corpus.
inline std::map<std::string, std::set<std::string>> reviewer_sets(const ReviewCorpus& corpus) {
  std::map<std::string, std::set<std::string>> out;
  for (std::size_t i = 0; i < corpus.prs().size(); ++i) out[corpus.prs()[i].id] = corpus.reviewers(i);
  return out;
}

// ---------------------------------------------------------------------------
// JSONL export parsing

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& message)
      : DataError("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParseOptions {
  /// Stop at the first bad record instead of skipping and counting it.
  bool fail_fast = true;
};

struct ParseResult {
  std::vector<PullRequest> prs;
  std::vector<RecordError> errors;
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) throw DataError(std::string("missing required field \"") + field + "\"");
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* field) {
  const auto& v = require(obj, field);
  if (v.is_string()) return v.get<std::string>();
  throw DataError(std::string("field \"") + field + "\" must be a string");
}

inline PullRequest parse_record(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("record is not a JSON object");
  PullRequest pr;
  const auto& id = require(j, "id");
  if (id.is_string()) {
    pr.id = id.get<std::string>();
  } else if (id.is_number_integer()) {
    pr.id = std::to_string(id.get<long long>());
  } else {
    throw DataError("field \"id\" must be a string or integer");
  }
  pr.contributor = require_string(j, "contributor");
  if (pr.id.empty()) throw DataError("field \"id\" is empty");
  if (pr.contributor.empty()) throw DataError("field \"contributor\" is empty");
  pr.created_at = parse_rfc3339(require_string(j, "created_at"));
  const auto state = parse_pr_state(require_string(j, "state"));
  if (!state) throw DataError("field \"state\" must be merged, closed or open");
  pr.state = *state;

  const auto& files = require(j, "files");
  if (!files.is_array()) throw DataError("field \"files\" must be an array");
  std::set<std::string> unique;
  for (const auto& f : files) {
    if (!f.is_string() || f.get_ref<const std::string&>().empty())
      throw DataError("field \"files\" must hold non-empty strings");
    unique.insert(f.get<std::string>());
  }
  pr.file_paths.assign(unique.begin(), unique.end());

  if (auto it = j.find("comments"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw DataError("field \"comments\" must be an array");
    for (const auto& c : *it) {
      if (!c.is_object()) throw DataError("comment is not a JSON object");
      ReviewComment rc{require_string(c, "author"), parse_rfc3339(require_string(c, "created_at"))};
      if (rc.author.empty()) throw DataError("comment field \"author\" is empty");
      pr.comments.push_back(std::move(rc));
    }
  }
  return pr;
}

}  // namespace detail

/// Reads one PR per non-blank line. Input order is preserved.
inline ParseResult parse_export(std::istream& in, const ParseOptions& options = {}) {
  ParseResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      PullRequest pr = detail::parse_record(j);
      if (!seen_ids.insert(pr.id).second) throw DataError("duplicate pull request id '" + pr.id + "'");
      result.prs.push_back(std::move(pr));
    } catch (const nlohmann::json::exception& e) {
      if (options.fail_fast) throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
      result.errors.push_back({line_no, std::string("malformed JSON: ") + e.what()});
    } catch (const DataError& e) {
      if (options.fail_fast) throw ParseError(line_no, e.what());
      result.errors.push_back({line_no, e.what()});
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Cleaning

struct CleanOptions {
  /// ECMAScript regexes searched against account ids.
  std::vector<std::string> bot_patterns{R"(\[bot\]$)"};
  /// Reviewers need comments on at least this many distinct PRs.
  std::size_t min_reviews = 2;
  /// Accounts to drop entirely (e.g. deleted accounts).
  std::vector<std::string> excluded_accounts;
};

/// Applies the data-cleaning rules in order: open PRs, bot/excluded
/// contributors and commenters, PRs without files, then one pass of the
/// reviewer-activity threshold.
inline ReviewCorpus clean(std::vector<PullRequest> raw, const CleanOptions& options = {}) {
  std::vector<std::regex> bots;
  for (const auto& p : options.bot_patterns) {
    try {
      bots.emplace_back(p, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw DataError("invalid bot pattern '" + p + "': " + e.what());
    }
  }
  const std::unordered_set<std::string> excluded(options.excluded_accounts.begin(),
                                                 options.excluded_accounts.end());
  std::unordered_map<std::string, bool> drop_cache;
  auto dropped_account = [&](const std::string& id) {
    auto [it, inserted] = drop_cache.try_emplace(id, false);
    if (inserted) {
      it->second = excluded.count(id) > 0 ||
                   std::any_of(bots.begin(), bots.end(), [&](const std::regex& r) { return std::regex_search(id, r); });
    }
    return it->second;
  };

  std::vector<PullRequest> kept;
  for (auto& pr : raw) {
    if (pr.state == PrState::open) continue;
    if (dropped_account(pr.contributor)) continue;
    if (pr.file_paths.empty()) continue;
    std::erase_if(pr.comments, [&](const ReviewComment& c) { return dropped_account(c.author); });
    kept.push_back(std::move(pr));
  }

  std::unordered_map<std::string, std::size_t> reviewed_prs;
  for (const auto& pr : kept) {
    for (const auto& r : reviewers_of(pr)) ++reviewed_prs[r];
  }
  for (auto& pr : kept) {
    std::erase_if(pr.comments, [&](const ReviewComment& c) {
      auto it = reviewed_prs.find(c.author);
      return (it == reviewed_prs.end() ? 0 : it->second) < options.min_reviews;
    });
  }
  return ReviewCorpus::from_prs(std::move(kept));
}

}  // namespace hgrec
