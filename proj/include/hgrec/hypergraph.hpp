#pragma once

// Base hypergraph over PR and developer vertices with three weighted
// hyperedge families: PR-Reviewer, PR-Contributor and PR-PR.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hgrec/corpus.hpp"
#include "hgrec/parallel.hpp"
#include "hgrec/params.hpp"
#include "hgrec/path_similarity.hpp"
#include "hgrec/time.hpp"

namespace hgrec {

using VertexIndex = std::uint32_t;

enum class VertexKind { pr, developer };
enum class EdgeKind : std::size_t { pr_reviewer = 0, pr_contributor = 1, pr_pr = 2 };
inline constexpr std::size_t kEdgeKindCount = 3;

inline std::string to_string(VertexKind k) { return k == VertexKind::pr ? "pr" : "developer"; }

inline std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::pr_reviewer: return "pr_reviewer";
    case EdgeKind::pr_contributor: return "pr_contributor";
    case EdgeKind::pr_pr: return "pr_pr";
  }
  return "pr_pr";
}

struct Vertex {
  VertexKind kind;
  std::string ref;
  VertexIndex index;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Hyperedge {
  EdgeKind kind;
  std::vector<VertexIndex> members;  // sorted, unique
  double raw_weight = 0.0;
  double weight = 0.0;

  friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(Timestamp t_s, Timestamp t_e) : t_s_(t_s), t_e_(t_e) {}

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  std::vector<Hyperedge>& mutable_edges() { return edges_; }
  const std::vector<std::size_t>& edges_of(EdgeKind k) const { return by_kind_[static_cast<std::size_t>(k)]; }
  std::pair<Timestamp, Timestamp> corpus_bounds() const { return {t_s_, t_e_}; }
  void set_corpus_bounds(Timestamp t_s, Timestamp t_e) {
    t_s_ = t_s;
    t_e_ = t_e;
  }

  /// Returns the existing vertex for (kind, ref) or appends a new one.
  VertexIndex add_vertex(VertexKind kind, const std::string& ref) {
    auto& lookup = kind == VertexKind::pr ? pr_lookup_ : dev_lookup_;
    auto [it, inserted] = lookup.try_emplace(ref, static_cast<VertexIndex>(vertices_.size()));
    if (inserted) vertices_.push_back({kind, ref, it->second});
    return it->second;
  }

  std::optional<VertexIndex> find(VertexKind kind, const std::string& ref) const {
    const auto& lookup = kind == VertexKind::pr ? pr_lookup_ : dev_lookup_;
    auto it = lookup.find(ref);
    if (it == lookup.end()) return std::nullopt;
    return it->second;
  }

  std::size_t add_edge(EdgeKind kind, std::vector<VertexIndex> members, double raw_weight) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (auto v : members) {
      if (v >= vertices_.size()) throw Error("hyperedge member out of range");
    }
    by_kind_[static_cast<std::size_t>(kind)].push_back(edges_.size());
    edges_.push_back({kind, std::move(members), raw_weight, raw_weight});
    return edges_.size() - 1;
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_ && a.t_s_ == b.t_s_ && a.t_e_ == b.t_e_;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Hyperedge> edges_;
  std::array<std::vector<std::size_t>, kEdgeKindCount> by_kind_;
  std::unordered_map<std::string, VertexIndex> pr_lookup_;
  std::unordered_map<std::string, VertexIndex> dev_lookup_;
  Timestamp t_s_{};
  Timestamp t_e_{};
};

// ---------------------------------------------------------------------------
// Edge weights

namespace detail {

inline void warn_degenerate_span() {
  static std::once_flag once;
  std::call_once(once, [] { std::clog << "warning: corpus spans a single instant; time factors set to 1\n"; });
}

}  // namespace detail

/// PR-Reviewer weight: every reviewer's j-th comment on the PR (ascending
/// time) adds lambda^(j-1) * exp((t - t_e) / (t_e - t_s)).
inline double weight_pr_reviewer(const PullRequest& pr, const std::set<std::string>& reviewers, double lambda,
                                 Timestamp t_s, Timestamp t_e) {
  const double span = seconds_between(t_s, t_e);
  std::unordered_map<std::string_view, int> seen;
  double w = 0.0;
  for (const auto& c : pr.comments) {
    if (!reviewers.count(c.author)) continue;
    const int j = seen[c.author]++;
    const double recency = span > 0.0 ? std::exp(seconds_between(t_e, c.created_at) / span) : 1.0;
    w += std::pow(lambda, j) * recency;
  }
  return w;
}

/// PR-Contributor weight: (t_pr - t_s) / (t_e - t_s).
inline double weight_pr_contributor(Timestamp created_at, Timestamp t_s, Timestamp t_e) {
  const double span = seconds_between(t_s, t_e);
  if (span <= 0.0) {
    detail::warn_degenerate_span();
    return 1.0;
  }
  return seconds_between(t_s, created_at) / span;
}

inline double time_decay(Timestamp t1, Timestamp t2, Timestamp t_s, Timestamp t_e) {
  const double span = seconds_between(t_s, t_e);
  if (span <= 0.0) return 1.0;
  return std::exp(-std::abs(seconds_between(t1, t2)) / span);
}

/// PR-PR weight: mean pairwise path similarity times exp(-|t1 - t2| / (t_e - t_s)).
inline double weight_pr_pr(const PullRequest& p1, const PullRequest& p2, Timestamp t_s, Timestamp t_e,
                           SimilarityUnit unit = SimilarityUnit::components) {
  if (p1.file_paths.empty() || p2.file_paths.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& f1 : p1.file_paths) {
    for (const auto& f2 : p2.file_paths) sum += path_similarity(f1, f2, unit);
  }
  const double pairs = static_cast<double>(p1.file_paths.size()) * static_cast<double>(p2.file_paths.size());
  return sum / pairs * time_decay(p1.created_at, p2.created_at, t_s, t_e);
}

/// MIN-MAX normalization applied per edge kind. A kind whose raw weights are
/// all equal maps to 1.0.
inline void normalize_weights(Hypergraph& graph) {
  auto& edges = graph.mutable_edges();
  for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
    const auto& ids = graph.edges_of(static_cast<EdgeKind>(k));
    if (ids.empty()) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (auto id : ids) {
      lo = std::min(lo, edges[id].raw_weight);
      hi = std::max(hi, edges[id].raw_weight);
    }
    for (auto id : ids) {
      edges[id].weight = hi > lo ? (edges[id].raw_weight - lo) / (hi - lo) : 1.0;
    }
  }
}

// ---------------------------------------------------------------------------
// PR-PR neighbour selection

/// Tokenized file sets of every PR in a corpus, in corpus order.
class PrPathIndex {
 public:
  PrPathIndex(const ReviewCorpus& corpus, SimilarityUnit unit) : table_(unit) {
    file_sets_.reserve(corpus.prs().size());
    for (const auto& pr : corpus.prs()) {
      TokenizedFileSet set;
      for (const auto& f : pr.file_paths) set.push_back(table_.tokenize(f));
      file_sets_.push_back(std::move(set));
    }
  }

  const TokenizedFileSet& file_set(std::size_t pr) const { return file_sets_[pr]; }
  std::size_t size() const { return file_sets_.size(); }

  /// Tokenizes paths of a PR outside the corpus. Components unseen in the
  /// corpus get ids that match nothing in it.
  TokenizedFileSet tokenize_external(const std::vector<std::string>& paths) const {
    TokenizedFileSet out;
    for (const auto& p : paths) out.push_back(table_.tokenize_known(p));
    return out;
  }

 private:
  PathTable table_;
  std::vector<TokenizedFileSet> file_sets_;
};

struct NeighbourCandidate {
  std::size_t pr;  // corpus position
  double raw_weight;
};

/// Keeps the m largest candidates. Ties go to the older PR, then the
/// lexicographically smaller PR id.
inline std::vector<NeighbourCandidate> select_top_m(std::vector<NeighbourCandidate> candidates, std::size_t m,
                                                    const ReviewCorpus& corpus) {
  auto better = [&](const NeighbourCandidate& a, const NeighbourCandidate& b) {
    if (a.raw_weight != b.raw_weight) return a.raw_weight > b.raw_weight;
    const auto& pa = corpus.prs()[a.pr];
    const auto& pb = corpus.prs()[b.pr];
    if (pa.created_at != pb.created_at) return pa.created_at < pb.created_at;
    return pa.id < pb.id;
  };
  if (candidates.size() > m) {
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(m), candidates.end(),
                      better);
    candidates.resize(m);
  } else {
    std::sort(candidates.begin(), candidates.end(), better);
  }
  return candidates;
}

/// Non-zero PR-PR candidates between an arbitrary file set/time and every
/// corpus PR except `skip`.
inline std::vector<NeighbourCandidate> pr_pr_candidates(const PrPathIndex& index, const ReviewCorpus& corpus,
                                                        const TokenizedFileSet& files, Timestamp created_at,
                                                        Timestamp t_s, Timestamp t_e,
                                                        std::optional<std::size_t> skip = std::nullopt) {
  std::vector<NeighbourCandidate> out;
  for (std::size_t j = 0; j < index.size(); ++j) {
    if (skip && *skip == j) continue;
    const double sim = mean_file_similarity(files, index.file_set(j));
    if (sim <= 0.0) continue;
    const double w = sim * time_decay(created_at, corpus.prs()[j].created_at, t_s, t_e);
    if (w > 0.0) out.push_back({j, w});
  }
  return out;
}

/// Builds the base hypergraph from a cleaned corpus.
inline Hypergraph build(const ReviewCorpus& corpus, const HyperParams& params, std::size_t jobs = 1) {
  params.validate();
  const Timestamp t_s = corpus.t_s();
  const Timestamp t_e = corpus.t_e();
  Hypergraph g(t_s, t_e);
  const auto& prs = corpus.prs();

  std::vector<VertexIndex> pr_vertex(prs.size());
  for (std::size_t i = 0; i < prs.size(); ++i) {
    const auto& pr = prs[i];
    pr_vertex[i] = g.add_vertex(VertexKind::pr, pr.id);
    const VertexIndex contributor = g.add_vertex(VertexKind::developer, pr.contributor);
    const auto& reviewers = corpus.reviewers(i);
    std::vector<VertexIndex> members{pr_vertex[i]};
    for (const auto& r : reviewers) members.push_back(g.add_vertex(VertexKind::developer, r));

    g.add_edge(EdgeKind::pr_contributor, {pr_vertex[i], contributor}, weight_pr_contributor(pr.created_at, t_s, t_e));
    if (!reviewers.empty()) {
      g.add_edge(EdgeKind::pr_reviewer, std::move(members),
                 weight_pr_reviewer(pr, reviewers, params.lambda, t_s, t_e));
    }
  }

  const PrPathIndex index(corpus, params.similarity_unit);
  std::vector<std::vector<NeighbourCandidate>> chosen(prs.size());
  parallel_for(prs.size(), jobs, [&](std::size_t i) {
    chosen[i] = select_top_m(pr_pr_candidates(index, corpus, index.file_set(i), prs[i].created_at, t_s, t_e, i),
                             params.m, corpus);
  });

  // One undirected edge per pair selected by either endpoint; the weight is
  // evaluated from the lower corpus position so it does not depend on which
  // side selected it.
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < prs.size(); ++i) {
    for (const auto& c : chosen[i]) pairs.emplace(std::min(i, c.pr), std::max(i, c.pr));
  }
  for (const auto& [a, b] : pairs) {
    const double sim = mean_file_similarity(index.file_set(a), index.file_set(b));
    g.add_edge(EdgeKind::pr_pr, {pr_vertex[a], pr_vertex[b]},
               sim * time_decay(prs[a].created_at, prs[b].created_at, t_s, t_e));
  }

  normalize_weights(g);
  return g;
}

/// Vertex table + edge table, stable across runs for identical input.
inline nlohmann::json to_json(const Hypergraph& g) {
  nlohmann::json vertices = nlohmann::json::array();
  for (const auto& v : g.vertices()) {
    vertices.push_back({{"index", v.index}, {"kind", to_string(v.kind)}, {"ref", v.ref}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    edges.push_back(
        {{"kind", to_string(e.kind)}, {"members", e.members}, {"raw_weight", e.raw_weight}, {"weight", e.weight}});
  }
  const auto [t_s, t_e] = g.corpus_bounds();
  return {{"t_s", format_rfc3339(t_s)}, {"t_e", format_rfc3339(t_e)}, {"vertices", vertices}, {"edges", edges}};
}

}  // namespace hgrec
