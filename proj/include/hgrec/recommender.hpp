#pragma once

// Hypergraph-based recommendation for a single target PR: graft the target
// onto the base graph, seed the query at the target and its contributor,
// rank, and keep the best-scored developers.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hgrec/corpus.hpp"
#include "hgrec/hypergraph.hpp"
#include "hgrec/params.hpp"
#include "hgrec/ranker.hpp"
#include "hgrec/recommendation.hpp"

namespace hgrec {

/// Returns base + the target PR vertex, its contributor (reused when known),
/// one PR-Contributor edge and the target's top-m PR-PR edges. The time
/// bounds extend to cover the target. `index` may be passed to reuse a
/// tokenization of `corpus`.
inline Hypergraph graft(const Hypergraph& base, const ReviewCorpus& corpus, const TargetPR& target,
                        const HyperParams& params, const PrPathIndex* index = nullptr) {
  params.validate();
  if (target.file_paths.empty()) throw DataError("target PR '" + target.id + "' has no changed files");
  if (target.contributor.empty()) throw DataError("target PR '" + target.id + "' has no contributor");
  if (base.find(VertexKind::pr, target.id)) throw DataError("target PR '" + target.id + "' is already in the graph");

  std::unique_ptr<PrPathIndex> owned;
  if (index == nullptr) {
    owned = std::make_unique<PrPathIndex>(corpus, params.similarity_unit);
    index = owned.get();
  }

  Hypergraph g = base;
  const auto [t_s, base_t_e] = base.corpus_bounds();
  const Timestamp t_e = std::max(base_t_e, target.created_at);
  g.set_corpus_bounds(t_s, t_e);

  const VertexIndex pr_vertex = g.add_vertex(VertexKind::pr, target.id);
  const VertexIndex contributor = g.add_vertex(VertexKind::developer, target.contributor);
  g.add_edge(EdgeKind::pr_contributor, {pr_vertex, contributor}, weight_pr_contributor(target.created_at, t_s, t_e));

  const TokenizedFileSet files = index->tokenize_external(target.file_paths);
  const auto chosen =
      select_top_m(pr_pr_candidates(*index, corpus, files, target.created_at, t_s, t_e), params.m, corpus);
  for (const auto& c : chosen) {
    const auto other = g.find(VertexKind::pr, corpus.prs()[c.pr].id);
    if (!other) throw Error("corpus PR missing from base graph: " + corpus.prs()[c.pr].id);
    g.add_edge(EdgeKind::pr_pr, {pr_vertex, *other}, c.raw_weight);
  }
  normalize_weights(g);
  return g;
}

/// Indicator of the target PR vertex and its contributor's vertex.
inline QueryVector query_vector(const Hypergraph& graph, const TargetPR& target) {
  const auto pr = graph.find(VertexKind::pr, target.id);
  const auto dev = graph.find(VertexKind::developer, target.contributor);
  if (!pr || !dev) throw DataError("target PR '" + target.id + "' has not been grafted");
  return QueryVector::indicator(graph.vertices().size(), {*pr, *dev});
}

/// Developer vertices other than the target's contributor and bots, scored by f*.
inline std::vector<Candidate> developer_scores(const Hypergraph& graph, const ReviewCorpus& corpus,
                                               const TargetPR& target, const Eigen::VectorXd& f) {
  std::vector<Candidate> out;
  for (const auto& v : graph.vertices()) {
    if (v.kind != VertexKind::developer || v.ref == target.contributor) continue;
    if (auto it = corpus.developers().find(v.ref); it != corpus.developers().end() && it->second.is_bot) continue;
    out.push_back({v.ref, f[v.index]});
  }
  return out;
}

/// Top-k reviewers for one target PR.
inline Recommendation recommend(const Hypergraph& base, const ReviewCorpus& corpus, const TargetPR& target,
                                const HyperParams& params, std::size_t k, const PrPathIndex* index = nullptr) {
  if (k < 1) throw DataError("k must be at least 1");
  const Hypergraph g = graft(base, corpus, target, params, index);
  const RankingSystem sys = assemble(g, params.alpha);
  const RankingVector f = solve(sys, query_vector(g, target), params);
  return rank_candidates(target.id, developer_scores(g, corpus, target, f.f), corpus, k);
}

/// A base graph trained on one history, reusable across many targets.
class HgRecModel {
 public:
  HgRecModel(std::shared_ptr<const ReviewCorpus> corpus, HyperParams params, std::size_t jobs = 1)
      : corpus_(std::move(corpus)),
        params_(params),
        base_(build(*corpus_, params_, jobs)),
        index_(*corpus_, params_.similarity_unit) {}

  const Hypergraph& base() const { return base_; }
  const ReviewCorpus& corpus() const { return *corpus_; }

  Recommendation recommend(const TargetPR& target, std::size_t k) const {
    return hgrec::recommend(base_, *corpus_, target, params_, k, &index_);
  }

 private:
  std::shared_ptr<const ReviewCorpus> corpus_;
  HyperParams params_;
  Hypergraph base_;
  PrPathIndex index_;
};

}  // namespace hgrec
