#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hgrec/hypergraph.hpp"
#include "oracles/naive.hpp"
#include "oracles/random_instances.hpp"

using namespace hgrec;

namespace {

constexpr long long kStart = 1546300800;

PullRequest pr_at(std::string id, std::string contributor, long long t, std::vector<std::string> files,
                  std::vector<ReviewComment> comments = {}) {
  PullRequest pr;
  pr.id = std::move(id);
  pr.contributor = std::move(contributor);
  pr.created_at = from_epoch_seconds(t);
  pr.file_paths = std::move(files);
  pr.comments = std::move(comments);
  return pr;
}

ReviewComment comment(std::string who, long long t) { return {std::move(who), from_epoch_seconds(t)}; }

std::size_t count_kind(const Hypergraph& g, EdgeKind k) { return g.edges_of(k).size(); }

}  // namespace

TEST(PathSimilarity, Examples) {
  EXPECT_DOUBLE_EQ(path_similarity("src/a/x.c", "src/a/x.c"), 1.0);
  EXPECT_NEAR(path_similarity("src/a/x.c", "src/a/y.c"), 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(path_similarity("src/x.c", "docs/y.md"), 0.0);
  EXPECT_NEAR(path_similarity("src/x.c", "src/y.c", SimilarityUnit::chars), 4.0 / 7.0, 1e-15);
}

TEST(PathSimilarity, SymmetricAndOneOnlyWhenIdentical) {
  testgen::Rng rng(3);
  const std::vector<std::string> parts{"a", "b", "src", "x.c", "y"};
  for (int i = 0; i < 300; ++i) {
    auto path = [&] {
      std::string p;
      const int n = testgen::uniform_int(rng, 1, 4);
      for (int k = 0; k < n; ++k) p += (k ? "/" : "") + parts[testgen::uniform_int(rng, 0, 4)];
      return p;
    };
    const auto a = path();
    const auto b = path();
    EXPECT_EQ(path_similarity(a, b), path_similarity(b, a));
    EXPECT_EQ(path_similarity(a, b) == 1.0, split_path(a) == split_path(b));
  }
}

TEST(Weights, PrReviewerExamples) {
  const long long ts = kStart, te = kStart + 1000;
  auto pr = pr_at("p", "a", ts, {"x"}, {comment("b", te)});
  EXPECT_NEAR(weight_pr_reviewer(pr, {"b"}, 0.8, from_epoch_seconds(ts), from_epoch_seconds(te)), 1.0, 1e-15);
  pr.comments = {comment("b", te), comment("b", te)};
  EXPECT_NEAR(weight_pr_reviewer(pr, {"b"}, 0.8, from_epoch_seconds(ts), from_epoch_seconds(te)), 1.8, 1e-15);
  pr.comments = {comment("b", ts)};
  EXPECT_NEAR(weight_pr_reviewer(pr, {"b"}, 0.8, from_epoch_seconds(ts), from_epoch_seconds(te)), std::exp(-1.0), 1e-15);
}

TEST(Weights, PrReviewerMonotoneInComments) {
  const long long ts = kStart, te = kStart + 5000;
  auto pr = pr_at("p", "a", ts, {"x"});
  double last = 0.0;
  for (int i = 0; i < 10; ++i) {
    pr.comments.push_back(comment("b", ts + 100 * i));
    const double w = weight_pr_reviewer(pr, {"b"}, 0.7, from_epoch_seconds(ts), from_epoch_seconds(te));
    EXPECT_GT(w, last);
    last = w;
  }
}

TEST(Weights, PrContributorExamples) {
  const auto ts = from_epoch_seconds(kStart), te = from_epoch_seconds(kStart + 200);
  EXPECT_DOUBLE_EQ(weight_pr_contributor(te, ts, te), 1.0);
  EXPECT_DOUBLE_EQ(weight_pr_contributor(ts, ts, te), 0.0);
  EXPECT_DOUBLE_EQ(weight_pr_contributor(from_epoch_seconds(kStart + 100), ts, te), 0.5);
  EXPECT_DOUBLE_EQ(weight_pr_contributor(ts, ts, ts), 1.0);
}

TEST(Weights, PrPrExamples) {
  const long long ts = kStart, te = kStart + 1000;
  const auto a = pr_at("a", "x", ts, {"src/a/x.c"});
  const auto b = pr_at("b", "x", ts, {"src/a/x.c"});
  const auto c = pr_at("c", "x", te, {"src/a/x.c"});
  const auto d = pr_at("d", "x", ts, {"docs/y.md"});
  const auto s = from_epoch_seconds(ts), e = from_epoch_seconds(te);
  EXPECT_DOUBLE_EQ(weight_pr_pr(a, b, s, e), 1.0);
  EXPECT_NEAR(weight_pr_pr(a, c, s, e), std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(weight_pr_pr(a, d, s, e), 0.0);
  EXPECT_DOUBLE_EQ(weight_pr_pr(a, c, s, e), weight_pr_pr(c, a, s, e));
}

TEST(Weights, MatchNaiveOracle) {
  testgen::Rng rng(17);
  const std::vector<std::string> parts{"src", "lib", "a", "b", "x.c", "y.c"};
  for (int i = 0; i < 200; ++i) {
    const long long ts = kStart, te = kStart + testgen::uniform_int(rng, 1, 100000);
    auto rand_t = [&] { return ts + testgen::uniform_int(rng, 0, int(te - ts)); };
    std::vector<oracle::Comment> oc;
    PullRequest pr = pr_at("p", "a", ts, {"x"});
    const int nc = testgen::uniform_int(rng, 0, 8);
    for (int k = 0; k < nc; ++k) oc.push_back({"r" + std::to_string(testgen::uniform_int(rng, 0, 3)), rand_t()});
    for (const auto& c : oc) pr.comments.push_back(comment(c.who, c.t));
    std::stable_sort(pr.comments.begin(), pr.comments.end(),
                     [](const auto& x, const auto& y) { return x.created_at < y.created_at; });
    const std::set<std::string> rs{"r0", "r1", "r2"};
    const double lambda = testgen::uniform_real(rng, 0.01, 1.0);
    EXPECT_NEAR(weight_pr_reviewer(pr, rs, lambda, from_epoch_seconds(ts), from_epoch_seconds(te)),
                oracle::pr_reviewer(oc, {"r0", "r1", "r2"}, lambda, ts, te), 1e-12);

    auto files = [&] {
      std::vector<std::string> f;
      const int n = testgen::uniform_int(rng, 1, 3);
      for (int k = 0; k < n; ++k) {
        std::string p;
        const int depth = testgen::uniform_int(rng, 1, 4);
        for (int q = 0; q < depth; ++q) p += (q ? "/" : "") + parts[testgen::uniform_int(rng, 0, 5)];
        f.push_back(p);
      }
      return f;
    };
    const auto f1 = files(), f2 = files();
    const long long t1 = rand_t(), t2 = rand_t();
    for (bool chars : {false, true}) {
      const auto unit = chars ? SimilarityUnit::chars : SimilarityUnit::components;
      EXPECT_NEAR(weight_pr_pr(pr_at("1", "a", t1, f1), pr_at("2", "a", t2, f2), from_epoch_seconds(ts),
                               from_epoch_seconds(te), unit),
                  oracle::pr_pr(f1, t1, f2, t2, ts, te, chars), 1e-12);
    }
  }
}

TEST(Normalize, Examples) {
  Hypergraph g;
  for (int i = 0; i < 4; ++i) g.add_vertex(VertexKind::pr, std::to_string(i));
  g.add_edge(EdgeKind::pr_pr, {0, 1}, 2);
  g.add_edge(EdgeKind::pr_pr, {1, 2}, 4);
  g.add_edge(EdgeKind::pr_pr, {2, 3}, 6);
  g.add_edge(EdgeKind::pr_contributor, {0, 3}, 0.3);
  normalize_weights(g);
  EXPECT_DOUBLE_EQ(g.edges()[0].weight, 0.0);
  EXPECT_DOUBLE_EQ(g.edges()[1].weight, 0.5);
  EXPECT_DOUBLE_EQ(g.edges()[2].weight, 1.0);
  EXPECT_DOUBLE_EQ(g.edges()[3].weight, 1.0);
  EXPECT_TRUE(g.edges_of(EdgeKind::pr_reviewer).empty());
}

TEST(Build, SmallestInstance) {
  const auto c = ReviewCorpus::from_prs(
      {pr_at("p", "A", kStart, {"x.c"}, {comment("B", kStart + 10), comment("C", kStart + 20)})});
  const auto g = build(c, {});
  EXPECT_EQ(g.vertices().size(), 4u);
  ASSERT_EQ(count_kind(g, EdgeKind::pr_contributor), 1u);
  ASSERT_EQ(count_kind(g, EdgeKind::pr_reviewer), 1u);
  EXPECT_EQ(count_kind(g, EdgeKind::pr_pr), 0u);
  EXPECT_EQ(g.edges()[g.edges_of(EdgeKind::pr_reviewer)[0]].members.size(), 3u);
}

TEST(Build, DeveloperWithTwoRolesIsOneVertex) {
  const auto c = ReviewCorpus::from_prs({pr_at("1", "A", kStart, {"x.c"}, {comment("B", kStart + 10)}),
                                         pr_at("2", "B", kStart + 50, {"x.c"}, {comment("A", kStart + 60)})});
  const auto g = build(c, {});
  EXPECT_EQ(g.vertices().size(), 4u);
  for (std::size_t i = 0; i < g.vertices().size(); ++i) EXPECT_EQ(g.vertices()[i].index, i);
}

TEST(Build, IdenticalFileSetsGiveOnePrPrEdge) {
  const auto c = ReviewCorpus::from_prs({pr_at("1", "A", kStart, {"x.c", "y.c"}), pr_at("2", "A", kStart + 5, {"x.c", "y.c"})});
  EXPECT_EQ(count_kind(build(c, {}), EdgeKind::pr_pr), 1u);
}

TEST(Build, TopMCapAndDeterminism) {
  std::vector<PullRequest> prs;
  for (int i = 0; i < 12; ++i) prs.push_back(pr_at("p" + std::to_string(i), "A", kStart + i * 100, {"src/x.c"}));
  const auto c = ReviewCorpus::from_prs(prs);
  HyperParams p;
  p.m = 10;
  const auto g = build(c, p);
  // each PR selects at most 10; the union can hold at most 12*10 pairs but no more than C(12,2)
  EXPECT_LE(count_kind(g, EdgeKind::pr_pr), 66u);
  EXPECT_EQ(build(c, p), g);
  EXPECT_EQ(build(c, p, 4), g);
  p.m = 1;
  EXPECT_LE(count_kind(build(c, p), EdgeKind::pr_pr), 12u);
}

TEST(Build, TopMMatchesFullSort) {
  testgen::Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = testgen::random_corpus(rng, testgen::uniform_int(rng, 2, 20));
    HyperParams p;
    p.m = static_cast<std::size_t>(testgen::uniform_int(rng, 1, 6));
    const PrPathIndex index(c, p.similarity_unit);
    for (std::size_t i = 0; i < c.prs().size(); ++i) {
      auto all = pr_pr_candidates(index, c, index.file_set(i), c.prs()[i].created_at, c.t_s(), c.t_e(), i);
      auto full = all;
      std::sort(full.begin(), full.end(), [&](const auto& a, const auto& b) {
        if (a.raw_weight != b.raw_weight) return a.raw_weight > b.raw_weight;
        if (c.prs()[a.pr].created_at != c.prs()[b.pr].created_at) return c.prs()[a.pr].created_at < c.prs()[b.pr].created_at;
        return c.prs()[a.pr].id < c.prs()[b.pr].id;
      });
      if (full.size() > p.m) full.resize(p.m);
      const auto top = select_top_m(all, p.m, c);
      ASSERT_EQ(top.size(), full.size());
      for (std::size_t k = 0; k < top.size(); ++k) EXPECT_EQ(top[k].pr, full[k].pr);
    }
  }
}

TEST(Build, GraphInvariants) {
  testgen::Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = testgen::random_corpus(rng, testgen::uniform_int(rng, 1, 40));
    const auto g = build(c, {});
    std::map<VertexIndex, int> reviewer_edges, contributor_edges;
    for (const auto& e : g.edges()) {
      for (auto v : e.members) ASSERT_LT(v, g.vertices().size());
      EXPECT_GE(e.raw_weight, 0.0);
      EXPECT_GE(e.weight, 0.0);
      EXPECT_LE(e.weight, 1.0);
      if (e.kind != EdgeKind::pr_reviewer) EXPECT_EQ(e.members.size(), 2u);
      if (e.kind == EdgeKind::pr_reviewer) EXPECT_GE(e.members.size(), 2u);
      if (e.kind == EdgeKind::pr_pr) EXPECT_GT(e.raw_weight, 0.0);
    }
    for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
      const auto& ids = g.edges_of(static_cast<EdgeKind>(k));
      if (ids.empty()) continue;
      const bool has_one = std::any_of(ids.begin(), ids.end(), [&](auto id) { return g.edges()[id].weight == 1.0; });
      EXPECT_TRUE(has_one);
    }
    EXPECT_EQ(g.edges_of(EdgeKind::pr_contributor).size(), c.prs().size());
  }
}
