#include <gtest/gtest.h>

#include <cmath>

#include "hgrec/ranker.hpp"
#include "oracles/naive.hpp"
#include "oracles/random_instances.hpp"

using namespace hgrec;

namespace {

Hypergraph two_vertex(double weight) {
  Hypergraph g;
  g.add_vertex(VertexKind::pr, "p");
  g.add_vertex(VertexKind::developer, "d");
  g.add_edge(EdgeKind::pr_contributor, {0, 1}, weight);
  return g;  // weights left raw on purpose
}

Eigen::MatrixXd dense(const RowSparseMatrix& a) { return Eigen::MatrixXd(a); }

}  // namespace

TEST(Assemble, DegreesOfSingleEdge) {
  const auto sys = assemble(two_vertex(0.5), 0.9);
  EXPECT_DOUBLE_EQ(sys.vertex_degree[0], 0.5);
  EXPECT_DOUBLE_EQ(sys.vertex_degree[1], 0.5);
  EXPECT_DOUBLE_EQ(sys.edge_degree[0], 2.0);
}

TEST(Assemble, VertexDegreeSumsWeightsAndEdgeDegreeCountsMembers) {
  Hypergraph g;
  for (int i = 0; i < 4; ++i) g.add_vertex(VertexKind::developer, std::to_string(i));
  g.add_edge(EdgeKind::pr_pr, {0, 1}, 0.2);
  g.add_edge(EdgeKind::pr_reviewer, {0, 1, 2, 3}, 0.3);
  const auto sys = assemble(g, 0.5);
  EXPECT_DOUBLE_EQ(sys.vertex_degree[0], 0.5);
  EXPECT_DOUBLE_EQ(sys.edge_degree[1], 4.0);
}

TEST(Assemble, RejectsBadInput) {
  Hypergraph g;
  g.add_vertex(VertexKind::pr, "p");
  EXPECT_THROW(assemble(g, 0.5), DataError);
  EXPECT_THROW(assemble(two_vertex(1), 1.0), DataError);
  EXPECT_THROW(assemble(two_vertex(1), 0.0), DataError);
}

TEST(Transition, TwoVertexOffDiagonalsAreHalf) {
  for (double w : {0.1, 1.0, 7.0}) {
    const auto a = dense(transition_matrix(assemble(two_vertex(w), 0.5)));
    EXPECT_NEAR(a(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(a(1, 0), 0.5, 1e-15);
    EXPECT_NEAR(a.row(0).sum(), 1.0, 1e-15);
  }
}

TEST(Transition, IsolatedRowIsZero) {
  auto g = two_vertex(1.0);
  g.add_vertex(VertexKind::developer, "lonely");
  const auto sys = assemble(g, 0.5);
  EXPECT_TRUE(sys.isolated[2]);
  EXPECT_EQ(dense(sys.transition).row(2).cwiseAbs().sum(), 0.0);
}

TEST(Transition, MatchesDenseOracleAndIsStochastic) {
  testgen::Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = testgen::random_hypergraph(rng, 60);
    const auto sys = assemble(g, 0.9);
    const auto a = dense(sys.transition);
    std::vector<std::vector<int>> members;
    std::vector<double> weights;
    for (const auto& e : g.edges()) {
      members.emplace_back(e.members.begin(), e.members.end());
      weights.push_back(e.weight);
    }
    const auto ref = oracle::transition(int(g.vertices().size()), members, weights);
    for (int u = 0; u < a.rows(); ++u) {
      for (int v = 0; v < a.cols(); ++v) {
        EXPECT_NEAR(a(u, v), ref[u][v], 1e-12);
        EXPECT_GE(a(u, v), 0.0);
      }
      if (!sys.isolated[u]) {
        EXPECT_NEAR(a.row(u).sum(), 1.0, 1e-12);
      }
    }
  }
}

TEST(Solve, TwoVertexClosedForm) {
  // every entry of A is 1/2 (the edge contains both endpoints), so
  // (I - A/2) f = (1, 0) gives f = (3/2, 1/2)
  const auto sys = assemble(two_vertex(1.0), 0.5);
  const auto q = QueryVector::indicator(2, {0});
  const auto d = solve_direct(sys, q);
  EXPECT_NEAR(d.f[0], 1.5, 1e-12);
  EXPECT_NEAR(d.f[1], 0.5, 1e-12);
  const auto it = solve_iterative(sys, q, 1e-10);
  EXPECT_NEAR((it.f - d.f).cwiseAbs().maxCoeff(), 0.0, 1e-8);
}

TEST(Solve, ZeroTransitionReturnsQuery) {
  Hypergraph g;
  g.add_vertex(VertexKind::pr, "a");
  g.add_vertex(VertexKind::pr, "b");
  g.add_vertex(VertexKind::pr, "c");
  g.add_edge(EdgeKind::pr_pr, {0, 1}, 0.0);  // weight 0: both endpoints isolated
  const auto sys = assemble(g, 0.9);
  const auto q = QueryVector::indicator(3, {2});
  EXPECT_EQ(solve_direct(sys, q).f, q.y);
  const auto it = solve_iterative(sys, q);
  EXPECT_EQ(it.iterations, 1u);
  EXPECT_EQ(it.f, q.y);
}

TEST(Solve, IterationBound) {
  testgen::Rng rng(43);
  const double alpha = 0.9, tol = 1e-12;
  const auto bound = static_cast<std::size_t>(std::ceil(std::log(tol * (1 - alpha)) / std::log(alpha))) + 1;
  for (int trial = 0; trial < 10; ++trial) {
    const auto sys = assemble(testgen::random_hypergraph(rng, 80), alpha);
    const auto r = solve_iterative(sys, QueryVector::indicator(sys.vertex_count(), {0}), tol, 100000);
    EXPECT_LE(r.iterations, bound);
  }
}

TEST(Solve, NonConvergenceReportsResidual) {
  const auto sys = assemble(two_vertex(1.0), 0.99);
  try {
    solve_iterative(sys, QueryVector::indicator(2, {0}), 1e-14, 3);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

TEST(Solve, PropertiesOnRandomGraphs) {
  testgen::Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = testgen::random_hypergraph(rng, 120);
    const auto sys = assemble(g, 0.9);
    const auto n = sys.vertex_count();
    const auto q = QueryVector::indicator(n, {0, static_cast<VertexIndex>(n - 1)});
    const auto d = solve_direct(sys, q);
    EXPECT_LE(d.residual, 1e-9);
    EXPECT_GE(d.f.minCoeff(), -1e-15);
    for (std::size_t v = 0; v < n; ++v) {
      if (sys.isolated[v]) {
        EXPECT_EQ(d.f[static_cast<Eigen::Index>(v)], q.y[static_cast<Eigen::Index>(v)]);
      }
    }
    QueryVector scaled{q.y * 3.0};
    EXPECT_LE((solve_direct(sys, scaled).f - 3.0 * d.f).cwiseAbs().maxCoeff(), 1e-10);
    HyperParams p;
    p.solver = SolverKind::iterative;
    EXPECT_LE((solve(sys, q, p).f - d.f).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Solve, SymmetricVerticesScoreEqually) {
  // star: query at the centre, two leaves in identical positions
  Hypergraph g;
  g.add_vertex(VertexKind::pr, "centre");
  g.add_vertex(VertexKind::developer, "u");
  g.add_vertex(VertexKind::developer, "v");
  g.add_edge(EdgeKind::pr_reviewer, {0, 1}, 0.7);
  g.add_edge(EdgeKind::pr_reviewer, {0, 2}, 0.7);
  const auto f = solve_direct(assemble(g, 0.8), QueryVector::indicator(3, {0})).f;
  EXPECT_DOUBLE_EQ(f[1], f[2]);
}
