#pragma once

// Ranking on a hypergraph: f* = (I - alpha * A)^-1 y with
// A = Dv^-1 H W De^-1 H^T.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "hgrec/error.hpp"
#include "hgrec/hypergraph.hpp"
#include "hgrec/params.hpp"

namespace hgrec {

using SparseMatrix = Eigen::SparseMatrix<double>;
using RowSparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// H, W, Dv and De of a hypergraph together with the derived transition
/// matrix. Immutable once assembled; any number of solves may share it.
struct RankingSystem {
  SparseMatrix incidence;         // |V| x |E|, h(v, e) in {0, 1}
  Eigen::VectorXd edge_weights;   // diag(W)
  Eigen::VectorXd vertex_degree;  // d(v) = sum_e w(e) h(v, e)
  Eigen::VectorXd edge_degree;    // delta(e) = sum_v h(v, e)
  /// True for vertices with zero weighted degree; their rows of A are zero.
  std::vector<bool> isolated;
  double alpha = 0.9;
  RowSparseMatrix transition;

  std::size_t vertex_count() const { return static_cast<std::size_t>(incidence.rows()); }
};

/// A = Dv^-1 H W De^-1 H^T, with all-zero rows for isolated vertices.
inline RowSparseMatrix transition_matrix(const RankingSystem& sys) {
  const Eigen::Index nv = sys.incidence.rows();
  const Eigen::Index ne = sys.incidence.cols();
  Eigen::VectorXd edge_scale(ne);
  for (Eigen::Index e = 0; e < ne; ++e) edge_scale[e] = sys.edge_weights[e] / sys.edge_degree[e];
  Eigen::VectorXd vertex_scale(nv);
  for (Eigen::Index v = 0; v < nv; ++v) {
    vertex_scale[v] = sys.isolated[static_cast<std::size_t>(v)] ? 0.0 : 1.0 / sys.vertex_degree[v];
  }
  const SparseMatrix scaled = sys.incidence * edge_scale.asDiagonal();
  SparseMatrix product = (scaled * sys.incidence.transpose()).pruned();
  RowSparseMatrix a = vertex_scale.asDiagonal() * product;
  a.prune(0.0);
  a.makeCompressed();
  return a;
}

inline RankingSystem assemble(const Hypergraph& graph, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must lie in (0, 1)");
  if (graph.edges().empty()) throw DataError("hypergraph has no edges; nothing to rank");

  RankingSystem sys;
  sys.alpha = alpha;
  const auto nv = static_cast<Eigen::Index>(graph.vertices().size());
  const auto ne = static_cast<Eigen::Index>(graph.edges().size());
  sys.edge_weights.resize(ne);
  sys.edge_degree.resize(ne);
  sys.vertex_degree = Eigen::VectorXd::Zero(nv);

  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index e = 0; e < ne; ++e) {
    const auto& edge = graph.edges()[static_cast<std::size_t>(e)];
    sys.edge_weights[e] = edge.weight;
    sys.edge_degree[e] = static_cast<double>(edge.members.size());
    for (auto v : edge.members) {
      triplets.emplace_back(static_cast<Eigen::Index>(v), e, 1.0);
      sys.vertex_degree[v] += edge.weight;
    }
  }
  sys.incidence.resize(nv, ne);
  sys.incidence.setFromTriplets(triplets.begin(), triplets.end());
  sys.incidence.makeCompressed();

  sys.isolated.resize(static_cast<std::size_t>(nv));
  for (Eigen::Index v = 0; v < nv; ++v) sys.isolated[static_cast<std::size_t>(v)] = !(sys.vertex_degree[v] > 0.0);
  sys.transition = transition_matrix(sys);
  return sys;
}

/// Indicator query over the vertex set.
struct QueryVector {
  Eigen::VectorXd y;

  static QueryVector indicator(std::size_t size, std::initializer_list<VertexIndex> support) {
    return indicator(size, std::vector<VertexIndex>(support));
  }

  static QueryVector indicator(std::size_t size, const std::vector<VertexIndex>& support) {
    if (support.empty()) throw DataError("query vector needs at least one nonzero entry");
    QueryVector q{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size))};
    for (auto v : support) {
      if (v >= size) throw DataError("query vertex out of range");
      q.y[v] = 1.0;
    }
    return q;
  }
};

struct RankingVector {
  Eigen::VectorXd f;
  std::size_t iterations = 0;  // 0 for the direct solver
  double residual = 0.0;       // max-norm of (I - alpha A) f - y
};

namespace detail {

inline double residual_norm(const RankingSystem& sys, const Eigen::VectorXd& f, const Eigen::VectorXd& y) {
  const Eigen::VectorXd r = f - sys.alpha * (sys.transition * f) - y;
  return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

inline void check_query(const RankingSystem& sys, const QueryVector& q) {
  if (static_cast<std::size_t>(q.y.size()) != sys.vertex_count())
    throw DataError("query vector length does not match the vertex count");
}

}  // namespace detail

/// Direct sparse LU solve of (I - alpha A) f = y.
inline RankingVector solve_direct(const RankingSystem& sys, const QueryVector& query) {
  detail::check_query(sys, query);
  const auto n = static_cast<Eigen::Index>(sys.vertex_count());
  SparseMatrix identity(n, n);
  identity.setIdentity();
  SparseMatrix system = identity - sys.alpha * SparseMatrix(sys.transition);
  system.makeCompressed();

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) throw NumericError("ranking system is singular: " + lu.lastErrorMessage());
  RankingVector out;
  out.f = lu.solve(query.y);
  if (lu.info() != Eigen::Success || !out.f.allFinite()) throw NumericError("direct ranking solve failed");
  out.residual = detail::residual_norm(sys, out.f, query.y);
  return out;
}

/// Neumann-series iteration f <- alpha A f + y starting from f = y, stopped
/// when the max-norm change drops below tol.
inline RankingVector solve_iterative(const RankingSystem& sys, const QueryVector& query, double tol = 1e-10,
                                     std::size_t max_iter = 10000) {
  detail::check_query(sys, query);
  if (!(tol > 0.0)) throw DataError("tolerance must be positive");
  RankingVector out;
  out.f = query.y;
  Eigen::VectorXd next(out.f.size());
  for (std::size_t it = 1; it <= max_iter; ++it) {
    next.noalias() = sys.alpha * (sys.transition * out.f);
    next += query.y;
    const double change = out.f.size() == 0 ? 0.0 : (next - out.f).cwiseAbs().maxCoeff();
    out.f.swap(next);
    out.iterations = it;
    if (change < tol) {
      out.residual = detail::residual_norm(sys, out.f, query.y);
      return out;
    }
  }
  throw NumericError("iterative ranking solve did not converge in " + std::to_string(max_iter) +
                     " iterations (residual " + std::to_string(detail::residual_norm(sys, out.f, query.y)) + ")");
}

/// Dispatches on params.solver; the automatic choice uses the direct solver
/// up to params.direct_max_vertices vertices.
inline RankingVector solve(const RankingSystem& sys, const QueryVector& query, const HyperParams& params) {
  const bool direct = params.solver == SolverKind::direct ||
                      (params.solver == SolverKind::automatic && sys.vertex_count() <= params.direct_max_vertices);
  return direct ? solve_direct(sys, query) : solve_iterative(sys, query, params.tol, params.max_iter);
}

}  // namespace hgrec
