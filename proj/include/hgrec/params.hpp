#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "hgrec/error.hpp"

namespace hgrec {

/// Unit in which the longest common prefix of two file paths is measured.
enum class SimilarityUnit { components, chars };

enum class SolverKind { direct, iterative, automatic };

inline std::string to_string(SimilarityUnit u) { return u == SimilarityUnit::chars ? "chars" : "components"; }

inline std::optional<SimilarityUnit> parse_similarity_unit(std::string_view s) {
  if (s == "components") return SimilarityUnit::components;
  if (s == "chars") return SimilarityUnit::chars;
  return std::nullopt;
}

inline std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::direct: return "direct";
    case SolverKind::iterative: return "iterative";
    case SolverKind::automatic: return "auto";
  }
  return "auto";
}

inline std::optional<SolverKind> parse_solver_kind(std::string_view s) {
  if (s == "direct") return SolverKind::direct;
  if (s == "iterative") return SolverKind::iterative;
  if (s == "auto") return SolverKind::automatic;
  return std::nullopt;
}

struct HyperParams {
  double alpha = 0.9;   // 1 / (1 + mu), in (0, 1)
  std::size_t m = 10;   // PR-PR neighbours kept per PR, in [1, 100]
  double lambda = 0.8;  // per-comment decay in the PR-Reviewer weight, in (0, 1]
  SolverKind solver = SolverKind::automatic;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  /// The automatic solver switches to iteration above this many vertices.
  std::size_t direct_max_vertices = 5000;
  SimilarityUnit similarity_unit = SimilarityUnit::components;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must lie in (0, 1)");
    if (m < 1 || m > 100) throw DataError("m must lie in [1, 100]");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw DataError("lambda must lie in (0, 1]");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw DataError("tol must be positive");
    if (max_iter < 1) throw DataError("max_iter must be at least 1");
  }

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

}  // namespace hgrec
