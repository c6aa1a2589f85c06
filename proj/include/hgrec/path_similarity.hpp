#pragma once

// File-path similarity: length of the longest common prefix divided by the
// longer path's length, measured in '/'-separated components or in characters.

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hgrec/params.hpp"

namespace hgrec {

/// Non-empty components of a '/'-separated path.
inline std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t end = std::min(path.find('/', start), path.size());
    if (end > start) out.push_back(path.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

template <typename Seq>
double prefix_ratio(const Seq& a, const Seq& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  const auto mismatch = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  const auto common = static_cast<std::size_t>(mismatch.first - a.begin());
  return static_cast<double>(common) / static_cast<double>(longest);
}

inline double path_similarity(std::string_view f1, std::string_view f2,
                              SimilarityUnit unit = SimilarityUnit::components) {
  if (unit == SimilarityUnit::chars) return prefix_ratio(f1, f2);
  return prefix_ratio(split_path(f1), split_path(f2));
}

/// Paths pre-tokenized into integer sequences so that pairwise similarity is a
/// plain integer-prefix scan. Character mode stores one token per byte.
class PathTable {
 public:
  explicit PathTable(SimilarityUnit unit = SimilarityUnit::components) : unit_(unit) {}

  SimilarityUnit unit() const { return unit_; }

  std::vector<std::uint32_t> tokenize(std::string_view path) {
    std::vector<std::uint32_t> out;
    if (unit_ == SimilarityUnit::chars) {
      out.reserve(path.size());
      for (unsigned char ch : path) out.push_back(ch);
      return out;
    }
    for (auto part : split_path(path)) {
      auto [it, inserted] = ids_.try_emplace(std::string(part), static_cast<std::uint32_t>(ids_.size()));
      out.push_back(it->second);
    }
    return out;
  }

  /// Same as tokenize() without growing the table: unseen components map to
  /// a sentinel id that matches no known component.
  std::vector<std::uint32_t> tokenize_known(std::string_view path) const {
    std::vector<std::uint32_t> out;
    if (unit_ == SimilarityUnit::chars) {
      for (unsigned char ch : path) out.push_back(ch);
      return out;
    }
    for (auto part : split_path(path)) {
      auto it = ids_.find(std::string(part));
      out.push_back(it == ids_.end() ? kUnknownToken : it->second);
    }
    return out;
  }

  static constexpr std::uint32_t kUnknownToken = 0xffffffffu;

 private:
  SimilarityUnit unit_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

using TokenizedPath = std::vector<std::uint32_t>;
using TokenizedFileSet = std::vector<TokenizedPath>;

/// Mean pairwise similarity of two tokenized file sets.
inline double mean_file_similarity(const TokenizedFileSet& a, const TokenizedFileSet& b) {
  if (a.empty() || b.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& fa : a) {
    for (const auto& fb : b) sum += prefix_ratio(fa, fb);
  }
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace hgrec
