#pragma once

// Cleaned-corpus artifact: a canonical JSON document carrying the PRs, a
// stats block and an FNV-1a content hash that must match on load.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgrec/corpus.hpp"
#include "hgrec/error.hpp"
#include "hgrec/time.hpp"

namespace hgrec {

inline constexpr const char* kCorpusFormat = "hgrec-corpus";
inline constexpr int kCorpusVersion = 1;

inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline nlohmann::json stats_json(const CorpusStats& s) {
  return {{"prs", s.prs}, {"comments", s.comments}, {"reviewers", s.reviewers}, {"contributors", s.contributors}};
}

inline nlohmann::json prs_json(const ReviewCorpus& corpus) {
  nlohmann::json prs = nlohmann::json::array();
  for (const auto& pr : corpus.prs()) {
    nlohmann::json comments = nlohmann::json::array();
    for (const auto& c : pr.comments) comments.push_back({{"author", c.author}, {"created_at", format_rfc3339(c.created_at)}});
    prs.push_back({{"id", pr.id},
                   {"contributor", pr.contributor},
                   {"created_at", format_rfc3339(pr.created_at)},
                   {"state", to_string(pr.state)},
                   {"files", pr.file_paths},
                   {"comments", comments}});
  }
  return prs;
}

inline nlohmann::json corpus_to_json(const ReviewCorpus& corpus, const std::string& source_hash = "") {
  const nlohmann::json prs = prs_json(corpus);
  return {{"format", kCorpusFormat},
          {"version", kCorpusVersion},
          {"source_hash", source_hash},
          {"content_hash", hex64(fnv1a(prs.dump()))},
          {"t_s", format_rfc3339(corpus.t_s())},
          {"t_e", format_rfc3339(corpus.t_e())},
          {"stats", stats_json(corpus.stats())},
          {"prs", prs}};
}

inline bool is_corpus_artifact(const nlohmann::json& j) {
  return j.is_object() && j.value("format", std::string{}) == kCorpusFormat;
}

inline ReviewCorpus corpus_from_json(const nlohmann::json& j) {
  if (!is_corpus_artifact(j)) throw DataError("not a corpus artifact");
  if (j.value("version", 0) != kCorpusVersion)
    throw DataError("unsupported corpus artifact version " + std::to_string(j.value("version", 0)));
  const auto& prs = j.at("prs");
  if (j.value("content_hash", std::string{}) != hex64(fnv1a(prs.dump())))
    throw DataError("corpus artifact content hash mismatch; re-run ingest");
  std::vector<PullRequest> out;
  for (const auto& p : prs) out.push_back(detail::parse_record(p));
  return ReviewCorpus::from_prs(std::move(out));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << bytes;
  if (!out) throw DataError("failed writing '" + path + "'");
}

inline void save_corpus(const std::string& path, const ReviewCorpus& corpus, const std::string& source_hash = "") {
  write_file(path, corpus_to_json(corpus, source_hash).dump(1) + "\n");
}

/// Reads a list file: one entry per line, blank lines and lines
/// starting with '#' skipped.
inline std::vector<std::string> read_list_file(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    out.push_back(line.substr(start));
  }
  return out;
}

/// Loads either a corpus artifact or a raw JSONL export (cleaned with
/// `clean_options`). Parse errors carry the file name and line.
inline ReviewCorpus load_corpus(const std::string& path, const CleanOptions& clean_options = {}) {
  const std::string bytes = read_file(path);
  auto doc = nlohmann::json::parse(bytes, nullptr, false);
  if (!doc.is_discarded() && is_corpus_artifact(doc)) {
    try {
      return corpus_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ": malformed corpus artifact: " + e.what());
    } catch (const DataError& e) {
      throw DataError(path + ": " + e.what());
    }
  }
  std::istringstream in(bytes);
  try {
    return clean(parse_export(in).prs, clean_options);
  } catch (const ParseError& e) {
    throw DataError(path + ":" + std::to_string(e.line()) + ": " +
                    std::string(e.what()).substr(std::string("line " + std::to_string(e.line()) + ": ").size()));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace hgrec
