#pragma once

// Run configuration shared by the CLI subcommands, with a lossless JSON
// round trip. Keys missing from a config file keep their defaults; unknown
// keys are rejected.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgrec/corpus.hpp"
#include "hgrec/error.hpp"
#include "hgrec/evaluation.hpp"
#include "hgrec/params.hpp"

namespace hgrec {

struct RunConfig {
  std::string input;
  std::string bots;     // file of bot regexes, one per line
  std::string exclude;  // file of excluded account ids, one per line
  std::size_t min_reviews = 2;
  HyperParams params;
  std::vector<std::string> recommenders{"hgrec"};
  std::vector<std::size_t> ks{1, 3, 5};
  std::size_t initial_months = 12;
  std::size_t max_rounds = 30;
  std::string output_dir = "report";
  std::size_t ac_window_days = 90;
  double cn_decay = 0.8;
  bool rd_global_n = false;

  void validate() const {
    params.validate();
    if (recommenders.empty()) throw DataError("at least one recommender is required");
    for (const auto& r : recommenders) make_recommender(r, params);
    if (ks.empty()) throw DataError("at least one k is required");
    for (auto k : ks) {
      if (k < 1) throw DataError("k must be at least 1");
    }
    if (initial_months < 1) throw DataError("initial_months must be at least 1");
    if (max_rounds < 1) throw DataError("max_rounds must be at least 1");
    if (ac_window_days < 1) throw DataError("ac_window_days must be at least 1");
    if (!(cn_decay > 0.0 && cn_decay <= 1.0)) throw DataError("cn_decay must lie in (0, 1]");
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline nlohmann::json to_json(const HyperParams& p) {
  return {{"alpha", p.alpha},
          {"m", p.m},
          {"lambda", p.lambda},
          {"solver", to_string(p.solver)},
          {"tol", p.tol},
          {"max_iter", p.max_iter},
          {"direct_max_vertices", p.direct_max_vertices},
          {"similarity_unit", to_string(p.similarity_unit)}};
}

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"input", c.input},
          {"bots", c.bots},
          {"exclude", c.exclude},
          {"min_reviews", c.min_reviews},
          {"params", to_json(c.params)},
          {"recommenders", c.recommenders},
          {"ks", c.ks},
          {"initial_months", c.initial_months},
          {"max_rounds", c.max_rounds},
          {"output_dir", c.output_dir},
          {"ac_window_days", c.ac_window_days},
          {"cn_decay", c.cn_decay},
          {"rd_global_n", c.rd_global_n}};
}

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw DataError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw DataError("unknown key \"" + key + "\" in " + where);
  }
}

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
      throw DataError(std::string("config key \"") + key + "\" has the wrong type");
    }
  }
}

}  // namespace detail

inline HyperParams params_from_json(const nlohmann::json& j, HyperParams p = {}) {
  detail::reject_unknown(j, {"alpha", "m", "lambda", "solver", "tol", "max_iter", "direct_max_vertices", "similarity_unit"},
                         "params");
  detail::read_key(j, "alpha", p.alpha);
  detail::read_key(j, "m", p.m);
  detail::read_key(j, "lambda", p.lambda);
  detail::read_key(j, "tol", p.tol);
  detail::read_key(j, "max_iter", p.max_iter);
  detail::read_key(j, "direct_max_vertices", p.direct_max_vertices);
  std::string s;
  if (j.contains("solver")) {
    detail::read_key(j, "solver", s);
    const auto v = parse_solver_kind(s);
    if (!v) throw DataError("unknown solver '" + s + "'");
    p.solver = *v;
  }
  if (j.contains("similarity_unit")) {
    detail::read_key(j, "similarity_unit", s);
    const auto v = parse_similarity_unit(s);
    if (!v) throw DataError("unknown similarity unit '" + s + "'");
    p.similarity_unit = *v;
  }
  return p;
}

inline RunConfig config_from_json(const nlohmann::json& j, RunConfig c = {}) {
  detail::reject_unknown(j,
                         {"input", "bots", "exclude", "min_reviews", "params", "recommenders", "ks", "initial_months",
                          "max_rounds", "output_dir", "ac_window_days", "cn_decay", "rd_global_n"},
                         "config");
  detail::read_key(j, "input", c.input);
  detail::read_key(j, "bots", c.bots);
  detail::read_key(j, "exclude", c.exclude);
  detail::read_key(j, "min_reviews", c.min_reviews);
  if (auto it = j.find("params"); it != j.end()) c.params = params_from_json(*it, c.params);
  detail::read_key(j, "recommenders", c.recommenders);
  detail::read_key(j, "ks", c.ks);
  detail::read_key(j, "initial_months", c.initial_months);
  detail::read_key(j, "max_rounds", c.max_rounds);
  detail::read_key(j, "output_dir", c.output_dir);
  detail::read_key(j, "ac_window_days", c.ac_window_days);
  detail::read_key(j, "cn_decay", c.cn_decay);
  detail::read_key(j, "rd_global_n", c.rd_global_n);
  return c;
}

}  // namespace hgrec
